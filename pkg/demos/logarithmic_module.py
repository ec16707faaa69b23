"""The deformed L(0) on a rank-two module P_1(lambda).

S glues the source layer to its target; L~(0) = L(0) + S then has a
nilpotent part that is nonzero but squares to zero.

    python3 demos/logarithmic_module.py [lambda]
"""
import sys
from fractions import Fraction

from nwvoa.exact import fstr
from nwvoa.lattice import nw_frame
from nwvoa.screening import LogModuleSpec, deformed_L0, rank_two_certificate, witness_index


def main(lam: Fraction):
    frame = nw_frame()
    spec = LogModuleSpec(1, 0, lam)
    jw = witness_index(spec, frame)
    src = spec.source
    h, j = src.layer_weight(0), src.layer_charge(jw - 1)
    semi, nil = deformed_L0(spec, h, j, frame)
    print(f"P_1({fstr(lam)}): witness layer {jw}, bidegree ({fstr(h)}, {fstr(j)})")
    print("nilpotent part of L~(0), basis = source then target:")
    for row in nil:
        print("   ", [fstr(c) for c in row])

    cert = rank_two_certificate(spec, depth=2, frame=frame)
    for c in cert.summary:
        print(f"  {'ok ' if c['pass'] else 'BAD'} {c['name']}: {c['detail']}")
    print("per-bidegree ranks of S:")
    for r in cert.records:
        print(f"   {r['bidegree']}: {r['dim_source']} -> {r['dim_target']}, rank {r['rank_S']}")


if __name__ == "__main__":
    main(Fraction(sys.argv[1]) if len(sys.argv) > 1 else Fraction(0))
