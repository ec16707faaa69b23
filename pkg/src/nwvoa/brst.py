"""BRST reduction of the level-one affine vacuum module to L^HVir.

The complex is V (x) F_ch inside the ambient lattice: V through the
free-field images of E, F, I, J, and the Clifford pair through the
direction phi (<phi, phi> = 1).  The differential is the zero mode of

    d = E(-1)1 (x) e^phi + 1 (x) e^phi = e^{c + phi} + e^phi.

The reduced generators are

    L^ = omega_sug + T(J) + 1/2 phi(-1)^2 - 1/2 phi(-2),    I^ = I.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .hvir import hvir_character, verify_relations
from .lattice import FockState, Frame, bracket_modes, heisenberg, mode_apply, nw_frame, translate, words_of_degree
from .nw import GENERATORS, H4Realization, sugawara_state, wakimoto_map

__all__ = [
    "BRSTComplexSpec",
    "brst_complex",
    "d0_apply",
    "d0_square_check",
    "reduced_generators",
    "reduced_structure_check",
    "ghost_states",
    "affine_states",
    "euler_profile",
]


@dataclass
class BRSTComplexSpec:
    frame: Frame
    real: H4Realization
    d_state: FockState

    @property
    def phi(self):
        return self.frame.vec("phi")

    def fermion_charge(self, state: FockState) -> int:
        """phi-coordinate of the (single) exponent."""
        k = self.frame.pair(self.phi, state.exponent())
        return int(k)


def brst_complex(frame: Optional[Frame] = None, real: Optional[H4Realization] = None) -> BRSTComplexSpec:
    frame = frame or nw_frame()
    real = real or wakimoto_map(frame)
    phi = frame.vec("phi")
    e_img = real.images["E"]
    d_state = _tensor(e_img, frame.exp(phi)) + frame.exp(phi)
    return BRSTComplexSpec(frame, real, d_state)


def _tensor(a: FockState, b: FockState) -> FockState:
    """a (x) b for states living on orthogonal sublattices."""
    frame = a.frame
    out: Dict = {}
    for (wa, ea), ca in a.terms.items():
        for (wb, eb), cb in b.terms.items():
            k = (tuple(sorted(wa + wb)), frame.add_vectors(ea, eb))
            out[k] = out.get(k, 0) + ca * cb
    return FockState(frame, out)


def d0_apply(cx: BRSTComplexSpec, state: FockState) -> FockState:
    if state.frame != cx.frame:
        raise ValueError("state lives in a different frame")
    return mode_apply(cx.d_state, 0, state)


# ---------------------------------------------------------------------------
# spanning states
# ---------------------------------------------------------------------------


def ghost_states(frame: Frame, k: int, weight: int) -> List[FockState]:
    """Basis of F_ch with fermion charge k and fermionic weight ``weight``.

    e^{k phi} has weight k(k+1)/2 for the fermionic conformal vector.
    """
    phi = frame.vec("phi")
    base = k * (k + 1) // 2
    if weight < base:
        return []
    e = frame.intern(tuple(k * x for x in phi))
    g = [frame.generators.index("phi")]
    return [FockState(frame, {(w, e): 1}) for w in words_of_degree(g, weight - base)]


def _pbw_monomials(max_degree: int):
    modes = [(g, m) for m in range(1, max_degree + 1) for g in GENERATORS]
    out = []

    def rec(start, remaining, acc):
        out.append(tuple(acc))
        for idx in range(start, len(modes)):
            g, m = modes[idx]
            if m <= remaining:
                rec(idx, remaining - m, acc + [(g, m)])

    rec(0, max_degree, [])
    return out


_CHARGE = {"E": 1, "F": -1, "I": 0, "J": 0}


def affine_states(real: H4Realization, max_weight: int, charge_window: int) -> Dict[Tuple[int, int], List[FockState]]:
    """Images of PBW monomials on the vacuum, keyed by (L^ weight, J charge).

    The L^ weight of X(-m) is m - charge(X).  Monomials are cut at L^
    weight <= max_weight and |charge| <= charge_window.
    """
    frame = real.target
    # E(-1) has L^ weight 0, so the charge window bounds the mode degree
    max_deg = max_weight + charge_window
    out: Dict[Tuple[int, int], List[FockState]] = {}
    for mono in _pbw_monomials(max_deg):
        q = sum(_CHARGE[g] for g, _ in mono)
        w = sum(m for _, m in mono) - q
        if w > max_weight or abs(q) > charge_window:
            continue
        st = frame.vacuum()
        for g, m in reversed(mono):
            st = mode_apply(real.images[g], -m, st)
            if not st:
                break
        if st:
            out.setdefault((w, q), []).append(st)
    return out


def d0_square_check(n: int = 4, charge_window: int = 1, fermion_window: Tuple[int, int] = (-2, 2),
                    cx: Optional[BRSTComplexSpec] = None) -> List[dict]:
    """d0(d0 A) on spanning states A of total L^ weight <= n.

    A runs over (affine PBW image) (x) (ghost Fock basis) with fermion
    charge in ``fermion_window``.  Returns one record per sector.
    """
    cx = cx or brst_complex()
    frame = cx.frame
    aff = affine_states(cx.real, n, charge_window)
    records = []
    for k in range(fermion_window[0], fermion_window[1] + 1):
        for gw in range(n + 1):
            ghosts = ghost_states(frame, k, gw)
            if not ghosts:
                continue
            for (w, q), states in sorted(aff.items()):
                if w + gw > n:
                    continue
                bad = 0
                count = 0
                for a in states:
                    for g in ghosts:
                        st = _tensor(a, g)
                        count += 1
                        if d0_apply(cx, d0_apply(cx, st)):
                            bad += 1
                records.append({"fermion_charge": k, "weight": w + gw, "affine": [w, q],
                                "states": count, "failures": bad, "pass": bad == 0})
    return records


# ---------------------------------------------------------------------------
# reduced generators
# ---------------------------------------------------------------------------


def reduced_generators(cx: BRSTComplexSpec) -> Tuple[FockState, FockState]:
    frame = cx.frame
    phi = frame.vec("phi")
    v = frame.vacuum()
    half = Fraction(1, 2)
    fer = heisenberg(phi, -1, heisenberg(phi, -1, v)) * half - heisenberg(phi, -2, v) * half
    lhat = sugawara_state(cx.real) + translate(cx.real.images["J"]) + fer
    return lhat, cx.real.images["I"]


def reduced_structure_check(mode_bound: int = 3, cx: Optional[BRSTComplexSpec] = None,
                            targets: Optional[Sequence[FockState]] = None) -> List[dict]:
    """Closedness and HVir structure of (L^, I^); one check record each."""
    cx = cx or brst_complex()
    frame = cx.frame
    lhat, ihat = reduced_generators(cx)
    v = frame.vacuum()
    checks = []

    def add(name, ok, detail=""):
        checks.append({"name": name, "pass": bool(ok), "detail": detail})

    add("d0_Lhat", not d0_apply(cx, lhat))
    add("d0_Ihat", not d0_apply(cx, ihat))
    add("d0_vacuum", not d0_apply(cx, v))
    if targets is None:
        targets = [v, ihat, lhat, frame.exp(tuple(-x for x in frame.vec("phi")))]
    fails = verify_relations(lhat, ihat, targets, mode_bound)
    add("hvir_relations", not fails, f"{len(fails)} failures, |m|,|n| <= {mode_bound}")
    l22 = bracket_modes(lhat, 3, lhat, -1, v)
    add("virasoro_c", l22 == v, "[L(2), L(-2)]1 = 1 for c = 2")
    add("L1_I", mode_apply(lhat, 2, ihat) == v * -2, "L(1)I = -2 . 1")
    add("I1_Im1", not bracket_modes(ihat, 1, ihat, -1, v), "[I(1), I(-1)] = 0")
    add("L0_I", mode_apply(lhat, 1, ihat) == ihat, "L(0)I = I")
    add("Lm1_I", mode_apply(lhat, 0, ihat) == translate(ihat), "L(-1)I = TI")
    return checks


# ---------------------------------------------------------------------------
# Euler characteristic probe
# ---------------------------------------------------------------------------


def _affine_character(max_h: int, zcap: int) -> Dict[Tuple[int, int], int]:
    """dim V at (L^ weight, J charge) for |charge| <= zcap.

    E(-n) counts as q^{n-1} z, F(-n) as q^{n+1} z^-1 and I(-n), J(-n) as q^n.
    F factors go first, so the charge only grows afterwards and cutting at
    zcap loses nothing below it.
    """
    factors = [(n + 1, -1) for n in range(1, max_h)]
    factors += [(n, 0) for n in range(1, max_h + 1) for _ in range(2)]
    factors += [(n - 1, 1) for n in range(1, max_h + 2)]
    series: Dict[Tuple[int, int], int] = {(0, 0): 1}
    for dh, dz in factors:
        new: Dict[Tuple[int, int], int] = {}
        for (h, z), c in series.items():
            hh, zz = h, z
            while hh <= max_h and zz <= zcap:
                new[(hh, zz)] = new.get((hh, zz), 0) + c
                hh, zz = hh + dh, zz + dz
        series = new
    return series


def _ghost_character(max_h: int, kmin: int, kmax: int) -> Dict[Tuple[int, int], int]:
    """dim F_ch at (weight, fermion charge k), enumerated from the phi Fock basis."""
    frame = nw_frame()
    out = {}
    for k in range(kmin, kmax + 1):
        for w in range(max_h + 1):
            n = len(ghost_states(frame, k, w))
            if n:
                out[(w, k)] = n
    return out


def euler_profile(max_h: int = 4, window: int = 3) -> List[dict]:
    """Alternating sums over fermion charge, refined by J_tot = J - k.

    Each (h, J_tot) sector is finite.  The Euler number at weight h is the
    sum over J_tot in [-window, window]; it is compared with the L^HVir
    vacuum character.  Sectors with |J_tot| near the window edge are only
    reported, since truncation of E(-1) powers can leave them incomplete.
    """
    kmax = window + max_h + 2
    aff = _affine_character(max_h, window + kmax)
    gh = _ghost_character(max_h, -kmax, kmax)
    chi: Dict[Tuple[int, int], int] = {}
    for (h1, q), a in aff.items():
        for (h2, k), b in gh.items():
            h = h1 + h2
            if h > max_h:
                continue
            m = q - k
            if abs(m) > window:
                continue
            chi[(h, m)] = chi.get((h, m), 0) + (-1) ** (k % 2) * a * b
    vac = hvir_character(0, 0, max_h).q_coeffs()
    out = []
    for h in range(max_h + 1):
        sectors = {m: chi.get((h, m), 0) for m in range(-window, window + 1)}
        e = sum(sectors.values())
        out.append({"h": h, "euler": e, "character": vac[h], "sectors": sectors, "pass": e == vac[h]})
    return out
