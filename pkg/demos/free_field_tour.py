"""A walk through the two free-field realizations of V^1(h4).

    python3 demos/free_field_tour.py
"""
from nwvoa.frame_io import format_state
from nwvoa.lattice import nw_frame, weight_of
from nwvoa.nw import GENERATORS, central_charge, inverse_qhr_map, sugawara_state, verify_embedding, wakimoto_map
from nwvoa.screening import kernel_profile, screen


def main():
    frame = nw_frame()
    inv, wak = inverse_qhr_map(frame), wakimoto_map(frame)

    print("Images of the generators (prefix notation, generator coordinates c1 d1 c d phi):")
    for g in GENERATORS:
        same = "same" if inv[g] == wak[g] else "DIFFERENT"
        print(f"  {g}: {format_state(inv[g])}   [{same} in both realizations]")

    rep = verify_embedding(inv, mode_bound=1)
    print(f"\nAffine brackets at mode bound 1: {rep.checks} checks, {len(rep.failures)} failures")

    om = sugawara_state(inv)
    print(f"Sugawara vector: {len(om.terms)} monomials, central charge {central_charge(om, 2)}")
    print("Weights of the images:", {g: str(weight_of(inv[g])) for g in GENERATORS})

    g = frame.vec({"alpha": -1, "beta": -1})
    print(f"\nScreening S = (e^alpha)_0 on e^(-alpha-beta): {screen(frame.exp(g)).pretty()}")
    prof = kernel_profile(2, 1, frame)
    print("dim Ker S on the vacuum module by (weight, charge):")
    for h in range(3):
        print("  ", h, [prof[(h, j)] for j in (-1, 0, 1)])


if __name__ == "__main__":
    main()
