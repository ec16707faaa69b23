from fractions import Fraction as F

import pytest

from nwvoa.lattice import heisenberg, mode_apply, translate
from nwvoa.hvir import free_field_hvir
from nwvoa.nw import (
    GENERATORS,
    AffineMode,
    H4Element,
    UH4,
    affine_bracket,
    casimir,
    casimir_check,
    central_charge,
    expected_sugawara,
    pbw_character,
    sugawara_state,
    verify_embedding,
)

A = AffineMode


def test_affine_bracket_with_level():
    assert affine_bracket(A("E", 1), A("F", -1)) == ({A("I", 0): 1}, 1)


def test_affine_bracket_j_e():
    assert affine_bracket(A("J", 0), A("E", 5)) == ({A("E", 5): 1}, 0)


def test_i_is_central():
    for g in GENERATORS:
        modes, k = affine_bracket(A("I", 2), A(g, -2))
        assert modes == {}
        assert k == (2 if g == "J" else 0)


def test_jacobi_identity():
    gens = [H4Element.gen(g) for g in GENERATORS]
    for a in gens:
        for b in gens:
            for c in gens:
                s = a.bracket(b.bracket(c))
                s2 = b.bracket(c.bracket(a))
                s3 = c.bracket(a.bracket(b))
                assert all(x + y + z == 0 for x, y, z in zip(s.coeffs, s2.coeffs, s3.coeffs))


def test_form_is_invariant():
    gens = [H4Element.gen(g) for g in GENERATORS]
    for a in gens:
        for b in gens:
            for c in gens:
                assert a.bracket(b).pairing(c) == a.pairing(b.bracket(c))


def test_casimir_is_central():
    assert casimir_check() == {g: True for g in GENERATORS}


def test_pbw_normal_order():
    e, f = UH4.gen("E"), UH4.gen("F")
    assert e * f == f * e + UH4.gen("I")
    assert casimir() == UH4({("F", "E"): 1, ("I", "J"): 1})


def test_pbw_character_rows():
    ch = pbw_character(2)
    assert ch.charges(0) == {0: 1}
    assert ch.charges(1) == {-1: 1, 0: 2, 1: 1}
    assert ch.coeff(2, 0) == 6


def test_wakimoto_images(frame, wakimoto):
    v = frame.vacuum()
    al, be, p, q = (frame.vec(n) for n in ("alpha", "beta", "p", "q"))
    mc = frame.exp(frame.vec({"alpha": -1, "beta": -1}))
    assert wakimoto["I"] == heisenberg(p, -1, v)
    inner = heisenberg(al, -1, mc) + heisenberg(be, -1, mc) - heisenberg(p, -1, mc)
    assert wakimoto["F"] == heisenberg(al, -1, inner) - heisenberg(al, -2, mc)
    want_j = heisenberg(p, -1, v) * F(1, 2) + heisenberg(q, -1, v) - heisenberg(be, -1, v)
    assert wakimoto["J"] == want_j


def test_inverse_qhr_images(frame, inverse_qhr):
    _t, i_hv = free_field_hvir(frame)
    c = frame.vec("c")
    assert inverse_qhr["E"] == frame.exp(c)
    assert inverse_qhr["I"] == heisenberg(c, -1, frame.vacuum()) + i_hv


@pytest.mark.parametrize("g", GENERATORS)
def test_images_coincide(inverse_qhr, wakimoto, g):
    assert inverse_qhr[g] == wakimoto[g]


def test_embedding_bound_one(inverse_qhr, wakimoto):
    for real in (inverse_qhr, wakimoto):
        rep = verify_embedding(real, mode_bound=1)
        assert rep.passed, rep.failures[:3]


def test_embedding_samples(frame, inverse_qhr):
    e, f, i = inverse_qhr["E"], inverse_qhr["F"], inverse_qhr["I"]
    v = frame.vacuum()
    from nwvoa.lattice import bracket_modes

    assert not bracket_modes(e, 0, f, 0, v) and not mode_apply(i, 0, v)
    # graded E(1), F(-1) are modes 1 and -1 for weight-one fields
    assert bracket_modes(e, 1, f, -1, v) == v
    assert bracket_modes(inverse_qhr["J"], 0, e, -1, v) == e


def test_sugawara_matches_closed_form(frame, inverse_qhr):
    assert sugawara_state(inverse_qhr) == expected_sugawara(frame)


def test_sugawara_modes(frame, inverse_qhr):
    om = sugawara_state(inverse_qhr)
    assert not mode_apply(om, 1, frame.vacuum())
    for g in GENERATORS:
        assert mode_apply(om, 0, inverse_qhr[g]) == translate(inverse_qhr[g])
        assert mode_apply(om, 1, inverse_qhr[g]) == inverse_qhr[g]


def test_sugawara_central_charge_is_constant(inverse_qhr):
    om = sugawara_state(inverse_qhr)
    cs = {central_charge(om, m) for m in (2, 3)}
    # not fixed by theory here; pinned as a regression value
    assert cs == {4}
