import pytest

from nwvoa.brst import (
    brst_complex,
    d0_apply,
    d0_square_check,
    euler_profile,
    ghost_states,
    reduced_generators,
    reduced_structure_check,
)
from nwvoa.lattice import Frame, heisenberg, weight_of


@pytest.fixture(scope="module")
def cx(frame, wakimoto):
    return brst_complex(frame, wakimoto)


def test_vacuum_closed(cx, frame):
    assert not d0_apply(cx, frame.vacuum())


def test_reduced_generators_closed(cx):
    lhat, ihat = reduced_generators(cx)
    assert not d0_apply(cx, lhat)
    assert not d0_apply(cx, ihat)


def _sq(cx, st):
    return d0_apply(cx, d0_apply(cx, st))


def test_square_on_examples(cx, frame, wakimoto):
    phi, al = frame.vec("phi"), frame.vec("alpha")
    v = frame.vacuum()
    for st in (frame.exp(tuple(-x for x in phi)), wakimoto["F"], heisenberg(al, -1, heisenberg(al, -1, v)),
               heisenberg(al, -2, frame.exp(phi))):
        assert not _sq(cx, st)


def test_d0_raises_fermion_charge(cx, frame, wakimoto):
    st = d0_apply(cx, wakimoto["F"])
    assert st
    assert {cx.frame.pair(cx.phi, e) for e in st.exponents()} == {1}


def test_square_sectors_low_weight(cx):
    recs = d0_square_check(n=2, charge_window=1, fermion_window=(-1, 1), cx=cx)
    assert recs and all(r["pass"] for r in recs)


def test_structure_checks(cx):
    checks = reduced_structure_check(mode_bound=2, cx=cx)
    assert {c["name"] for c in checks} >= {"d0_Lhat", "d0_Ihat", "virasoro_c", "L1_I", "I1_Im1", "L0_I"}
    assert all(c["pass"] for c in checks), [c for c in checks if not c["pass"]]


def test_ghost_weights(frame):
    lhat_frame = frame.with_conformal(reduced_generators(brst_complex(frame))[0])
    for k in (-2, -1, 0, 1, 2):
        (top,) = ghost_states(frame, k, k * (k + 1) // 2)
        assert weight_of(top.in_frame(lhat_frame)) == k * (k + 1) // 2


def test_euler_low_weights():
    rows = euler_profile(2, 3)
    assert [r["euler"] for r in rows] == [1, 1, 3]
    assert all(r["pass"] for r in rows)


def test_frame_mismatch(cx):
    other = Frame(("a",), [[2]], ("a",))
    with pytest.raises(ValueError):
        d0_apply(cx, other.vacuum())
