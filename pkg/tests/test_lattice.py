from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nwvoa.lattice import (
    FockState,
    Frame,
    FrameMismatch,
    bracket_modes,
    charge_of,
    direct_bracket,
    heisenberg,
    max_mode,
    mode_apply,
    nw_frame,
    translate,
    weight_of,
    words_of_degree,
)

FR = nw_frame()


def neg(v):
    return tuple(-x for x in v)


def test_heisenberg_zero_mode_pairs(frame):
    h = frame.vec("alpha")
    g = frame.vec({"c": 2, "q": 1})
    st_ = heisenberg(h, -1, frame.vacuum())
    # Y(v, z) = sum v_n z^{-n-1}: the zero mode of h(-1)1 is h(0)
    assert mode_apply(st_, 0, frame.exp(g)) == frame.exp(g) * frame.pair(h, g)


def test_exponential_on_its_inverse(frame):
    c = frame.vec("c")
    assert mode_apply(frame.exp(c), -1, frame.exp(neg(c))) == frame.vacuum()


def test_odd_exponential_squares_to_zero(frame):
    a = frame.exp(frame.vec("alpha"))
    for n in (-1, 0, 1):
        assert not mode_apply(a, n, a)


def test_translation_examples(frame):
    v = frame.vacuum()
    al, be = frame.vec("alpha"), frame.vec("beta")
    assert not translate(v)
    g = frame.vec({"alpha": -1, "beta": -1})
    e = frame.exp(g)
    assert translate(e) == (heisenberg(al, -1, e) + heisenberg(be, -1, e)) * -1
    assert translate(heisenberg(al, -1, v)) == heisenberg(al, -2, v)


def test_heisenberg_commutator(frame):
    a = heisenberg(frame.vec("alpha"), -1, frame.vacuum())
    assert bracket_modes(a, 1, a, -1, frame.vacuum()) == frame.vacuum()


def test_weyl_pair(frame):
    g = frame.vec({"alpha": 1, "beta": 1})
    ap = frame.exp(g)
    am = heisenberg(frame.vec("alpha"), -1, frame.exp(neg(g))) * -1
    # a- has weight 0, so its graded zero mode is am_{-1}
    assert bracket_modes(ap, 0, am, -1, frame.vacuum()) == frame.vacuum()


@pytest.mark.parametrize("m", [-2, -1, 0, 1, 2])
def test_clifford_anticommutator(frame, m):
    # graded modes r + s = 0 are integer modes m + n = -1
    phi = frame.vec("phi")
    psi_p, psi_m = frame.exp(neg(phi)), frame.exp(phi)
    v = frame.vacuum()
    assert bracket_modes(psi_p, m, psi_m, -m - 1, v) == v
    assert direct_bracket(psi_p, m, psi_m, -m - 1, v) == v
    assert not direct_bracket(psi_p, m, psi_m, -m, v)


def test_weights_and_charges(frame):
    c, mu = frame.vec("c"), frame.vec("mu")
    assert weight_of(frame.exp(tuple(F(3, 2) * x for x in c))) == F(3, 2)
    for lam in (F(0), F(2, 5), F(-7, 3)):
        assert weight_of(frame.exp(tuple(m + lam * x for m, x in zip(mu, c)))) == F(-1, 2)
    assert weight_of(frame.vacuum()) == 0
    assert charge_of(frame.exp(c)) == 1


def test_frames_do_not_mix(frame):
    other = Frame(("a",), [[2]], ("a",), name="a2")
    with pytest.raises(FrameMismatch):
        mode_apply(frame.vacuum(), 0, other.vacuum())


# -- random states ------------------------------------------------------------

_BASIS = ("c", "alpha", "p", "q", "phi")
_GENS = list(range(5))


@st.composite
def states(draw, max_deg=2):
    coeffs = draw(st.lists(st.integers(-1, 1), min_size=5, max_size=5))
    e = FR.vec(dict(zip(_BASIS, coeffs)))
    deg = draw(st.integers(0, max_deg))
    words = words_of_degree(_GENS, deg)
    w = words[draw(st.integers(0, len(words) - 1))]
    c = draw(st.integers(1, 3))
    return FockState(FR, {(w, FR.intern(e)): c})


def _skew_rhs(a, n, b):
    sign = -1 if (a.parity() and b.parity()) else 1
    out = FR.zero()
    top = max_mode(b, a)
    for i in range(0, max(top - n, -1) + 1):
        t = mode_apply(b, n + i, a)
        for _ in range(i):
            t = translate(t)
        out = out + t * F(-1 if (n + i) % 2 == 0 else 1, factorial(i))
    return out * sign


@settings(max_examples=25, deadline=None)
@given(states(), states(), st.integers(-2, 1))
def test_skew_symmetry(a, b, n):
    assert mode_apply(a, n, b) == _skew_rhs(a, n, b)


@settings(max_examples=25, deadline=None)
@given(states(), states(), st.integers(-2, 2))
def test_translation_covariance(a, b, n):
    assert mode_apply(translate(a), n, b) == mode_apply(a, n - 1, b) * -n


@settings(max_examples=20, deadline=None)
@given(states(1), states(1), states(1), st.integers(-1, 1), st.integers(-1, 1))
def test_commutator_formula(a, b, t, m, n):
    assert bracket_modes(a, m, b, n, t) == direct_bracket(a, m, b, n, t)
