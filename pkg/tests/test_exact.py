from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nwvoa.exact import (
    BigradedSeries,
    Q,
    SparseEchelon,
    eta_power,
    exact_rank,
    fstr,
    frac_part,
    identity,
    kernel_basis,
    matmul,
    rank,
    rational_reconstruct,
    series_product,
    sparse_rank,
    zeros,
)


def test_square_of_one_plus_q():
    a = BigradedSeries.from_q_coeffs([1, 1], max_h=2)
    assert series_product(a, a).q_coeffs() == [1, 2, 1]


def test_eta_inverse_square():
    assert eta_power(2, 3).q_coeffs() == [1, 2, 5, 10]


def test_eta_times_one_minus_q():
    s = eta_power(2, 2) * BigradedSeries.from_q_coeffs([1, -1], max_h=2)
    assert s.q_coeffs() == [1, 1, 3]


def test_coeff_past_truncation_raises():
    with pytest.raises(ValueError):
        eta_power(2, 3).coeff(4)


def test_offsets_add_under_product():
    a = BigradedSeries.monomial(offset=F(1, 3), max_h=2)
    b = BigradedSeries.monomial(offset=F(-1, 12), max_h=2)
    assert (a * b).offset == F(1, 4)


def test_kernel_of_identity_is_empty():
    assert kernel_basis(identity(2)) == []


def test_kernel_of_zero_map():
    assert len(kernel_basis(zeros(2, 3), 3)) == 3


def test_kernel_at_x0_y1():
    x, y = 0, 1
    ker = kernel_basis([[2 * y, x - 2], [x, 0]])
    assert len(ker) == 1
    v = ker[0]
    assert v[0] == v[1] != 0


def test_floats_rejected():
    with pytest.raises(TypeError):
        Q(0.5)


def test_fraction_strings():
    assert fstr(F(-2, 4)) == "-1/2"
    assert fstr(3) == "3"
    assert frac_part(F(-2, 3)) == F(1, 3)


def test_rational_reconstruction():
    p = (1 << 61) - 1
    for v in (F(3, 7), F(-5, 11), F(0)):
        a = v.numerator * pow(v.denominator, -1, p) % p
        assert rational_reconstruct(a, p) == v


small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5))
def test_ranks_agree_with_sympy(rows):
    vecs = [{k: v for k, v in enumerate(r) if v} for r in rows]
    want = sympy.Matrix(rows).rank()
    assert rank(rows) == want
    assert sparse_rank(vecs) == want
    assert exact_rank(vecs) == want


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_kernel_vectors_are_killed(rows):
    for v in kernel_basis(rows, 3):
        assert all(r[0] == 0 for r in matmul(rows, [[c] for c in v]))
    assert len(kernel_basis(rows, 3)) == 3 - rank(rows)


def test_echelon_membership():
    e = SparseEchelon()
    assert e.add({"a": 1, "b": 2})
    assert not e.add({"a": 2, "b": 4})
    assert e.contains({"a": F(1, 2), "b": 1})
    assert not e.contains({"b": 1})
