from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dqform.dual import DualNumber, dn_abs, dn_div, dn_leq, dn_mul, dn_sqrt, format_dual, parse_dual
from dqform.errors import DomainError, NonAppreciableDivisor

from oracles import dual_from_matrix, dual_matrix

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
duals = st.builds(DualNumber, finite, finite)
appreciable = duals.filter(lambda d: abs(d.std) > 1e-3)


def test_mul_examples():
    assert dn_mul(DualNumber(1, 2), DualNumber(3, 4)) == DualNumber(3, 10)
    assert dn_mul(DualNumber(0, 2), DualNumber(0, 5)) == DualNumber(0, 0)
    x = DualNumber(-2.5, 7.0)
    assert dn_mul(DualNumber(1, 0), x) == x


def test_div_examples():
    assert dn_div(DualNumber(3, 10), DualNumber(1, 2)) == DualNumber(3, 4)
    assert dn_div(DualNumber(0, 4), DualNumber(2, 0)) == DualNumber(0, 2)
    with pytest.raises(NonAppreciableDivisor):
        dn_div(DualNumber(1, 0), DualNumber(0, 1))


def test_leq_examples():
    assert dn_leq(DualNumber(1, 5), DualNumber(2, 0))
    assert dn_leq(DualNumber(1, 2), DualNumber(1, 3))
    assert not dn_leq(DualNumber(1, 3), DualNumber(1, 2))


def test_sqrt_examples():
    assert dn_sqrt(DualNumber(4, 4)) == DualNumber(2, 1)
    assert dn_sqrt(DualNumber(0, 0)) == DualNumber(0, 0)
    with pytest.raises(DomainError):
        dn_sqrt(DualNumber(0, 1))
    with pytest.raises(DomainError):
        dn_sqrt(DualNumber(-1, 0))


def test_classification_is_exclusive():
    for d in (DualNumber(0, 3), DualNumber(2, 0), DualNumber(0, 0)):
        assert d.appreciable != d.infinitesimal
    assert DualNumber(0, 3).infinitesimal and DualNumber(-1, 0).appreciable


@given(duals, duals)
def test_mul_matches_matrix_representation(a, b):
    got = dn_mul(a, b)
    ref = dual_from_matrix(dual_matrix(a.std, a.dual) @ dual_matrix(b.std, b.dual))
    assert math.isclose(got.std, ref[0], rel_tol=1e-12, abs_tol=1e-9)
    assert math.isclose(got.dual, ref[1], rel_tol=1e-12, abs_tol=1e-9)
    assert dn_mul(a, b) == dn_mul(b, a)


@given(duals, duals, duals)
def test_ring_axioms(a, b, c):
    size = lambda d: 1 + abs(d.std) + abs(d.dual)  # noqa: E731
    scale = size(a) * size(b) * size(c)
    assert ((a * b) * c).isclose(a * (b * c), atol=1e-13 * scale)
    assert (a * (b + c)).isclose(a * b + a * c, atol=1e-13 * scale)


@given(finite, finite)
def test_epsilon_is_nilpotent(b, d):
    assert dn_mul(DualNumber(0, b), DualNumber(0, d)) == DualNumber(0, 0)


@given(duals, appreciable)
def test_div_inverts_mul(a, b):
    back = dn_div(dn_mul(a, b), b)
    scale = 1 + abs(a.std) + abs(a.dual)
    assert back.isclose(a, atol=1e-12 * scale * (1 + abs(b.dual / b.std)) * 1e3)


@given(duals, duals, duals)
def test_total_order(a, b, c):
    assert dn_leq(a, a)
    assert dn_leq(a, b) or dn_leq(b, a)
    if dn_leq(a, b) and dn_leq(b, a):
        assert a == b
    if dn_leq(a, b) and dn_leq(b, c):
        assert dn_leq(a, c)
    # exactly one of <, =, >
    assert sum([a < b, a == b, a > b]) == 1


@given(st.floats(1e-6, 1e6), finite)
def test_sqrt_squares_back(s, d):
    a = DualNumber(s, d)
    r = dn_sqrt(a)
    sq = r * r
    assert math.isclose(sq.std, a.std, rel_tol=1e-10)
    assert math.isclose(sq.dual, a.dual, rel_tol=1e-10, abs_tol=1e-10)


def test_tolerant_order_breaks_ties_on_dual_part():
    a, b = DualNumber(1.0, 0.5), DualNumber(1.0 + 1e-13, 0.1)
    assert dn_leq(a, b)  # exact order: standard parts differ
    assert not dn_leq(a, b, tol=1e-9)  # treated as a tie, dual parts decide


def test_abs():
    assert dn_abs(DualNumber(-2, 3)) == DualNumber(2, -3)
    assert dn_abs(DualNumber(0, -3)) == DualNumber(0, 3)
    assert abs(DualNumber(2, 1)) == DualNumber(2, 1)


@given(duals)
def test_text_round_trip(a):
    assert parse_dual(format_dual(a)) == a


def test_text_format():
    assert format_dual(DualNumber(2, 3)) == "2+3ε"
    assert format_dual(DualNumber(1, -0.5)) == "1-0.5ε"
    assert parse_dual("7") == DualNumber(7, 0)
    with pytest.raises(ValueError):
        parse_dual("abc")


def test_operators_with_scalars():
    a = DualNumber(2, 1)
    assert a + 1 == DualNumber(3, 1)
    assert 1 - a == DualNumber(-1, -1)
    assert 2 * a == DualNumber(4, 2)
    assert (1 / a).isclose(DualNumber(0.5, -0.25))
    assert np.isclose((a / 2).dual, 0.5)
