from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dqform.dual import DualNumber, dn_leq
from dqform.dualquat import DualQuaternion
from dqform.errors import DimensionMismatch, NonAppreciable, NotHermitian, Singular
from dqform.matrix import (
    Definiteness,
    DQMatrix,
    classify_definiteness,
    gershgorin,
    herm_eigen,
    inner,
    mat_inv,
    mat_mul,
    quadratic_form,
    rayleigh,
)
from dqform.quaternion import Quaternion, qconj_arr
from dqform.sampling import make_rng, random_hermitian

from oracles import hermitian_2x2_oracle, real_rep, standard_eigenvalues

seeds = st.integers(0, 2**32 - 1)
I, J = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0)


def dqm(entries) -> DQMatrix:
    return DQMatrix.from_entries(entries)


def q(w=0.0, x=0.0, y=0.0, z=0.0) -> Quaternion:
    return Quaternion(w, x, y, z)


def dq(std: Quaternion, dual: Quaternion | None = None) -> DualQuaternion:
    return DualQuaternion(std, dual or Quaternion())


def example_2x2() -> DQMatrix:
    h = dq(I, J)
    return dqm([[0.0, h], [-h, 0.0]])


def random_matrix(rng, m, n) -> DQMatrix:
    return DQMatrix(rng.normal(size=(m, n, 4)), rng.normal(size=(m, n, 4)))


# products and inverses ------------------------------------------------------

def test_identity_product():
    rng = make_rng(1)
    a = random_matrix(rng, 3, 3)
    assert (a @ DQMatrix.identity(3)).isclose(a, atol=0)


@given(seeds)
def test_parts_rule(seed):
    rng = make_rng(seed)
    a, b = random_matrix(rng, 2, 3), random_matrix(rng, 3, 2)
    c = mat_mul(a, b)
    for i in range(2):
        for j in range(2):
            ref = sum((a[i, k] * b[k, j] for k in range(3)), DualQuaternion())
            assert c[i, j].isclose(ref, atol=1e-12)
    assert (a @ b).H.isclose(b.H @ a.H, atol=1e-12)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        DQMatrix.zeros(2, 3) @ DQMatrix.zeros(2, 3)


def test_inverse_examples():
    assert mat_inv(DQMatrix.identity(3)).isclose(DQMatrix.identity(3))
    d = DQMatrix.diag([dq(q(2)), dq(I)])
    assert mat_inv(d).isclose(DQMatrix.diag([dq(q(0.5)), dq(-I)]), atol=1e-15)
    rng = make_rng(4)
    n = rng.normal(size=(3, 3, 4))
    a = DQMatrix(DQMatrix.identity(3).std, n)
    assert mat_inv(a).isclose(DQMatrix(DQMatrix.identity(3).std, -n), atol=1e-14)
    with pytest.raises(Singular):
        mat_inv(DQMatrix.from_real([[1, 2], [2, 4]]))


@given(seeds)
def test_inverse_property(seed):
    rng = make_rng(seed)
    a = random_matrix(rng, 4, 4)
    inv = mat_inv(a)
    assert (a @ inv).isclose(DQMatrix.identity(4), atol=1e-8)


# predicates -----------------------------------------------------------------

def test_hermitian_predicate_and_parts():
    a = example_2x2()
    assert a.is_hermitian()
    std_only = DQMatrix(a.std, np.zeros_like(a.dual))
    dual_only = DQMatrix(a.dual, np.zeros_like(a.dual))
    assert std_only.is_hermitian() and dual_only.is_hermitian()
    bad = dqm([[1.0, dq(I)], [dq(I), 1.0]])
    assert not bad.is_hermitian()


def test_unitary_predicate():
    assert DQMatrix.identity(3).is_unitary()
    u = DQMatrix.diag([dq(I), dq(q(0, 0, 0, 1))])
    assert u.is_unitary()
    assert not DQMatrix.from_real([[2.0]]).is_unitary()


# eigen-decomposition --------------------------------------------------------

def test_eigen_1x1():
    dec = herm_eigen(dqm([[DualNumber(2, 3)]]))
    assert dec.eigenvalues == [DualNumber(2, 3)]
    assert dec.eigenvectors.isclose(DQMatrix.identity(1), atol=1e-15)


def test_eigen_2x2_example():
    a = example_2x2()
    dec = herm_eigen(a)
    assert dec.eigenvalues[0].isclose(DualNumber(1, 0), atol=1e-12)
    assert dec.eigenvalues[1].isclose(DualNumber(-1, 0), atol=1e-12)
    x = DQMatrix.column([dq(I), dq(q(1))])
    assert rayleigh(a, x).isclose(DualNumber(1, 0), atol=1e-12)


def test_eigen_cluster_refinement():
    a = DQMatrix.from_real(np.eye(2), np.diag([5.0, 7.0]))
    dec = herm_eigen(a)
    assert dec.eigenvalues == [DualNumber(1, 7), DualNumber(1, 5)]
    assert dec.clusters == [[0, 1]]


def test_not_hermitian_rejected():
    with pytest.raises(NotHermitian):
        herm_eigen(DQMatrix.from_real([[1, 2], [3, 1]]))
    with pytest.raises(NotHermitian):
        gershgorin(DQMatrix.from_real([[1, 2], [3, 1]]))


def _check_decomposition(a: DQMatrix) -> None:
    n = a.shape[0]
    dec = herm_eigen(a)
    assert len(dec.eigenvalues) == n
    assert dec.residual <= 1e-8 * a.fro_norm()
    assert (dec.reconstruct() - a).fro_norm() <= 1e-8 * a.fro_norm()
    assert dec.eigenvectors.is_unitary(1e-9)
    sigma = dec.eigenvectors.H @ a @ dec.eigenvectors
    assert (sigma - dec.sigma()).fro_norm() <= 1e-8 * a.fro_norm()
    # sorted descending, dual parts descending inside clusters
    vals = dec.eigenvalues
    assert all(dn_leq(vals[k + 1], vals[k], 1e-8) for k in range(n - 1))
    np.testing.assert_allclose([v.std for v in vals], standard_eigenvalues(a.std), atol=1e-9)


@given(seeds, st.integers(1, 6))
def test_random_decomposition(seed, n):
    _check_decomposition(random_hermitian(make_rng(seed), n))


@given(seeds)
def test_repeated_standard_eigenvalues(seed):
    # A = U diag(2, 2, -1, -1) U* has two clusters; A_d generic
    rng = make_rng(seed)
    base = random_hermitian(rng, 4)
    u = herm_eigen(DQMatrix(base.std, np.zeros_like(base.std))).eigenvectors
    d = DQMatrix.from_real(np.diag([2.0, 2.0, -1.0, -1.0]))
    std = (DQMatrix(u.std, np.zeros_like(u.std)) @ d @ DQMatrix(u.std, np.zeros_like(u.std)).H).std
    a = DQMatrix(0.5 * (std + qconj_arr(std.transpose(1, 0, 2))), base.dual)
    dec = herm_eigen(a)
    assert sorted(len(c) for c in dec.clusters) == [2, 2]
    _check_decomposition(a)


@given(seeds)
def test_first_order_eigen_equations(seed):
    a = random_hermitian(make_rng(seed), 4)
    dec = herm_eigen(a)
    for k, lam in enumerate(dec.eigenvalues):
        x = dec.eigenvector(k)
        std = DQMatrix(a.std, np.zeros_like(a.std)) @ DQMatrix(x.std, np.zeros_like(x.std))
        np.testing.assert_allclose(std.std[:, 0], x.std[:, 0] * lam.std, atol=1e-9)
        # A x_d + A_d x = x_d λ + x λ_d
        lhs = (a @ x).dual[:, 0]
        rhs = x.dual[:, 0] * lam.std + x.std[:, 0] * lam.dual
        np.testing.assert_allclose(lhs, rhs, atol=1e-8)
        assert rayleigh(a, x).isclose(lam, atol=1e-8)


@given(seeds)
def test_2x2_oracle(seed):
    rng = make_rng(seed)
    a = random_hermitian(rng, 2)
    ref = hermitian_2x2_oracle(a.std, a.dual)
    got = herm_eigen(a).eigenvalues
    for (s, d), v in zip(ref, got):
        assert math.isclose(v.std, s, abs_tol=1e-9)
        assert math.isclose(v.dual, d, abs_tol=1e-9)


def test_real_representation_oracle_is_consistent():
    a = random_hermitian(make_rng(5), 3)
    r = real_rep(a.std)
    np.testing.assert_allclose(r, r.T, atol=1e-12)


# Rayleigh quotient ----------------------------------------------------------

def test_rayleigh_examples():
    rng = make_rng(2)
    x = DQMatrix(rng.normal(size=(3, 1, 4)), rng.normal(size=(3, 1, 4)))
    assert rayleigh(DQMatrix.identity(3), x).isclose(DualNumber(1, 0), atol=1e-12)
    one_by_one = dqm([[DualNumber(2, 3)]])
    assert rayleigh(one_by_one, DQMatrix.column([DualNumber(1, 1)])).isclose(DualNumber(2, 3), atol=1e-14)
    with pytest.raises(NonAppreciable):
        rayleigh(one_by_one, DQMatrix.column([DualNumber(0, 1)]))


@given(seeds)
def test_quadratic_form_is_dual_number(seed):
    rng = make_rng(seed)
    a = random_hermitian(rng, 3)
    x = DQMatrix(rng.normal(size=(3, 1, 4)), rng.normal(size=(3, 1, 4)))
    full = inner(x, a @ x)
    assert full.is_dual_number(1e-9)
    assert quadratic_form(a, x).isclose(full.as_dual_number(), atol=1e-12)


# Gershgorin and definiteness ------------------------------------------------

def test_gershgorin_examples():
    rep = gershgorin(DQMatrix.from_real(np.diag([1.0, 2.0]), np.diag([0.0, 1.0])))
    assert rep.centers == [DualNumber(1, 0), DualNumber(2, 1)]
    assert rep.radii == [DualNumber(0, 0), DualNumber(0, 0)]
    assert rep.all_contained
    rep = gershgorin(example_2x2())
    assert [c.isclose(DualNumber(0, 0)) for c in rep.centers] == [True, True]
    assert [r.isclose(DualNumber(1, 0)) for r in rep.radii] == [True, True]
    assert rep.all_contained and all(rep.contained_std)


@given(seeds, st.integers(1, 6))
def test_gershgorin_containment(seed, n):
    rep = gershgorin(random_hermitian(make_rng(seed), n))
    assert rep.all_contained
    assert all(rep.contained_std)


def test_definiteness_examples():
    assert classify_definiteness(DQMatrix.identity(3)) is Definiteness.POSITIVE_DEFINITE
    lap = DQMatrix.from_real([[1, -1], [-1, 1]])
    assert classify_definiteness(lap) is Definiteness.POSITIVE_SEMIDEFINITE
    assert classify_definiteness(DQMatrix.from_real(np.diag([1.0, 0.0]), np.diag([0.0, -1.0]))) is Definiteness.INDEFINITE


@given(seeds)
def test_definiteness_agrees_with_quadratic_form(seed):
    rng = make_rng(seed)
    b = DQMatrix(rng.normal(size=(3, 2, 4)), rng.normal(size=(3, 2, 4)))
    psd = b @ b.H  # rank 2, so positive semidefinite and singular
    psd = DQMatrix(0.5 * (psd.std + qconj_arr(psd.std.transpose(1, 0, 2))),
                   0.5 * (psd.dual + qconj_arr(psd.dual.transpose(1, 0, 2))))
    assert classify_definiteness(psd) is not Definiteness.INDEFINITE
    for _ in range(20):
        x = DQMatrix(rng.normal(size=(3, 1, 4)), rng.normal(size=(3, 1, 4)))
        assert dn_leq(DualNumber(0, 0), quadratic_form(psd, x), 1e-9)
