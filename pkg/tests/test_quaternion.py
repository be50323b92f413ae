from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dqform.errors import BadAxis, NotImaginary, NotUnit, ZeroDivisor
from dqform.quaternion import (
    Quaternion,
    UnitQuaternion,
    complex_adjoint,
    format_quaternion,
    frame_change,
    parse_quaternion,
    q_adjoint,
    q_cross,
    q_inv,
    q_mul,
    right_matrix,
    left_matrix,
    uq_angle_axis,
    uq_exp,
    uq_log,
)

from oracles import hamilton, rotation_matrix

I, J, K = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)
ONE = Quaternion(1, 0, 0, 0)

coord = st.floats(-10, 10, allow_nan=False)
quats = st.builds(Quaternion, coord, coord, coord, coord)
vectors = st.builds(lambda x, y, z: Quaternion(0, x, y, z), coord, coord, coord)
unit_axes = st.tuples(coord, coord, coord).filter(lambda v: np.linalg.norm(v) > 1e-3).map(
    lambda v: Quaternion(0, *(np.array(v) / np.linalg.norm(v)))
)
units = st.tuples(coord, coord, coord, coord).filter(lambda v: np.linalg.norm(v) > 1e-3).map(
    lambda v: UnitQuaternion(*(np.array(v) / np.linalg.norm(v)))
)


def test_product_table():
    assert q_mul(I, J) == K and q_mul(J, I) == -K
    assert q_mul(J, K) == I and q_mul(K, J) == -I
    assert q_mul(K, I) == J and q_mul(I, K) == -J
    for u in (I, J, K):
        assert q_mul(u, u) == -ONE
    q = Quaternion(1.5, -2, 0.25, 3)
    assert q_mul(q, ONE) == q


@given(quats, quats)
def test_product_matches_component_oracle(p, q):
    np.testing.assert_allclose((p * q).to_array(), hamilton(p.to_array(), q.to_array()), atol=1e-10)


@given(quats, quats)
def test_conjugate_of_product(p, q):
    assert (p * q).conj().isclose(q.conj() * p.conj(), atol=1e-10)


@given(quats, quats)
def test_norm_is_multiplicative(p, q):
    assert math.isclose((p * q).norm(), p.norm() * q.norm(), rel_tol=1e-12, abs_tol=1e-12)


@given(quats)
def test_conj_involution_and_norm(q):
    assert q.conj().conj() == q
    prod = q * q.conj()
    assert prod.vec.tolist() == pytest.approx([0, 0, 0], abs=1e-10)
    assert math.isclose(prod.w, q.w**2 + q.x**2 + q.y**2 + q.z**2, rel_tol=1e-12)


@given(vectors)
def test_imaginary_conjugate_is_negation(v):
    assert v.is_imaginary()
    assert v.conj() == -v


def test_inverse_examples():
    assert q_inv(I) == -I
    assert q_inv(Quaternion(1, 1, 0, 0)).isclose(Quaternion(0.5, -0.5, 0, 0))
    with pytest.raises(ZeroDivisor):
        q_inv(Quaternion())


@given(quats.filter(lambda q: q.norm() > 1e-3))
def test_inverse_property(q):
    assert (q * q_inv(q)).isclose(ONE, atol=1e-12)
    assert (q_inv(q) * q).isclose(ONE, atol=1e-12)


def test_exp_examples():
    assert uq_exp(math.pi, I).isclose(I, atol=1e-15)
    assert uq_exp(0.0, J).isclose(ONE)
    r = math.sqrt(2) / 2
    assert uq_exp(math.pi / 2, K).isclose(Quaternion(r, 0, 0, r), atol=1e-15)
    with pytest.raises(BadAxis):
        uq_exp(1.0, Quaternion(0, 2, 0, 0))
    with pytest.raises(BadAxis):
        uq_exp(1.0, Quaternion(0.5, 0, 0, math.sqrt(0.75)))


def test_log_examples():
    assert uq_log(I).isclose(Quaternion(0, math.pi / 2, 0, 0))
    assert uq_log(ONE) == Quaternion()
    r = math.sqrt(2) / 2
    assert uq_log(Quaternion(r, 0, 0, r)).isclose(Quaternion(0, 0, 0, math.pi / 4))


@given(st.floats(1e-3, 2 * math.pi - 1e-3), unit_axes)
def test_log_exp_round_trip(theta, axis):
    q = uq_exp(theta, axis)
    assert uq_log(q).isclose(axis * (theta / 2), atol=1e-9)
    t, a = uq_angle_axis(q)
    assert math.isclose(t, theta, abs_tol=1e-9)
    assert a.isclose(axis, atol=1e-9)


@given(units.filter(lambda q: q.w > -0.9999))
def test_exp_log_round_trip(q):
    v = uq_log(q)
    theta = 2 * v.norm()
    if theta < 1e-9:
        assert q.isclose(ONE, atol=1e-9)
        return
    assert uq_exp(theta, v * (1 / v.norm())).isclose(q, atol=1e-9)


def test_log_at_the_two_pi_boundary_is_zero():
    # -1 is the rotation by 2π; the branch rule maps a vanishing vector part to 0
    assert uq_log(-ONE) == Quaternion()


def test_log_of_product_is_not_sum_of_logs():
    lhs = uq_log(q_mul(I, J))
    rhs = uq_log(I) + uq_log(J)
    assert not lhs.isclose(rhs, atol=1e-3)


@given(vectors, vectors)
def test_cross_product_from_commutator(p, q):
    comm = (p * q - q * p) * 0.5
    np.testing.assert_allclose(comm.vec, np.cross(p.vec, q.vec), atol=1e-9)
    np.testing.assert_allclose(q_cross(p, q).vec, np.cross(p.vec, q.vec), atol=1e-9)


def test_adjoint_examples():
    assert q_adjoint(K, I).isclose(-I)
    v = Quaternion(0, 1, 2, 3)
    assert q_adjoint(ONE, v) == v
    with pytest.raises(NotImaginary):
        q_adjoint(K, Quaternion(1, 0, 0, 0))


@given(units, vectors)
def test_adjoint_is_rotation(q, v):
    out = q_adjoint(q, v)
    assert out.is_imaginary()
    assert math.isclose(out.norm(), v.norm(), rel_tol=1e-12, abs_tol=1e-12)
    np.testing.assert_allclose(out.vec, rotation_matrix(q.to_array()) @ v.vec, atol=1e-10)
    back = frame_change(q, out)
    assert back.isclose(v, atol=1e-10)


def test_unit_construction():
    u = UnitQuaternion(1 + 5e-10, 0, 0, 0)
    assert u.norm() == 1.0
    with pytest.raises(NotUnit):
        UnitQuaternion(1.1, 0, 0, 0)
    assert UnitQuaternion(0, 1, 0, 0).inv() == -I


@given(quats)
def test_text_round_trip(q):
    assert parse_quaternion(format_quaternion(q)) == q


def test_text_forms():
    assert format_quaternion(Quaternion(1, -2, 0.5, 0)) == "1-2i+0.5j+0k"
    assert parse_quaternion("i-k") == Quaternion(0, 1, 0, -1)
    assert parse_quaternion("2.5e-3+1e+2j") == Quaternion(0.0025, 0, 100, 0)
    with pytest.raises(ValueError):
        parse_quaternion("1+xq")


@given(quats, quats)
def test_complex_adjoint_is_multiplicative(p, q):
    a = lambda x: complex_adjoint(x.to_array()[None, None, :])  # noqa: E731
    np.testing.assert_allclose(a(p * q), a(p) @ a(q), atol=1e-9)


@given(quats, quats)
def test_multiplication_matrices(p, q):
    np.testing.assert_allclose(left_matrix(p.to_array()) @ q.to_array(), (p * q).to_array(), atol=1e-9)
    np.testing.assert_allclose(right_matrix(q.to_array()) @ p.to_array(), (p * q).to_array(), atol=1e-9)
