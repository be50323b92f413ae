"""Dual quaternions, rigid-body poses and twists.

A pose is the unit dual quaternion ``q + (ε/2)·q·p`` built from a unit attitude
``q`` and a body-frame position ``p`` (imaginary).  Kinematics follow
``dq̂/dt = ½·q̂·ξ̂`` with the body twist ``ξ̂ = ω + ε(ṗ + ω × p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .dual import DualNumber
from .errors import NonAppreciable, NotImaginary, NotUnit, StepRejected
from .quaternion import (
    IMAG_TOL,
    UNIT_TOL,
    Quaternion,
    UnitQuaternion,
    exp_imag_arr,
    log_unit_arr,
    q_adjoint,
    q_cross,
    q_inv,
    right_matrix,
)

MAX_RENORM_CORRECTION = 1e-3


@dataclass(frozen=True, eq=False)
class DualQuaternion:
    """``std + dual·ε`` with quaternion parts."""

    std: Quaternion = Quaternion()
    dual: Quaternion = Quaternion()

    def __post_init__(self) -> None:
        # also the hook through which subclasses such as Pose validate
        for name in ("std", "dual"):
            if not isinstance(getattr(self, name), Quaternion):
                raise TypeError(f"{name} part must be a Quaternion")

    @classmethod
    def from_array(cls, a) -> DualQuaternion:
        a = np.asarray(a, dtype=float).reshape(8)
        return cls(Quaternion.from_array(a[:4]), Quaternion.from_array(a[4:]))

    @classmethod
    def from_dual_number(cls, a: DualNumber | float) -> DualQuaternion:
        a = DualNumber.coerce(a)
        return cls(Quaternion.real(a.std), Quaternion.real(a.dual))

    @classmethod
    def coerce(cls, value) -> DualQuaternion:
        if isinstance(value, DualQuaternion):
            return value
        if isinstance(value, Quaternion):
            return cls(value, Quaternion())
        if isinstance(value, (DualNumber, int, float)):
            return cls.from_dual_number(value)
        raise TypeError(f"cannot interpret {value!r} as a dual quaternion")

    def to_array(self) -> np.ndarray:
        """Eight reals ``(w, x, y, z | dw, dx, dy, dz)``."""
        return np.concatenate([self.std.to_array(), self.dual.to_array()])

    def __eq__(self, other) -> bool:
        if not isinstance(other, DualQuaternion):
            return NotImplemented
        return self.std == other.std and self.dual == other.dual

    def __hash__(self) -> int:
        return hash((self.std, self.dual))

    def conj(self) -> DualQuaternion:
        return DualQuaternion(self.std.conj(), self.dual.conj())

    @property
    def appreciable(self) -> bool:
        return self.std.norm2() != 0.0

    def is_imaginary(self, tol: float = IMAG_TOL) -> bool:
        return self.std.is_imaginary(tol) and self.dual.is_imaginary(tol)

    def is_dual_number(self, tol: float = IMAG_TOL) -> bool:
        return bool(np.all(np.abs(self.std.vec) <= tol) and np.all(np.abs(self.dual.vec) <= tol))

    def as_dual_number(self) -> DualNumber:
        return DualNumber(self.std.w, self.dual.w)

    def is_unit(self, tol: float = UNIT_TOL) -> bool:
        return is_unit_dq(self, tol)

    def __add__(self, other):
        try:
            o = DualQuaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return DualQuaternion(self.std + o.std, self.dual + o.dual)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = DualQuaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return DualQuaternion(self.std - o.std, self.dual - o.dual)

    def __rsub__(self, other):
        try:
            return DualQuaternion.coerce(other) - self
        except TypeError:
            return NotImplemented

    def __neg__(self) -> DualQuaternion:
        return DualQuaternion(-self.std, -self.dual)

    def __mul__(self, other):
        try:
            o = DualQuaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return dq_mul(self, o)

    def __rmul__(self, other):
        try:
            return dq_mul(DualQuaternion.coerce(other), self)
        except TypeError:
            return NotImplemented

    def __abs__(self) -> DualNumber:
        return dq_magnitude(self)

    def inv(self) -> DualQuaternion:
        return dq_inv(self)

    def isclose(self, other, atol: float = 1e-10) -> bool:
        o = DualQuaternion.coerce(other)
        return bool(np.all(np.abs(self.to_array() - o.to_array()) <= atol))

    def __str__(self) -> str:
        return f"({self.std}) + ({self.dual})ε"


ONE = DualQuaternion(Quaternion.real(1.0), Quaternion())
ZERO = DualQuaternion()


def dq_mul(p: DualQuaternion, q: DualQuaternion) -> DualQuaternion:
    return DualQuaternion(p.std * q.std, p.std * q.dual + p.dual * q.std)


def dq_magnitude(q: DualQuaternion) -> DualNumber:
    """Dual-number magnitude ``|q| + Re(q q_d*)/|q| ε`` (``|q_d| ε`` when ``q = 0``)."""
    n = q.std.norm()
    if n == 0.0:
        return DualNumber(0.0, q.dual.norm())
    # (q q_d* + q_d q*)/2 is the real part of q q_d*, i.e. the 4-vector dot product
    dot = float(np.dot(q.std.to_array(), q.dual.to_array()))
    return DualNumber(n, dot / n)


def dq_inv(q: DualQuaternion) -> DualQuaternion:
    if not q.appreciable:
        raise NonAppreciable(f"{q} has zero standard part")
    qi = q_inv(q.std)
    return DualQuaternion(qi, -(qi * q.dual * qi))


def is_unit_dq(q: DualQuaternion, tol: float = UNIT_TOL) -> bool:
    """Unit iff ``|q| = 1`` and ``q q_d* + q_d q* = 0``."""
    return q.std.is_unit(tol) and abs(float(np.dot(q.std.to_array(), q.dual.to_array()))) <= tol


class Pose(DualQuaternion):
    """Unit dual quaternion (rigid-body configuration).

    Construction projects inputs that are within ``UNIT_TOL`` of the unit
    manifold back onto it and rejects anything else.
    """

    def __post_init__(self) -> None:
        std, dual, corr = _project_unit(self.std.to_array(), self.dual.to_array())
        if corr > UNIT_TOL:
            raise NotUnit(f"not a unit dual quaternion (defect {corr:.3g})")
        object.__setattr__(self, "std", UnitQuaternion.from_array(std))
        object.__setattr__(self, "dual", Quaternion.from_array(dual))

    @classmethod
    def of(cls, q: DualQuaternion) -> Pose:
        if isinstance(q, Pose):
            return q
        return cls(q.std, q.dual)

    @classmethod
    def identity(cls) -> Pose:
        return cls(Quaternion.real(1.0), Quaternion())

    @property
    def rotation(self) -> UnitQuaternion:
        return self.std  # type: ignore[return-value]

    @property
    def translation(self) -> Quaternion:
        return pose_to_rotation_translation(self)[1]

    def inv(self) -> DualQuaternion:
        return self.conj()


def _project_unit(std: np.ndarray, dual: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Nearest unit dual quaternion (attitude normalized, dual part re-projected).

    Returns the projected parts and the size of the correction that was applied.
    """
    n = float(np.linalg.norm(std))
    if n == 0.0:
        return std, dual, math.inf
    s = std / n
    d = dual / n
    # remove the component of d along s: enforces Re(s* d) = 0
    along = float(np.dot(s, d))
    d = d - along * s
    corr = max(abs(n - 1.0), abs(along))
    return s, d, corr


def pose_from_rotation_translation(q: Quaternion, p: Quaternion) -> Pose:
    """``q + (ε/2)·q·p`` for attitude ``q`` and body-frame position ``p``."""
    if not p.is_imaginary(IMAG_TOL):
        raise NotImaginary(f"position must be imaginary, got {p}")
    q = UnitQuaternion.of(q)
    return Pose(q, 0.5 * (q * p.im))


def pose_to_rotation_translation(pose: DualQuaternion) -> tuple[UnitQuaternion, Quaternion]:
    """Inverse of :func:`pose_from_rotation_translation`: ``p = 2·q*·q_d``."""
    pose = Pose.of(pose)
    p = 2.0 * (pose.std.conj() * pose.dual)
    return pose.rotation, p.im


def make_twist(omega: Quaternion, p_dot: Quaternion, p: Quaternion) -> DualQuaternion:
    """Body twist ``ω + ε(ṗ + ω × p)`` from angular rate, linear rate and position."""
    for v, name in ((omega, "omega"), (p_dot, "p_dot"), (p, "p")):
        if not v.is_imaginary(IMAG_TOL):
            raise NotImaginary(f"{name} must be imaginary")
    return DualQuaternion(omega.im, (p_dot + q_cross(omega, p)).im)


# ---------------------------------------------------------------------------
# exponential / logarithm

def _dexp_parts(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Differential of ``exp`` at imaginary ``a`` applied to imaginary ``b`` (3-vectors)."""
    phi = float(np.linalg.norm(a))
    if phi < IMAG_TOL:
        return np.concatenate([[-float(np.dot(a, b))], b])
    u = a / phi
    along = float(np.dot(u, b))
    perp = b - along * u
    c, s = math.cos(phi), math.sin(phi)
    return np.concatenate([[-s * along], c * along * u + (s / phi) * perp])


def dq_exp(v: DualQuaternion) -> Pose:
    """Exponential of an imaginary dual quaternion; always a unit dual quaternion."""
    if not v.is_imaginary(IMAG_TOL):
        raise NotImaginary(f"exp is defined here for imaginary dual quaternions, got {v}")
    a = v.std.vec
    std = exp_imag_arr(np.concatenate([[0.0], a]))
    dual = _dexp_parts(a, v.dual.vec)
    return Pose(Quaternion.from_array(std), Quaternion.from_array(dual))


def pose_log(pose: DualQuaternion) -> DualQuaternion:
    """Principal logarithm of a pose, exact inverse of :func:`dq_exp`.

    The standard part is ``(θ/2)·axis`` with ``θ ∈ [0, 2π)``.  The dual part
    equals ``p/2`` whenever the translation is parallel to the rotation axis
    (in particular for pure translations and pure rotations); in general it
    carries the screw correction, which is what makes ``log(q̂*) = -log(q̂)``.
    Poses with ``θ`` close to ``2π`` are ill-conditioned.
    """
    pose = Pose.of(pose)
    a = log_unit_arr(pose.std.to_array())[1:]
    r = (pose.std.conj() * pose.dual).vec  # = p/2
    phi = float(np.linalg.norm(a))
    if phi < IMAG_TOL:
        b = r
    else:
        u = a / phi
        along = float(np.dot(u, r)) * u
        perp = r - along
        k = 1.0 / float(np.sinc(phi / np.pi))  # phi / sin(phi)
        b = along + k * (math.cos(phi) * perp + math.sin(phi) * np.cross(u, perp))
    return DualQuaternion(Quaternion.vector(*a), Quaternion.vector(*b))


def pose_exp(log: DualQuaternion) -> Pose:
    """Inverse of :func:`pose_log`."""
    return dq_exp(log)


def pose_log_body(pose: DualQuaternion) -> DualQuaternion:
    """``½(θ·axis + ε·p)`` with ``p`` the body-frame position.

    Cheaper than :func:`pose_log` and identical to it when the translation is
    parallel to the rotation axis, but not antisymmetric under inversion for
    general poses.
    """
    q, p = pose_to_rotation_translation(pose)
    a = log_unit_arr(q.to_array())
    return DualQuaternion(Quaternion.from_array(a), 0.5 * p)


def pose_exp_body(log: DualQuaternion) -> Pose:
    """Inverse of :func:`pose_log_body`."""
    if not log.is_imaginary(IMAG_TOL):
        raise NotImaginary("log must be imaginary")
    q = Quaternion.from_array(exp_imag_arr(log.std.to_array()))
    return pose_from_rotation_translation(q, 2.0 * log.dual)


# ---------------------------------------------------------------------------
# kinematics and frames

def _rate_matrix(xi: np.ndarray) -> np.ndarray:
    """``(..., 8, 8)`` matrix of ``q̂ ↦ ½·q̂·ξ̂``."""
    r_std, r_dual = right_matrix(xi[..., :4]), right_matrix(xi[..., 4:])
    m = np.zeros(xi.shape[:-1] + (8, 8))
    m[..., :4, :4] = r_std
    m[..., 4:, 4:] = r_std
    m[..., 4:, :4] = r_dual
    return 0.5 * m


def kinematics_step_arr(q: np.ndarray, xi: np.ndarray, dt: float, scheme: Literal["euler", "rk4"] = "rk4") -> np.ndarray:
    """:func:`kinematics_step` on ``(..., 8)`` stacks, without input validation."""
    m = _rate_matrix(np.asarray(xi, dtype=float))
    q = np.asarray(q, dtype=float)
    rate = lambda z: (m @ z[..., None])[..., 0]  # noqa: E731
    if scheme == "euler":
        nxt = q + dt * rate(q)
    elif scheme == "rk4":
        k1 = rate(q)
        k2 = rate(q + 0.5 * dt * k1)
        k3 = rate(q + 0.5 * dt * k2)
        k4 = rate(q + dt * k3)
        nxt = q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    # batched form of _project_unit
    std, dual = nxt[..., :4], nxt[..., 4:]
    n = np.linalg.norm(std, axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        s, d = std / n, dual / n
        along = np.sum(s * d, axis=-1, keepdims=True)
    corr = np.max(np.maximum(np.abs(n - 1.0), np.abs(along)), initial=0.0)
    if not corr <= MAX_RENORM_CORRECTION:
        raise StepRejected(f"renormalization correction {corr:.3g} exceeds {MAX_RENORM_CORRECTION}")
    return np.concatenate([s, d - along * s], axis=-1)


def kinematics_step(
    pose: DualQuaternion,
    twist: DualQuaternion,
    dt: float,
    scheme: Literal["euler", "rk4"] = "rk4",
) -> Pose:
    """Advance ``dq̂/dt = ½·q̂·ξ̂`` by one step with a twist held constant.

    The raw step is projected back onto the unit manifold.

    Raises:
        StepRejected: when that projection has to move the state by more
            than ``1e-3``, i.e. the step was too large.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not twist.is_imaginary(IMAG_TOL):
        raise NotImaginary("twist must be imaginary")
    out = kinematics_step_arr(pose.to_array(), twist.to_array(), dt, scheme)
    return Pose(Quaternion.from_array(out[:4]), Quaternion.from_array(out[4:]))


def pose_adjoint(pose: DualQuaternion, v: DualQuaternion) -> DualQuaternion:
    """``q̂·v̂·q̂*`` for imaginary ``v̂``."""
    if not v.is_imaginary(IMAG_TOL):
        raise NotImaginary(f"adjoint needs an imaginary dual quaternion, got {v}")
    pose = Pose.of(pose)
    r = pose * v * pose.conj()
    return DualQuaternion(r.std.im, r.dual.im)


def left_invariant_error(target: DualQuaternion, pose: DualQuaternion) -> Pose:
    """``q̂_t*·q̂``: the pose expressed relative to the target frame."""
    return Pose.of(Pose.of(target).conj() * Pose.of(pose))


def left_invariant_error_split(target: DualQuaternion, pose: DualQuaternion) -> tuple[Quaternion, Quaternion]:
    """Attitude and position of the error computed factor-wise.

    ``q_e = q_t*·q`` and ``p_e = p − Ad_{q_e*} p_t``.
    """
    qt, pt = pose_to_rotation_translation(target)
    q, p = pose_to_rotation_translation(pose)
    qe = qt.conj() * q
    return qe, p - q_adjoint(qe.conj(), pt)


def relative_configuration(qi: DualQuaternion, qj: DualQuaternion) -> Pose:
    """``q̂_ij = q̂_i⁻¹ q̂_j`` so that ``q̂_j = q̂_i q̂_ij``."""
    return Pose.of(Pose.of(qi).conj() * Pose.of(qj))
