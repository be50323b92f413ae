"""Hamilton quaternions.

Two layers live here:

* :class:`Quaternion`, an immutable scalar with operator overloads, used by the
  pose / kinematics API.
* ``q*_arr`` kernels acting on float arrays whose last axis holds ``(w, x, y, z)``.
  The matrix and simulation code work exclusively with these.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import BadAxis, NotImaginary, NotUnit, ZeroDivisor

UNIT_TOL = 1e-9
IMAG_TOL = 1e-12


# ---------------------------------------------------------------------------
# array kernels

def qmul_arr(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product of broadcastable ``(..., 4)`` arrays."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def qconj_arr(q: np.ndarray) -> np.ndarray:
    return np.asarray(q, dtype=float) * _CONJ


def qnorm_arr(q: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.asarray(q, dtype=float) ** 2, axis=-1))


def _structure_tensor() -> np.ndarray:
    basis = np.eye(4)
    t = np.zeros((4, 4, 4))
    for a in range(4):
        for b in range(4):
            t[a, b] = qmul_arr(basis[a], basis[b])
    return t


# MUL[a, b, c]: coefficient of basis c in e_a * e_b
MUL = _structure_tensor()


def qmatmul_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quaternion matrix product of ``(m, k, 4)`` and ``(k, n, 4)`` arrays."""
    return np.einsum("ika,kjb,abc->ijc", a, b, MUL, optimize=True)


def left_matrix(q: np.ndarray) -> np.ndarray:
    """Real 4x4 matrix ``M`` with ``M @ p == q * p`` (works on stacks)."""
    return np.einsum("...a,abc->...cb", np.asarray(q, dtype=float), MUL)


def right_matrix(q: np.ndarray) -> np.ndarray:
    """Real 4x4 matrix ``M`` with ``M @ p == p * q`` (works on stacks)."""
    return np.einsum("...b,abc->...ca", np.asarray(q, dtype=float), MUL)


def to_complex_pair(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split ``q = a + b·j`` with complex ``a = w + x·i`` and ``b = y + z·i``."""
    q = np.asarray(q, dtype=float)
    return q[..., 0] + 1j * q[..., 1], q[..., 2] + 1j * q[..., 3]


def from_complex_pair(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.stack([a.real, a.imag, b.real, b.imag], axis=-1)


def complex_adjoint(a: np.ndarray) -> np.ndarray:
    """``2m x 2n`` complex representation ``[[A1, A2], [-conj(A2), conj(A1)]]``.

    The map is a ring homomorphism: products of quaternion matrices go to
    products of their adjoints, and conjugate transposes to conjugate transposes.
    """
    a1, a2 = to_complex_pair(a)
    return np.block([[a1, a2], [-a2.conj(), a1.conj()]])


def from_complex_adjoint(c: np.ndarray) -> np.ndarray:
    """Read the quaternion matrix back from the top block row of an adjoint."""
    m = c.shape[0] // 2
    n = c.shape[1] // 2
    return from_complex_pair(c[:m, :n], c[:m, n:])


def vector_to_complex(x: np.ndarray) -> np.ndarray:
    """Quaternion vector ``(n, 4)`` to the complex ``2n`` vector ``[x1; -conj(x2)]``.

    This is the embedding under which ``A x = x λ`` (real ``λ``) becomes the
    ordinary eigen-equation of :func:`complex_adjoint`.
    """
    x1, x2 = to_complex_pair(x)
    return np.concatenate([x1, -x2.conj()], axis=0)


def complex_to_vector(v: np.ndarray) -> np.ndarray:
    n = v.shape[0] // 2
    return from_complex_pair(v[:n], -v[n:].conj())


def cross_arr(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Cross product of imaginary quaternions (real parts ignored)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    out = np.zeros(np.broadcast_shapes(p.shape, q.shape))
    out[..., 1:] = np.cross(p[..., 1:], q[..., 1:])
    return out


def exp_imag_arr(v: np.ndarray) -> np.ndarray:
    """``exp`` of imaginary quaternions ``(..., 4)`` (real part ignored)."""
    v = np.asarray(v, dtype=float)
    phi = np.linalg.norm(v[..., 1:], axis=-1)
    out = np.empty(v.shape)
    out[..., 0] = np.cos(phi)
    out[..., 1:] = v[..., 1:] * np.sinc(phi / np.pi)[..., None]
    return out


def log_unit_arr(q: np.ndarray) -> np.ndarray:
    """Principal log of unit quaternions, ``(θ/2)·axis`` with ``θ ∈ [0, 2π)``."""
    q = np.asarray(q, dtype=float)
    s = np.linalg.norm(q[..., 1:], axis=-1)
    half = np.arctan2(s, q[..., 0])
    scale = np.where(s < IMAG_TOL, 0.0, half / np.where(s < IMAG_TOL, 1.0, s))
    out = np.zeros(q.shape)
    out[..., 1:] = q[..., 1:] * scale[..., None]
    return out


# ---------------------------------------------------------------------------
# scalar type

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True, eq=False)
class Quaternion:
    """``w + x·i + y·j + z·k``.

    Equality is componentwise and ignores the subclass, so a
    :class:`UnitQuaternion` equals the plain quaternion with the same parts.
    """

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self) -> None:
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_array(cls, a) -> Quaternion:
        w, x, y, z = (float(v) for v in a)
        return cls(w, x, y, z)

    @classmethod
    def real(cls, w: float) -> Quaternion:
        return cls(w, 0.0, 0.0, 0.0)

    @classmethod
    def vector(cls, x: float, y: float, z: float) -> Quaternion:
        return cls(0.0, x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Quaternion):
            return NotImplemented
        return self.astuple() == other.astuple()

    def __hash__(self) -> int:
        return hash(self.astuple())

    @property
    def re(self) -> float:
        return self.w

    @property
    def im(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def __abs__(self) -> float:
        return self.norm()

    def is_imaginary(self, tol: float = IMAG_TOL) -> bool:
        return abs(self.w) <= tol

    def is_unit(self, tol: float = UNIT_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion.real(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion.real(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return Quaternion.real(other) - self

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return q_mul(self, other)

    def __rmul__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return self * other

    def __truediv__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return self * (1.0 / other)

    def inv(self) -> Quaternion:
        return q_inv(self)

    def isclose(self, other: Quaternion, atol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.to_array() - other.to_array()) <= atol))

    def __str__(self) -> str:
        return format_quaternion(self)


def q_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def q_inv(q: Quaternion) -> Quaternion:
    n2 = q.norm2()
    if n2 == 0.0:
        raise ZeroDivisor("zero quaternion has no inverse")
    return q.conj() * (1.0 / n2)


def q_cross(p: Quaternion, q: Quaternion) -> Quaternion:
    """Cross product of the vector parts, as an imaginary quaternion."""
    return Quaternion.vector(*np.cross(p.vec, q.vec))


class UnitQuaternion(Quaternion):
    """Quaternion of magnitude one.

    Construction renormalizes inputs within ``UNIT_TOL`` of the unit sphere and
    rejects anything farther away.
    """

    def __post_init__(self) -> None:
        super().__post_init__()
        n = self.norm()
        if abs(n - 1.0) > UNIT_TOL:
            raise NotUnit(f"|q| = {n!r} is not 1")
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, getattr(self, name) / n)

    @classmethod
    def of(cls, q: Quaternion) -> UnitQuaternion:
        if isinstance(q, UnitQuaternion):
            return q
        return cls(q.w, q.x, q.y, q.z)

    def inv(self) -> Quaternion:
        return self.conj()


def uq_exp(theta: float, axis: Quaternion) -> UnitQuaternion:
    """Rotation by ``theta`` radians about the imaginary unit ``axis``."""
    if not axis.is_imaginary(IMAG_TOL) or not axis.is_unit(UNIT_TOL):
        raise BadAxis(f"axis must be an imaginary unit quaternion, got {axis}")
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    v = axis.vec / np.linalg.norm(axis.vec)
    q = np.array([c, *(s * v)])
    q /= np.linalg.norm(q)
    return UnitQuaternion(*q)


def uq_log(q: Quaternion) -> Quaternion:
    """Principal logarithm ``(θ/2)·axis`` of a unit quaternion, ``θ ∈ [0, 2π)``."""
    q = UnitQuaternion.of(q)
    return Quaternion.from_array(log_unit_arr(q.to_array()))


def uq_angle_axis(q: Quaternion) -> tuple[float, Quaternion]:
    """``(θ, axis)`` of a unit quaternion; the identity gives ``(0, i)``."""
    q = UnitQuaternion.of(q)
    s = float(np.linalg.norm(q.vec))
    if s < IMAG_TOL:
        return 0.0, Quaternion.vector(1.0, 0.0, 0.0)
    return 2.0 * math.atan2(s, q.w), Quaternion.vector(*(q.vec / s))


def q_adjoint(q: Quaternion, v: Quaternion) -> Quaternion:
    """``Ad_q v = q v q*`` for imaginary ``v``: rotates ``v`` by ``q``."""
    if not v.is_imaginary(IMAG_TOL):
        raise NotImaginary(f"adjoint needs an imaginary quaternion, got {v}")
    q = UnitQuaternion.of(q)
    r = q * v * q.conj()
    return Quaternion(0.0, r.x, r.y, r.z)


def frame_change(q: Quaternion, r: Quaternion) -> Quaternion:
    """Coordinates of point ``r`` in the frame rotated by ``q``: ``q* r q``."""
    return q_adjoint(q.conj(), r)


def format_quaternion(q: Quaternion) -> str:
    """``"w+xi+yj+zk"`` with 17 significant digits."""
    out = _fmt(q.w)
    for value, unit in ((q.x, "i"), (q.y, "j"), (q.z, "k")):
        s = _fmt(value)
        out += ("" if s.startswith("-") else "+") + s + unit
    return out


_TERM = re.compile(r"([+-]?[^+-]*?(?:[eE][+-]?\d+)?)([ijk]?)(?=[+-]|$)")


def parse_quaternion(text: str) -> Quaternion:
    """Inverse of :func:`format_quaternion`; missing terms default to zero."""
    s = text.strip().replace(" ", "")
    parts = {"": 0.0, "i": 0.0, "j": 0.0, "k": 0.0}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"not a quaternion: {text!r}")
        coef, unit = m.groups()
        if coef in ("", "+", "-"):
            coef += "1"
        try:
            parts[unit] += float(coef)
        except ValueError:
            raise ValueError(f"not a quaternion: {text!r}") from None
        pos = m.end()
    return Quaternion(parts[""], parts["i"], parts["j"], parts["k"])
