"""Consensus dynamics ``dẑ/dt = −L̂ẑ`` over a dual quaternion Laplacian.

States are ``(n, 8)`` float arrays: row ``i`` is agent ``i``'s dual quaternion
laid out ``(w, x, y, z | dw, dx, dy, dz)``.  The linear system is integrated
through its real ``8n x 8n`` representation.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .dual import DualNumber
from .dualquat import DualQuaternion, Pose, kinematics_step_arr
from .errors import DimensionMismatch, NoTarget, NotImaginary, Unstable, ValidationError
from .graph import LaplacianBundle, PoseAssignment, VisibilityGraph
from .matrix import ZERO_TOL, DQMatrix, Definiteness, classify_eigenvalues, herm_eigen
from .quaternion import left_matrix

Integrator = Literal["euler", "rk4"]

GROWTH_LIMIT = 10.0
AMBIGUITY_BAND = 1e-6


def _laplacian_matrix(lap: LaplacianBundle | DQMatrix) -> DQMatrix:
    return lap.laplacian if isinstance(lap, LaplacianBundle) else lap


@dataclass
class Scenario:
    """A closed-loop consensus problem.

    ``laplacian`` is normally a validated :class:`LaplacianBundle`; a bare
    ``DQMatrix`` is accepted for experiments with hand-built matrices.
    """

    graph: VisibilityGraph
    laplacian: LaplacianBundle | DQMatrix
    z0: np.ndarray
    target: np.ndarray | None = None
    integrator: Integrator = "rk4"
    dt: float = 1e-3
    T: float = 20.0
    record_every: int = 1

    def __post_init__(self) -> None:
        n = self.graph.n
        self.z0 = as_state(self.z0)
        if self.target is not None:
            self.target = as_state(self.target)
        if self.L.shape != (n, n):
            raise DimensionMismatch(f"Laplacian shape {self.L.shape} for n={n}")
        if self.z0.shape[0] != n or (self.target is not None and self.target.shape[0] != n):
            raise DimensionMismatch("state length does not match the graph")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValidationError("dt must be positive")
        if not self.T >= self.dt:
            raise ValidationError("T must be at least dt")
        if self.integrator not in ("euler", "rk4"):
            raise ValidationError(f"unknown integrator {self.integrator!r}")
        if self.record_every < 1:
            raise ValidationError("record_every must be positive")

    @property
    def L(self) -> DQMatrix:
        return _laplacian_matrix(self.laplacian)

    @property
    def n(self) -> int:
        return self.graph.n


def as_state(z) -> np.ndarray:
    """Coerce a column ``DQMatrix``, a list of dual quaternions or an ``(n, 8)`` array."""
    if isinstance(z, DQMatrix):
        if z.shape[1] != 1:
            raise DimensionMismatch(f"expected a column vector, got {z.shape}")
        return z.to_array8()[:, 0, :]
    if isinstance(z, (list, tuple)) and z and isinstance(z[0], DualQuaternion):
        return np.array([q.to_array() for q in z])
    arr = np.array(z, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 8:
        raise DimensionMismatch(f"state must have shape (n, 8), got {arr.shape}")
    return arr


def state_column(z: np.ndarray) -> DQMatrix:
    return DQMatrix.from_array8(np.asarray(z, dtype=float)[:, None, :])


def real_embedding(a: DQMatrix) -> np.ndarray:
    """``M`` with ``M @ z.ravel() == (Â ẑ).ravel()`` for ``(n, 8)`` states."""
    m, n = a.shape
    ls = left_matrix(a.std)  # (m, n, 4, 4)
    ld = left_matrix(a.dual)
    blocks = np.zeros((m, n, 8, 8))
    blocks[:, :, :4, :4] = ls
    blocks[:, :, 4:, 4:] = ls
    blocks[:, :, 4:, :4] = ld
    return blocks.transpose(0, 2, 1, 3).reshape(8 * m, 8 * n)


def apply(a: DQMatrix, z: np.ndarray) -> np.ndarray:
    """``Âẑ`` on ``(n, 8)`` states."""
    z = as_state(z)
    return (real_embedding(a) @ z.ravel()).reshape(a.shape[0], 8)


def dual_vector_norm(z: np.ndarray) -> DualNumber:
    """``‖ẑ‖ = ‖z‖ + (⟨z, z_d⟩/‖z‖)ε``, or ``‖z_d‖ε`` when ``z = 0``."""
    z = np.asarray(z, dtype=float)
    s, d = z[..., :4].ravel(), z[..., 4:].ravel()
    ns = float(np.linalg.norm(s))
    if ns == 0.0:
        return DualNumber(0.0, float(np.linalg.norm(d)))
    return DualNumber(ns, float(np.dot(s, d)) / ns)


def energy(lap: LaplacianBundle | DQMatrix, z: np.ndarray) -> float:
    """Standard part of ``ẑ*L̂ẑ``, i.e. ``z*Lz``."""
    z = as_state(z)
    lz = apply(_laplacian_matrix(lap), z)
    return float(np.sum(z[:, :4] * lz[:, :4]))


# ---------------------------------------------------------------------------
# control inputs

@dataclass
class ControlInputs:
    """Per-agent inputs under the two readings of the consensus law.

    ``literal[i] = Σ_{j ∈ N(i)} l̂_ij (ẑ_j − ẑ_i)``; ``canonical = −L̂ẑ``.
    """

    literal: np.ndarray
    canonical: np.ndarray

    @property
    def difference(self) -> np.ndarray:
        return self.literal - self.canonical

    @property
    def max_difference(self) -> float:
        return float(np.max(np.abs(self.difference))) if self.difference.size else 0.0


def control_inputs(s: Scenario, z=None) -> ControlInputs:
    z = s.z0 if z is None else as_state(z)
    if z.shape[0] != s.n:
        raise DimensionMismatch(f"state has {z.shape[0]} agents, graph has {s.n}")
    lap = s.L
    literal = np.zeros_like(z)
    for i in range(s.n):
        for j in s.graph.neighbors(i):
            lij = DualQuaternion.from_array(np.concatenate([lap.std[i, j], lap.dual[i, j]]))
            diff = DualQuaternion.from_array(z[j] - z[i])
            literal[i] += (lij * diff).to_array()
    return ControlInputs(literal, -apply(lap, z))


# ---------------------------------------------------------------------------
# closed-loop simulation

@dataclass
class TrajectoryLog:
    """Recorded samples of a simulation; ``disagreement[k] = (std, dual)`` of ``‖L̂ẑ(t_k)‖``."""

    times: np.ndarray
    states: np.ndarray
    disagreement: np.ndarray
    energy: np.ndarray
    steps: int = 0
    wall_time: float = 0.0

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def final_disagreement(self) -> DualNumber:
        return DualNumber(*self.disagreement[-1])


def step_matrix(a: np.ndarray, h: float, integrator: Integrator) -> np.ndarray:
    """One-step propagator of the chosen scheme for the linear field ``ż = a z``.

    For a linear vector field, a classical RK4 step equals the degree-4 Taylor
    polynomial of ``exp(h a)`` and an Euler step the degree-1 one.
    """
    ha = h * a
    eye = np.eye(a.shape[0])
    if integrator == "euler":
        return eye + ha
    if integrator != "rk4":
        raise ValidationError(f"unknown integrator {integrator!r}")
    ha2 = ha @ ha
    return eye + ha + ha2 / 2.0 + ha2 @ ha / 6.0 + ha2 @ ha2 / 24.0


def _step_plan(dt: float, horizon: float) -> tuple[int, float]:
    """Number of full steps and the length of a final partial step (0 if none)."""
    full = int(math.floor(horizon / dt + 1e-9))
    rem = horizon - full * dt
    if rem <= 1e-12 * max(1.0, horizon):
        rem = 0.0
    return full, rem


def simulate(s: Scenario) -> TrajectoryLog:
    """Integrate ``dẑ/dt = −L̂ẑ`` from ``z0`` over ``[0, T]``.

    Samples are kept every ``record_every`` steps plus the first and last.

    Raises:
        Unstable: if the standard part of the state grows beyond ten times its
            initial norm or stops being finite.
    """
    started = time.perf_counter()
    m = real_embedding(s.L)
    a = -m
    full, rem = _step_plan(s.dt, s.T)
    phi = step_matrix(a, s.dt, s.integrator)
    phi_rem = step_matrix(a, rem, s.integrator) if rem else None
    total = full + (1 if rem else 0)

    x = s.z0.ravel().copy()
    n0 = float(np.linalg.norm(s.z0[:, :4]))
    limit = GROWTH_LIMIT * n0
    times, states, dis, en = [], [], [], []

    def record(t: float) -> None:
        z = x.reshape(s.n, 8)
        lz = (m @ x).reshape(s.n, 8)
        d = dual_vector_norm(lz)
        times.append(t)
        states.append(z.copy())
        dis.append((d.std, d.dual))
        en.append(float(np.sum(z[:, :4] * lz[:, :4])))

    record(0.0)
    for k in range(1, total + 1):
        if k <= full:
            x = phi @ x
            t = k * s.dt
        else:
            x = phi_rem @ x
            t = s.T
        ns = float(np.linalg.norm(x.reshape(s.n, 8)[:, :4]))
        if not np.all(np.isfinite(x)) or (n0 > 0.0 and ns > limit):
            raise Unstable(f"state norm {ns:.6g} exceeds {GROWTH_LIMIT:g}x its initial value at t={t:.6g}")
        if k % s.record_every == 0 or k == total:
            record(t)
    return TrajectoryLog(
        np.array(times),
        np.array(states),
        np.array(dis),
        np.array(en),
        steps=total,
        wall_time=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# targets and stability

def check_target(s: Scenario) -> DualNumber:
    """``‖L̂v̂‖`` for the scenario target; zero iff ``v̂`` is an equilibrium.

    Raises:
        NoTarget: if the scenario has no target.
    """
    if s.target is None:
        raise NoTarget("scenario has no target formation")
    return dual_vector_norm(apply(s.L, s.target))


def equilibrium_basis(lap: LaplacianBundle | DQMatrix, tol: float = ZERO_TOL) -> DQMatrix:
    """Orthonormal columns spanning ``{ẑ : L̂ẑ = 0}`` (eigenvalue ``0 + 0ε``)."""
    dec = herm_eigen(_laplacian_matrix(lap))
    idx = [k for k, v in enumerate(dec.eigenvalues) if abs(v.std) <= tol and abs(v.dual) <= tol]
    u = dec.eigenvectors
    return DQMatrix(u.std[:, idx], u.dual[:, idx])


class Stability(str, enum.Enum):
    STABLE = "stable"
    MARGINAL = "marginal"
    UNKNOWN = "unknown"


@dataclass
class StabilityCertificate:
    verdict: Stability
    zero_multiplicity: int
    definiteness: Definiteness
    lambda2: float | None
    reason: str
    eigenvalues: list[DualNumber] = field(default_factory=list)


def stability_certificate(lap: LaplacianBundle | DQMatrix, tol: float = ZERO_TOL) -> StabilityCertificate:
    """Classify the consensus system by the spectrum of ``L̂``.

    ``stable``: positive semidefinite with exactly one zero eigenvalue.
    ``marginal``: positive semidefinite with several zero eigenvalues; this
    includes the single-agent case, whose whole spectrum is one zero.
    ``unknown``: anything else, namely indefinite spectra, no zero eigenvalue,
    or an eigenvalue whose standard part lies in ``(tol, 1e-6]`` or is zero
    while its dual part is not (too close to zero to decide).
    """
    eigs = herm_eigen(_laplacian_matrix(lap)).eigenvalues
    definiteness = classify_eigenvalues(eigs, tol)
    zeros = [v for v in eigs if abs(v.std) <= tol and abs(v.dual) <= tol]
    mult = len(zeros)
    nonzero_std = sorted(v.std for v in eigs if v.std > tol)
    lambda2 = nonzero_std[0] if nonzero_std else None

    def cert(verdict: Stability, reason: str) -> StabilityCertificate:
        return StabilityCertificate(verdict, mult, definiteness, lambda2, reason, eigs)

    if definiteness is Definiteness.INDEFINITE:
        return cert(Stability.UNKNOWN, "indefinite spectrum")
    ambiguous = [
        v for v in eigs if tol < abs(v.std) <= AMBIGUITY_BAND or (abs(v.std) <= tol and abs(v.dual) > tol)
    ]
    if ambiguous:
        return cert(Stability.UNKNOWN, "eigenvalue within the tolerance band around zero")
    if mult == 0:
        return cert(Stability.UNKNOWN, "no zero eigenvalue")
    if mult == 1 and len(eigs) > 1:
        return cert(Stability.STABLE, "one zero eigenvalue, all others positive")
    return cert(Stability.MARGINAL, f"zero eigenvalue of multiplicity {mult}")


# ---------------------------------------------------------------------------
# pose-level kinematics

TwistLaw = Callable[[float, int, Pose], DualQuaternion]


@dataclass
class PoseTrajectory:
    times: np.ndarray
    poses: np.ndarray  # (k, n, 8)
    unit_drift: float
    steps: int = 0


def _checked_twist(xi) -> DualQuaternion:
    xi = DualQuaternion.coerce(xi)
    if not xi.is_imaginary():
        raise NotImaginary("twist must be imaginary")
    return xi


def unit_defect(poses: np.ndarray) -> float:
    """Largest ``max(| |q| − 1 |, |⟨q, q_d⟩|)`` over a stack of 8-arrays."""
    poses = np.asarray(poses, dtype=float).reshape(-1, 8)
    norm = np.abs(np.linalg.norm(poses[:, :4], axis=1) - 1.0)
    cross = np.abs(np.sum(poses[:, :4] * poses[:, 4:], axis=1))
    return float(max(norm.max(initial=0.0), cross.max(initial=0.0)))


def simulate_pose_mode(
    poses: PoseAssignment,
    twist_law: TwistLaw | Sequence[DualQuaternion] | None = None,
    dt: float = 1e-3,
    T: float = 1.0,
    integrator: Integrator = "rk4",
    record_every: int = 1,
) -> PoseTrajectory:
    """Integrate each agent's ``dq̂_i/dt = ½ q̂_i ξ̂_i`` independently.

    ``twist_law`` is a callable ``(t, i, pose) -> twist`` evaluated at the start
    of every step, a list of constant twists, or ``None`` for the twists stored
    in ``poses``.

    Raises:
        StepRejected: when ``dt`` is too large for the unit projection.
        NotImaginary: when a twist has a real part.
    """
    if twist_law is None:
        if poses.twists is None:
            raise ValidationError("no twists given")
        twist_law = poses.twists
    law: TwistLaw | None = twist_law if callable(twist_law) else None
    fixed = None
    if law is None:
        constant = list(twist_law)
        if len(constant) != poses.n:
            raise DimensionMismatch(f"{len(constant)} twists for {poses.n} agents")
        fixed = np.array([_checked_twist(x).to_array() for x in constant])
    if not (dt > 0 and T >= dt):
        raise ValidationError("need dt > 0 and T >= dt")
    full, rem = _step_plan(dt, T)
    total = full + (1 if rem else 0)
    if integrator not in ("euler", "rk4"):
        raise ValidationError(f"unknown integrator {integrator!r}")

    current = np.array([p.to_array() for p in poses.poses])
    times = [0.0]
    snaps = [current.copy()]
    t = 0.0
    for k in range(1, total + 1):
        h = dt if k <= full else rem
        if fixed is None:
            xis = np.array([_checked_twist(law(t, i, Pose.from_array(z))).to_array() for i, z in enumerate(current)])
        else:
            xis = fixed
        current = kinematics_step_arr(current, xis, h, integrator)
        t = k * dt if k <= full else T
        if k % record_every == 0 or k == total:
            times.append(t)
            snaps.append(current.copy())
    arr = np.array(snaps)
    return PoseTrajectory(np.array(times), arr, unit_defect(arr), total)
