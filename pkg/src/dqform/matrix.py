"""Dense dual quaternion matrices and Hermitian spectral theory.

A matrix ``Â = A + A_d ε`` is stored as two float arrays of shape ``(m, n, 4)``.
Hermitian matrices have exactly ``n`` dual-number eigenvalues.  They are computed
in three stages:

1. eigen-decompose the standard part ``A`` through its complex adjoint (cyclic
   Jacobi), keeping one eigenvalue out of each degenerate pair;
2. on each cluster of equal standard eigenvalues with orthonormal basis ``U_i``,
   the dual parts are the eigenvalues of ``U_i* A_d U_i``;
3. eigenvector dual parts solve ``(A - λ)x_d = xλ_d - A_d x`` off the cluster.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .dual import DualNumber, dn_leq
from .dualquat import DualQuaternion
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonAppreciable,
    NotHermitian,
    Singular,
)
from .jacobi import jacobi_eigh
from .quaternion import (
    complex_adjoint,
    complex_to_vector,
    from_complex_adjoint,
    qconj_arr,
    qmatmul_arr,
    qnorm_arr,
)

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-9
PAIR_TOL = 1e-9
CLUSTER_TOL = 1e-8
ZERO_TOL = 1e-8
PIVOT_TOL = 1e-12


def _as_qarray(a, shape_hint: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 4:
        raise DimensionMismatch(f"{shape_hint} must have shape (m, n, 4), got {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class DQMatrix:
    """Dense ``m x n`` dual quaternion matrix."""

    std: np.ndarray
    dual: np.ndarray

    def __post_init__(self) -> None:
        std = _as_qarray(self.std, "std")
        dual = _as_qarray(self.dual, "dual")
        if std.shape != dual.shape:
            raise DimensionMismatch(f"part shapes differ: {std.shape} vs {dual.shape}")
        object.__setattr__(self, "std", std)
        object.__setattr__(self, "dual", dual)

    # constructors -----------------------------------------------------------

    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> DQMatrix:
        n = m if n is None else n
        return cls(np.zeros((m, n, 4)), np.zeros((m, n, 4)))

    @classmethod
    def identity(cls, n: int) -> DQMatrix:
        std = np.zeros((n, n, 4))
        std[np.arange(n), np.arange(n), 0] = 1.0
        return cls(std, np.zeros((n, n, 4)))

    @classmethod
    def from_real(cls, a, a_dual=None) -> DQMatrix:
        """Embed real matrices as the scalar parts of ``A`` and ``A_d``."""
        a = np.atleast_2d(np.asarray(a, dtype=float))
        std = np.zeros(a.shape + (4,))
        std[..., 0] = a
        dual = np.zeros_like(std)
        if a_dual is not None:
            dual[..., 0] = np.asarray(a_dual, dtype=float)
        return cls(std, dual)

    @classmethod
    def from_array8(cls, a) -> DQMatrix:
        """From an ``(m, n, 8)`` array laid out ``(w, x, y, z | dw, dx, dy, dz)``."""
        a = np.asarray(a, dtype=float)
        if a.ndim != 3 or a.shape[-1] != 8:
            raise DimensionMismatch(f"expected (m, n, 8), got {a.shape}")
        return cls(a[..., :4].copy(), a[..., 4:].copy())

    @classmethod
    def from_entries(cls, rows) -> DQMatrix:
        """From nested lists of :class:`DualQuaternion` (or anything coercible)."""
        arr = np.array(
            [[DualQuaternion.coerce(e).to_array() for e in row] for row in rows],
            dtype=float,
        )
        if arr.ndim != 3:
            raise DimensionMismatch("ragged rows")
        return cls.from_array8(arr)

    @classmethod
    def column(cls, entries) -> DQMatrix:
        """Column vector from a sequence of dual quaternions."""
        return cls.from_entries([[e] for e in entries])

    @classmethod
    def diag(cls, entries) -> DQMatrix:
        entries = [DualQuaternion.coerce(e) for e in entries]
        n = len(entries)
        out = np.zeros((n, n, 8))
        for i, e in enumerate(entries):
            out[i, i] = e.to_array()
        return cls.from_array8(out)

    # basic structure --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.std.shape[0], self.std.shape[1]

    def to_array8(self) -> np.ndarray:
        return np.concatenate([self.std, self.dual], axis=-1)

    def __getitem__(self, idx: tuple[int, int]) -> DualQuaternion:
        i, j = idx
        return DualQuaternion.from_array(np.concatenate([self.std[i, j], self.dual[i, j]]))

    def entries(self) -> list[list[DualQuaternion]]:
        m, n = self.shape
        return [[self[i, j] for j in range(n)] for i in range(m)]

    @property
    def H(self) -> DQMatrix:
        """Conjugate transpose."""
        return DQMatrix(
            qconj_arr(self.std.transpose(1, 0, 2)),
            qconj_arr(self.dual.transpose(1, 0, 2)),
        )

    def __add__(self, other: DQMatrix) -> DQMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return DQMatrix(self.std + other.std, self.dual + other.dual)

    def __sub__(self, other: DQMatrix) -> DQMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return DQMatrix(self.std - other.std, self.dual - other.dual)

    def __neg__(self) -> DQMatrix:
        return DQMatrix(-self.std, -self.dual)

    def __matmul__(self, other: DQMatrix) -> DQMatrix:
        return mat_mul(self, other)

    def scale_columns(self, values: list[DualNumber]) -> DQMatrix:
        """Right-multiply by ``diag(values)`` (dual numbers commute with everything)."""
        s = np.array([v.std for v in values])[None, :, None]
        d = np.array([v.dual for v in values])[None, :, None]
        return DQMatrix(self.std * s, self.dual * s + self.std * d)

    def fro_norm(self) -> float:
        """``sqrt(sum |a_ij|² + sum |a_d,ij|²)``, both parts summed separately."""
        return float(np.sqrt(np.sum(self.std ** 2) + np.sum(self.dual ** 2)))

    def is_square(self) -> bool:
        m, n = self.shape
        return m == n

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        if not self.is_square():
            return False
        h = self.H
        return bool(
            np.all(np.abs(self.std - h.std) <= tol) and np.all(np.abs(self.dual - h.dual) <= tol)
        )

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        if not self.is_square():
            return False
        g = self.H @ self
        eye = DQMatrix.identity(self.shape[0])
        return bool(
            np.all(np.abs(g.std - eye.std) <= tol) and np.all(np.abs(g.dual) <= tol)
        )

    def isclose(self, other: DQMatrix, atol: float = 1e-10) -> bool:
        return self.shape == other.shape and bool(
            np.all(np.abs(self.std - other.std) <= atol)
            and np.all(np.abs(self.dual - other.dual) <= atol)
        )

    def __repr__(self) -> str:
        return f"DQMatrix(shape={self.shape})"


def mat_mul(a: DQMatrix, b: DQMatrix) -> DQMatrix:
    """``(A + A_d ε)(B + B_d ε) = AB + (A B_d + A_d B) ε``."""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return DQMatrix(
        qmatmul_arr(a.std, b.std),
        qmatmul_arr(a.std, b.dual) + qmatmul_arr(a.dual, b.std),
    )


def inner(x: DQMatrix, y: DQMatrix) -> DualQuaternion:
    """``x̂* ŷ`` for column vectors."""
    return (x.H @ y)[0, 0]


def as_column(x) -> DQMatrix:
    """Coerce a column ``DQMatrix``, a sequence of scalars or an ``(n, 8)`` array."""
    if isinstance(x, DQMatrix):
        if x.shape[1] != 1:
            raise DimensionMismatch(f"expected a column vector, got {x.shape}")
        return x
    if isinstance(x, (list, tuple)):
        return DQMatrix.column(x)
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 8:
        return DQMatrix.from_array8(arr[:, None, :])
    raise DimensionMismatch(f"cannot read a dual quaternion vector from shape {arr.shape}")


def mat_inv(a: DQMatrix) -> DQMatrix:
    """``A⁻¹ - A⁻¹ A_d A⁻¹ ε``, the standard part solved through its complex adjoint.

    Raises:
        Singular: if an LU pivot of the standard part falls below ``1e-12``
            (relative to the largest entry when that exceeds one).
    """
    if not a.is_square():
        raise DimensionMismatch(f"inverse of non-square {a.shape}")
    n = a.shape[0]
    if n == 0:
        return a
    c = complex_adjoint(a.std)
    scale = max(1.0, float(np.max(np.abs(c))))
    with warnings.catch_warnings():
        # an exactly singular factor is reported below as Singular
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(c, check_finite=True)
    if float(np.min(np.abs(np.diag(lu)))) < PIVOT_TOL * scale:
        raise Singular("standard part is singular")
    cinv = scipy.linalg.lu_solve((lu, piv), np.eye(2 * n, dtype=complex))
    inv = from_complex_adjoint(cinv)
    dual = -qmatmul_arr(qmatmul_arr(inv, a.dual), inv)
    return DQMatrix(inv, dual)


# ---------------------------------------------------------------------------
# Hermitian eigen-decomposition

def _hermitian_check(a: DQMatrix) -> None:
    if not a.is_hermitian(HERMITIAN_TOL):
        raise NotHermitian("matrix is not Hermitian")


def _qmat_herm(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + qconj_arr(a.transpose(1, 0, 2)))


def _pair_and_cluster(w: np.ndarray, norm: float) -> tuple[np.ndarray, list[list[int]]]:
    """Pair the doubled adjoint spectrum; group pair indices into clusters."""
    m = len(w)
    tol = PAIR_TOL * norm
    values = []
    for k in range(0, m, 2):
        if abs(w[k] - w[k + 1]) > tol:
            raise ConvergenceFailure(
                f"adjoint eigenvalues {w[k]!r}, {w[k + 1]!r} do not pair (tol {tol:.3g})"
            )
        values.append(0.5 * (w[k] + w[k + 1]))
    values = np.array(values)
    clusters: list[list[int]] = []
    for i, v in enumerate(values):
        if clusters and values[clusters[-1][-1]] - v <= CLUSTER_TOL:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return values, clusters


def _j_partner(v: np.ndarray) -> np.ndarray:
    """Complex image of ``x·j`` given the image ``v`` of ``x``."""
    n = v.shape[0] // 2
    return np.concatenate([v[n:].conj(), -v[:n].conj()], axis=0)


def _quaternion_basis(block: np.ndarray, k: int) -> np.ndarray:
    """Pick ``k`` quaternion-orthonormal vectors spanning a ``2k``-dim complex block."""
    chosen: list[np.ndarray] = []
    out = []
    for _ in range(k):
        if chosen:
            q = np.stack(chosen, axis=1)
            resid = block - q @ (q.conj().T @ block)
        else:
            resid = block
        norms = np.linalg.norm(resid, axis=0)
        best = int(np.argmax(norms))
        u = resid[:, best] / norms[best]
        if chosen:
            q = np.stack(chosen, axis=1)
            u = u - q @ (q.conj().T @ u)
            u /= np.linalg.norm(u)
        chosen.extend([u, _j_partner(u)])
        out.append(complex_to_vector(u))
    return np.stack(out, axis=1)  # (n, k, 4)


def quaternion_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[list[int]]]:
    """Eigen-decomposition of a quaternion Hermitian matrix ``(n, n, 4)``.

    Returns ``(values, vectors, clusters)``: ``values`` descending, ``vectors``
    an ``(n, n, 4)`` unitary quaternion matrix with ``A U = U diag(values)``,
    and ``clusters`` grouping indices whose values agree within ``CLUSTER_TOL``.
    """
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0, 4)), []
    c = complex_adjoint(a)
    norm = float(np.linalg.norm(c)) / np.sqrt(2.0)
    w, v, _ = jacobi_eigh(c)
    values, clusters = _pair_and_cluster(w, norm)
    vectors = np.zeros((n, n, 4))
    for cl in clusters:
        cols = [c_ for i in cl for c_ in (2 * i, 2 * i + 1)]
        vectors[:, cl, :] = _quaternion_basis(v[:, cols], len(cl))
        values[cl] = np.mean(values[cl])
    return values, vectors, clusters


@dataclass
class HermitianEigenDecomposition:
    """``Â = Û Σ̂ Û*`` with dual-number ``Σ̂`` sorted descending."""

    eigenvalues: list[DualNumber]
    eigenvectors: DQMatrix
    clusters: list[list[int]]
    residual: float = 0.0
    norm: float = 0.0

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def sigma(self) -> DQMatrix:
        return DQMatrix.diag([DualQuaternion.from_dual_number(v) for v in self.eigenvalues])

    def reconstruct(self) -> DQMatrix:
        u = self.eigenvectors
        return u.scale_columns(self.eigenvalues) @ u.H

    def eigenvector(self, j: int) -> DQMatrix:
        u = self.eigenvectors
        return DQMatrix(u.std[:, j : j + 1], u.dual[:, j : j + 1])


def herm_eigen(a: DQMatrix) -> HermitianEigenDecomposition:
    """All ``n`` dual-number eigenvalues and a unitary eigenvector matrix.

    Raises:
        NotHermitian: if ``Â* != Â`` beyond ``1e-10`` in any entry.
        ConvergenceFailure: if the Jacobi solver hits its sweep cap.
    """
    _hermitian_check(a)
    n = a.shape[0]
    std_vals, u, clusters = quaternion_eigh(_qmat_herm(a.std))
    ad = _qmat_herm(a.dual)
    dual_vals = np.zeros(n)
    for cl in clusters:
        ui = u[:, cl, :]
        w = _qmat_herm(qmatmul_arr(qconj_arr(ui.transpose(1, 0, 2)), qmatmul_arr(ad, ui)))
        if len(cl) == 1:
            dual_vals[cl[0]] = w[0, 0, 0]
            continue
        mu, vw, _ = quaternion_eigh(w)
        dual_vals[cl] = mu
        u[:, cl, :] = qmatmul_arr(ui, vw)

    # eigenvector dual parts, zero component inside each cluster
    uh = qconj_arr(u.transpose(1, 0, 2))
    lam_x = u * dual_vals[None, :, None]  # column j times its dual eigenvalue
    rhs = lam_x - qmatmul_arr(ad, u)  # columns x μ - A_d x
    coeff = qmatmul_arr(uh, rhs)  # (n, n, 4): row a = component along u_a
    label = np.empty(n, dtype=int)
    for c_idx, cl in enumerate(clusters):
        label[cl] = c_idx
    gap = std_vals[:, None] - std_vals[None, :]
    same = label[:, None] == label[None, :]
    inv_gap = np.where(same, 0.0, 1.0 / np.where(same, 1.0, gap))
    ud = qmatmul_arr(u, coeff * inv_gap[:, :, None])

    eigenvalues = [DualNumber(s, d) for s, d in zip(std_vals, dual_vals)]
    vecs = DQMatrix(u, ud)
    dec = HermitianEigenDecomposition(eigenvalues, vecs, clusters, norm=a.fro_norm())
    dec.residual = (a @ vecs - vecs.scale_columns(eigenvalues)).fro_norm()
    return dec


def rayleigh(a: DQMatrix, x) -> DualNumber:
    """``x̂*Âx̂ / x̂*x̂`` for Hermitian ``Â`` and appreciable ``x̂``."""
    _hermitian_check(a)
    x = as_column(x)
    if x.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"vector length {x.shape[0]} vs matrix {a.shape}")
    num = inner(x, a @ x).as_dual_number()
    den = inner(x, x).as_dual_number()
    if den.std == 0.0:
        raise NonAppreciable("x̂*x̂ is infinitesimal")
    return num / den


# ---------------------------------------------------------------------------
# Gershgorin discs and definiteness

def _abs_tolerant(a: DualNumber, tol: float) -> DualNumber:
    """Dual magnitude treating standard parts within ``tol`` of zero as zero."""
    if abs(a.std) <= tol:
        return DualNumber(abs(a.std), abs(a.dual))
    return abs(a)


@dataclass
class GershgorinReport:
    """Discs ``{λ̂ : |λ̂ - ĥ_ii| ≤ Σ_{j≠i} |ĥ_ij|}`` and eigenvalue membership.

    ``contained`` uses the dual total order on full dual numbers;
    ``contained_std`` checks only the standard parts.
    """

    centers: list[DualNumber]
    radii: list[DualNumber]
    eigenvalues: list[DualNumber]
    contained: list[bool]
    contained_std: list[bool]
    discs: list[list[int]] = field(default_factory=list)
    tol: float = 0.0

    @property
    def all_contained(self) -> bool:
        return all(self.contained)


def gershgorin_discs(a: DQMatrix) -> tuple[list[DualNumber], list[DualNumber]]:
    _hermitian_check(a)
    n = a.shape[0]
    centers = [DualNumber(a.std[i, i, 0], a.dual[i, i, 0]) for i in range(n)]
    mag_std = qnorm_arr(a.std)
    safe = np.where(mag_std == 0.0, 1.0, mag_std)
    mag_dual = np.where(
        mag_std == 0.0, qnorm_arr(a.dual), np.sum(a.std * a.dual, axis=-1) / safe
    )
    radii = []
    for i in range(n):
        off = [j for j in range(n) if j != i]
        radii.append(DualNumber(float(np.sum(mag_std[i, off])), float(np.sum(mag_dual[i, off]))))
    return centers, radii


def gershgorin(a: DQMatrix, eigenvalues: list[DualNumber] | None = None, tol: float = ZERO_TOL) -> GershgorinReport:
    """Check every eigenvalue against the union of dual Gershgorin discs.

    ``tol`` absorbs round-off in ties of the total order; it is scaled by the
    largest disc extent when that exceeds one.
    """
    centers, radii = gershgorin_discs(a)
    if eigenvalues is None:
        eigenvalues = herm_eigen(a).eigenvalues
    extent = max([1.0] + [abs(c.std) + r.std for c, r in zip(centers, radii)])
    t = tol * extent
    contained, contained_std, discs = [], [], []
    for lam in eigenvalues:
        hits = []
        std_hit = False
        for i, (c, r) in enumerate(zip(centers, radii)):
            d = _abs_tolerant(lam - c, t)
            if dn_leq(d, r, t):
                hits.append(i)
            if abs(lam.std - c.std) <= r.std + t:
                std_hit = True
        contained.append(bool(hits))
        contained_std.append(std_hit)
        discs.append(hits)
    return GershgorinReport(centers, radii, list(eigenvalues), contained, contained_std, discs, t)


class Definiteness(str, enum.Enum):
    POSITIVE_DEFINITE = "positive-definite"
    POSITIVE_SEMIDEFINITE = "positive-semidefinite"
    INDEFINITE = "indefinite"


def classify_eigenvalues(eigenvalues: list[DualNumber], tol: float = ZERO_TOL) -> Definiteness:
    zero = DualNumber(0.0, 0.0)
    if all(v.std > tol for v in eigenvalues):
        return Definiteness.POSITIVE_DEFINITE
    if all(dn_leq(zero, v, tol) for v in eigenvalues):
        return Definiteness.POSITIVE_SEMIDEFINITE
    return Definiteness.INDEFINITE


def classify_definiteness(a: DQMatrix, tol: float = ZERO_TOL) -> Definiteness:
    """PD iff every eigenvalue is positive and appreciable; PSD iff all ``≥ 0``."""
    return classify_eigenvalues(herm_eigen(a).eigenvalues, tol)


def quadratic_form(a: DQMatrix, x) -> DualNumber:
    """``x̂*Âx̂`` (a dual number for Hermitian ``Â``)."""
    x = as_column(x)
    return inner(x, a @ x).as_dual_number()


def zero_count(eigenvalues: list[DualNumber], tol: float = ZERO_TOL) -> int:
    return sum(1 for v in eigenvalues if abs(v.std) <= tol and abs(v.dual) <= tol)
