"""Reference implementations written independently of the package.

Nothing here imports dqform: each oracle uses a different representation
(explicit component formulas, real matrix representations, closed forms) so
that agreement with the package is evidence rather than tautology.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg


# dual numbers as 2x2 real matrices [[a, b], [0, a]] --------------------------

def dual_matrix(a: float, b: float) -> np.ndarray:
    return np.array([[a, b], [0.0, a]])


def dual_from_matrix(m: np.ndarray) -> tuple[float, float]:
    return float(m[0, 0]), float(m[0, 1])


# quaternions by explicit component formulas ---------------------------------

def hamilton(p, q) -> np.ndarray:
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ])


def conj(q) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def left_rep(q) -> np.ndarray:
    """Real 4x4 matrix of left multiplication, written out by hand."""
    a, b, c, d = q
    return np.array([
        [a, -b, -c, -d],
        [b, a, -d, c],
        [c, d, a, -b],
        [d, -c, b, a],
    ])


def dq_rep(x) -> np.ndarray:
    """8x8 real matrix of left multiplication by a dual quaternion."""
    x = np.asarray(x, dtype=float)
    out = np.zeros((8, 8))
    out[:4, :4] = out[4:, 4:] = left_rep(x[:4])
    out[4:, :4] = left_rep(x[4:])
    return out


def dq_product(p, q) -> np.ndarray:
    return dq_rep(p) @ np.asarray(q, dtype=float)


def rotation_matrix(q) -> np.ndarray:
    """Rotation matrix of a unit quaternion (the classical closed form)."""
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


# quaternion matrices --------------------------------------------------------

def real_rep(a: np.ndarray) -> np.ndarray:
    """4n x 4n real representation of an (n, n, 4) quaternion matrix.

    For Hermitian ``a`` it is symmetric and every eigenvalue of ``a`` appears
    four times.
    """
    n = a.shape[0]
    out = np.zeros((4 * n, 4 * n))
    for i in range(n):
        for j in range(n):
            out[4 * i : 4 * i + 4, 4 * j : 4 * j + 4] = left_rep(a[i, j])
    return out


def standard_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a quaternion Hermitian matrix, descending, via the real representation."""
    w = np.linalg.eigvalsh(real_rep(a))[::-1]
    return w[::4]


def hermitian_2x2_oracle(std: np.ndarray, dual: np.ndarray) -> list[tuple[float, float]]:
    """Dual eigenvalues of a 2x2 Hermitian dual quaternion matrix with distinct standard eigenvalues.

    Standard part: roots of ``(λ - a)(λ - c) = |b|²``.  Eigenvector
    ``x = (b, λ - a)`` solves ``Ax = xλ`` row by row.  Dual part:
    ``x*A_d x / x*x`` (real part).
    """
    a, c = std[0, 0, 0], std[1, 1, 0]
    b = std[0, 1]
    nb2 = float(np.dot(b, b))
    mid, half = (a + c) / 2.0, math.sqrt(((a - c) / 2.0) ** 2 + nb2)
    out = []
    for lam in (mid + half, mid - half):
        x = [b, np.array([lam - a, 0.0, 0.0, 0.0])]
        num = np.zeros(4)
        for i in range(2):
            for j in range(2):
                num += hamilton(conj(x[i]), hamilton(dual[i, j], x[j]))
        den = sum(float(np.dot(v, v)) for v in x)
        out.append((lam, num[0] / den))
    return out


# consensus dynamics ---------------------------------------------------------

def consensus_reference(lap_std: np.ndarray, lap_dual: np.ndarray, z0: np.ndarray, t: float) -> np.ndarray:
    """Exact ``exp(-tL̂)ẑ0`` split into real standard and dual systems.

    ``ż = -Lz`` and ``ż_d = -(L z_d + L_d z)`` stacked as one real linear ODE.
    """
    n = lap_std.shape[0]
    ls, ld = real_rep(lap_std), real_rep(lap_dual)
    big = np.zeros((8 * n, 8 * n))
    big[: 4 * n, : 4 * n] = -ls
    big[4 * n :, 4 * n :] = -ls
    big[4 * n :, : 4 * n] = -ld
    x0 = np.concatenate([z0[:, :4].ravel(), z0[:, 4:].ravel()])
    x = scipy.linalg.expm(t * big) @ x0
    return np.concatenate([x[: 4 * n].reshape(n, 4), x[4 * n :].reshape(n, 4)], axis=1)


def p2_closed_form(t: float) -> tuple[float, float]:
    """P₂ with unit real weight from ``z(0) = (0, 2)``."""
    e = math.exp(-2.0 * t)
    return 1.0 - e, 1.0 + e


def twist_exponential(omega: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    """Body-frame constant twist: the 4x4 homogeneous transform after time ``t``.

    Uses the SE(3) matrix exponential of the body twist ``[ω]^, v`` where
    ``v = ṗ + ω × p`` is the dual part of the twist.
    """
    hat = np.array([[0, -omega[2], omega[1]], [omega[2], 0, -omega[0]], [-omega[1], omega[0], 0]])
    g = np.zeros((4, 4))
    g[:3, :3] = hat
    g[:3, 3] = v
    return scipy.linalg.expm(t * g)
