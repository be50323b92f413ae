"""Cyclic Jacobi eigensolver for complex Hermitian matrices.

Pairs are visited in round-robin (tournament) order, so every round consists of
``m/2`` disjoint rotations that commute and are applied together with a handful
of vectorized numpy operations.  One sweep = ``m-1`` rounds = every pair once.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ConvergenceFailure

MAX_SWEEPS = 100
REL_TOL = 1e-12


@lru_cache(maxsize=None)
def _rounds(m: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Round-robin schedule of disjoint index pairs covering all ``m(m-1)/2`` pairs."""
    players = list(range(m + (m % 2)))
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for k in range(size // 2):
            a, b = players[k], players[size - 1 - k]
            if a < m and b < m:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_eigh(
    a: np.ndarray,
    rel_tol: float = REL_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Diagonalize a complex Hermitian matrix.

    Args:
        a: ``(m, m)`` Hermitian matrix. Not modified.
        rel_tol: stop once the off-diagonal Frobenius norm is below
            ``rel_tol * ||a||_F``.
        max_sweeps: cap on full cyclic sweeps.

    Returns:
        ``(w, v, sweeps)`` with real eigenvalues ``w`` in descending order,
        unitary ``v`` whose columns are the eigenvectors, and the sweep count.
        One extra sweep is always run after the threshold is first met.

    Raises:
        ConvergenceFailure: if the cap is reached first.
    """
    m = a.shape[0]
    work = np.array(a, dtype=complex)
    vecs = np.eye(m, dtype=complex)
    scale = float(np.linalg.norm(work))
    threshold = rel_tol * scale
    tiny = np.finfo(float).tiny
    sweeps = 0
    if m > 1 and scale > 0.0:
        rounds = _rounds(m)
        polish = True
        while True:
            if _off_norm(work) <= threshold:
                if not polish:
                    break
                # convergence is quadratic: one more sweep takes the off-diagonal
                # mass to round-off, which the eigenvector pairs need
                polish = False
            if sweeps >= max_sweeps:
                raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
            sweeps += 1
            for p, q in rounds:
                g = work[p, q]
                mag = np.abs(g)
                active = mag > tiny
                if not np.any(active):
                    continue
                safe = np.where(active, mag, 1.0)
                # phase that makes the (p, q) entry real and positive
                e = np.where(active, np.conj(g) / safe, 1.0)
                app = work[p, p].real
                aqq = work[q, q].real
                theta = (aqq - app) / (2.0 * safe)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # J = [[c, s], [-s e, c e]] acting on columns (p, q)
                cp = work[:, p].copy()
                cq = work[:, q]
                work[:, p] = cp * c - cq * (s * e)
                work[:, q] = cp * s + cq * (c * e)
                rp = work[p, :].copy()
                rq = work[q, :]
                ec = np.conj(e)
                work[p, :] = rp * c[:, None] - rq * (s * ec)[:, None]
                work[q, :] = rp * s[:, None] + rq * (c * ec)[:, None]
                work[p, q] = 0.0
                work[q, p] = 0.0
                vp = vecs[:, p].copy()
                vq = vecs[:, q]
                vecs[:, p] = vp * c - vq * (s * e)
                vecs[:, q] = vp * s + vq * (c * e)
    w = np.diag(work).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], vecs[:, order], sweeps
