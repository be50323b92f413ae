"""Seeded random instances for property sweeps.

Everything draws from a Philox counter-based generator so that a seed fully
determines an instance regardless of how many instances are drawn in parallel:
instance ``k`` of a sweep uses the stream ``(seed, k)``.
"""

from __future__ import annotations

import numpy as np

from .dualquat import DualQuaternion, Pose, pose_from_rotation_translation
from .graph import PoseAssignment, VisibilityGraph
from .matrix import DQMatrix
from .quaternion import Quaternion, UnitQuaternion, qconj_arr


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed by ``seed`` on substream ``stream``."""
    return np.random.Generator(np.random.Philox(key=[int(seed) & (2**64 - 1), int(stream) & (2**64 - 1)]))


def random_unit_quaternion(rng: np.random.Generator) -> UnitQuaternion:
    v = rng.normal(size=4)
    return UnitQuaternion(*(v / np.linalg.norm(v)))


def random_pose(rng: np.random.Generator, scale: float = 1.0) -> Pose:
    q = random_unit_quaternion(rng)
    p = Quaternion(0.0, *(scale * rng.normal(size=3)))
    return pose_from_rotation_translation(q, p)


def random_dual_quaternion(rng: np.random.Generator) -> DualQuaternion:
    return DualQuaternion.from_array(rng.normal(size=8))


def random_hermitian(rng: np.random.Generator, n: int, dual_scale: float = 1.0) -> DQMatrix:
    """``(M + M*)/2`` for a Gaussian dual quaternion matrix ``M``."""
    std = rng.normal(size=(n, n, 4))
    dual = dual_scale * rng.normal(size=(n, n, 4))
    herm = lambda a: 0.5 * (a + qconj_arr(a.transpose(1, 0, 2)))  # noqa: E731
    return DQMatrix(herm(std), herm(dual))


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5) -> VisibilityGraph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return VisibilityGraph(n, frozenset(edges))


def random_connected_graph(rng: np.random.Generator, n: int, p: float = 0.3) -> VisibilityGraph:
    """Random recursive tree plus independent extra edges with probability ``p``."""
    order = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        a, b = int(order[k]), int(order[rng.integers(k)])
        edges.add((min(a, b), max(a, b)))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    return VisibilityGraph(n, frozenset(edges))


def random_pose_assignment(rng: np.random.Generator, n: int, scale: float = 1.0) -> PoseAssignment:
    return PoseAssignment([random_pose(rng, scale) for _ in range(n)])


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    """``(n, 8)`` array of Gaussian dual quaternions."""
    return rng.normal(size=(n, 8))
