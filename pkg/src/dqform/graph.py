"""Mutual visibility graphs, their dual quaternion adjacency matrices and Laplacians."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .dual import DualNumber
from .dualquat import DualQuaternion, Pose, dq_magnitude, pose_log, relative_configuration
from .errors import (
    AdjacencyInvalid,
    Disconnected,
    MissingTwists,
    NotACycle,
    NotImaginary,
    SizeMismatch,
    ValidationError,
)
from .matrix import (
    ZERO_TOL,
    DQMatrix,
    GershgorinReport,
    HermitianEigenDecomposition,
    classify_eigenvalues,
    Definiteness,
    gershgorin,
    herm_eigen,
    zero_count,
)

UNIT_ENTRY_TOL = 1e-9
CYCLE_TOL = 1e-9

Edge = tuple[int, int]
AdjacencyKind = Literal["config", "log", "twist"]


@dataclass(frozen=True)
class VisibilityGraph:
    """Undirected simple graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValidationError("vertex count must be nonnegative")
        normalized = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValidationError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError(f"edge {e} out of range for n={self.n}")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> VisibilityGraph:
        edges = [tuple(e) for e in edges]
        seen = set()
        for i, j in edges:
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(edges))

    @classmethod
    def path(cls, n: int) -> VisibilityGraph:
        return cls(n, frozenset((i, i + 1) for i in range(n - 1)))

    @classmethod
    def complete(cls, n: int) -> VisibilityGraph:
        return cls(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, i: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == i} | {a for a, b in self.edges if b == i})

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            d[i] += 1
            d[j] += 1
        return d

    def adjacency_real(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def laplacian_real(self) -> np.ndarray:
        return np.diag(self.degrees().astype(float)) - self.adjacency_real()

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        adj = {i: self.neighbors(i) for i in range(self.n)}
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp, queue = [], deque([s])
            seen[s] = True
            while queue:
                v = queue.popleft()
                comp.append(v)
                for w in adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1


@dataclass
class PoseAssignment:
    """Configurations of the ``n`` bodies, plus optional twist data.

    ``twists`` are per-body twists (used by pose-level simulation);
    ``relative_twists`` maps ordered pairs ``(i, j)`` to the relative twist
    entry of the twist adjacency matrix.  No formula links the two.
    """

    poses: list[Pose]
    twists: list[DualQuaternion] | None = None
    relative_twists: dict[Edge, DualQuaternion] | None = None

    def __post_init__(self) -> None:
        self.poses = [Pose.of(p) for p in self.poses]
        if self.twists is not None:
            if len(self.twists) != len(self.poses):
                raise SizeMismatch("one twist per pose is required")
            for t in self.twists:
                if not t.is_imaginary():
                    raise NotImaginary("twists must be imaginary dual quaternions")
        if self.relative_twists is not None:
            for key, t in self.relative_twists.items():
                if not t.is_imaginary():
                    raise NotImaginary(f"relative twist {key} is not imaginary")

    @property
    def n(self) -> int:
        return len(self.poses)


def _entries_to_matrix(n: int, entries: Mapping[Edge, DualQuaternion]) -> DQMatrix:
    arr = np.zeros((n, n, 8))
    for (i, j), e in entries.items():
        arr[i, j] = e.to_array()
    return DQMatrix.from_array8(arr)


def build_adjacency(g: VisibilityGraph, p: PoseAssignment, kind: AdjacencyKind = "config") -> DQMatrix:
    """Relative configuration, logarithm, or relative twist adjacency matrix.

    Entry ``(i, j)`` on an edge is ``q̂_i⁻¹q̂_j`` (``config``), its logarithm
    (``log``) or the supplied relative twist (``twist``); other entries are zero.
    """
    if p.n != g.n:
        raise SizeMismatch(f"{p.n} poses for {g.n} vertices")
    entries: dict[Edge, DualQuaternion] = {}
    if kind == "twist":
        if p.relative_twists is None:
            raise MissingTwists("relative twists are required for the twist adjacency")
        for i, j in g.sorted_edges():
            for key in ((i, j), (j, i)):
                if key not in p.relative_twists:
                    raise MissingTwists(f"no relative twist for ordered pair {key}")
                entries[key] = p.relative_twists[key]
        return _entries_to_matrix(g.n, entries)
    if kind not in ("config", "log"):
        raise ValidationError(f"unknown adjacency kind {kind!r}")
    for i, j in g.sorted_edges():
        for a, b in ((i, j), (j, i)):
            rel = relative_configuration(p.poses[a], p.poses[b])
            entries[(a, b)] = rel if kind == "config" else pose_log(rel)
    return _entries_to_matrix(g.n, entries)


def adjacency_from_measurements(g: VisibilityGraph, measured: Mapping[Edge, DualQuaternion]) -> DQMatrix:
    """Relative configuration matrix from sensed ``q̂_ij`` instead of absolute poses.

    A pair given in one direction only is completed with ``q̂_ji = q̂_ij*``.
    """
    entries: dict[Edge, DualQuaternion] = {}
    for (i, j), q in measured.items():
        if not g.has_edge(i, j):
            raise ValidationError(f"measurement for non-edge ({i}, {j})")
        q = Pose.of(q)
        entries[(i, j)] = q
        entries.setdefault((j, i), q.conj())
    for i, j in g.sorted_edges():
        if (i, j) not in entries:
            raise ValidationError(f"edge ({i}, {j}) has no measurement")
    return _entries_to_matrix(g.n, entries)


def log_adjacency(g: VisibilityGraph, c: DQMatrix) -> DQMatrix:
    """Entrywise logarithm of a relative configuration matrix on the edges of ``g``."""
    entries: dict[Edge, DualQuaternion] = {}
    for i, j in g.sorted_edges():
        entries[(i, j)] = pose_log(c[i, j])
        entries[(j, i)] = pose_log(c[j, i])
    return _entries_to_matrix(g.n, entries)


# ---------------------------------------------------------------------------
# cycles and tree reduction

def cycle_product(c: DQMatrix, cycle: Sequence[int]) -> DualQuaternion:
    prod = DualQuaternion.coerce(1.0)
    k = len(cycle)
    for t in range(k):
        prod = prod * c[cycle[t], cycle[(t + 1) % k]]
    return prod


def _normalize_cycle(g: VisibilityGraph, cycle: Sequence[int]) -> list[int]:
    walk = [int(v) for v in cycle]
    if len(walk) > 1 and walk[0] == walk[-1]:
        walk = walk[:-1]
    if len(walk) < 2:
        raise NotACycle(f"{list(cycle)} is not a closed walk")
    for t in range(len(walk)):
        a, b = walk[t], walk[(t + 1) % len(walk)]
        if not (0 <= a < g.n and 0 <= b < g.n) or not g.has_edge(a, b):
            raise NotACycle(f"({a}, {b}) is not an edge")
    return walk


def cycle_consistency(g: VisibilityGraph, c: DQMatrix, cycle: Sequence[int]) -> DualNumber:
    """``|∏ q̂_{j_t j_{t+1}} - 1|`` around a closed walk, as a dual magnitude.

    The walk may be given open (``[a, b, c]``) or closed (``[a, b, c, a]``).
    Zero means the measurements around the cycle are consistent.
    """
    walk = _normalize_cycle(g, cycle)
    return dq_magnitude(cycle_product(c, walk) - 1.0)


def deviation_size(d: DualNumber) -> float:
    return max(abs(d.std), abs(d.dual))


def spanning_forest(g: VisibilityGraph) -> tuple[list[Edge], list[Edge]]:
    """Kruskal over edges in ascending lexicographic order.

    Returns ``(tree_edges, removed_edges)``; the removed edges are listed in
    descending order, which is the order in which repeatedly deleting the
    largest edge lying on a cycle would remove them.
    """
    parent = list(range(g.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    kept, removed = [], []
    for i, j in g.sorted_edges():
        ri, rj = find(i), find(j)
        if ri == rj:
            removed.append((i, j))
        else:
            parent[ri] = rj
            kept.append((i, j))
    return kept, sorted(removed, reverse=True)


def reduce_to_tree(g: VisibilityGraph) -> tuple[VisibilityGraph, list[Edge]]:
    """Delete cycle edges until a spanning tree remains.

    Raises:
        Disconnected: if ``g`` has more than one component.
    """
    if not g.is_connected():
        raise Disconnected(f"graph has {len(g.components())} components")
    kept, removed = spanning_forest(g)
    return VisibilityGraph(g.n, frozenset(kept)), removed


def _tree_path(adj: dict[int, list[int]], src: int, dst: int) -> list[int]:
    prev = {src: src}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for w in adj[v]:
            if w not in prev:
                prev[w] = v
                queue.append(w)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def fundamental_cycles(g: VisibilityGraph) -> list[list[int]]:
    """One cycle per non-forest edge ``(i, j)``: the forest path ``j → i`` closed by the edge."""
    kept, removed = spanning_forest(g)
    adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for i, j in kept:
        adj[i].append(j)
        adj[j].append(i)
    for v in adj:
        adj[v].sort()
    return [_tree_path(adj, i, j) for i, j in sorted(removed)]


# ---------------------------------------------------------------------------
# Laplacians

@dataclass
class LaplacianBundle:
    """Degree vector ``D``, adjacency ``Ĥ`` and Laplacian ``L̂ = D − Ĥ``."""

    graph: VisibilityGraph
    degree: np.ndarray
    adjacency: DQMatrix
    laplacian: DQMatrix

    @property
    def n(self) -> int:
        return self.graph.n


def validate_adjacency(g: VisibilityGraph, h: DQMatrix) -> None:
    """Hermitian, unit dual quaternion entries on edges, exact zeros elsewhere."""
    if h.shape != (g.n, g.n):
        raise SizeMismatch(f"adjacency shape {h.shape} for n={g.n}")
    if not h.is_hermitian():
        raise AdjacencyInvalid("adjacency is not Hermitian")
    for i in range(g.n):
        for j in range(g.n):
            entry = h[i, j]
            if i != j and g.has_edge(i, j):
                mag = dq_magnitude(entry)
                if abs(mag.std - 1.0) > UNIT_ENTRY_TOL or abs(mag.dual) > UNIT_ENTRY_TOL:
                    raise AdjacencyInvalid(f"entry ({i}, {j}) has magnitude {mag}, not 1")
            elif np.any(h.std[i, j] != 0.0) or np.any(h.dual[i, j] != 0.0):
                raise AdjacencyInvalid(f"entry ({i}, {j}) must be zero")


def laplacian(g: VisibilityGraph, h: DQMatrix) -> LaplacianBundle:
    """``L̂ = D − Ĥ`` for a valid dual quaternion adjacency matrix ``Ĥ``."""
    validate_adjacency(g, h)
    deg = g.degrees()
    lap = DQMatrix.from_real(np.diag(deg.astype(float))) - h
    return LaplacianBundle(g, deg, h, lap)


def unit_weight_adjacency(g: VisibilityGraph) -> DQMatrix:
    return DQMatrix.from_real(g.adjacency_real())


@dataclass
class SpectrumReport:
    decomposition: HermitianEigenDecomposition
    zero_multiplicity: int
    definiteness: Definiteness
    stability_precondition: bool
    gershgorin: GershgorinReport | None = None
    zero_indices: list[int] = field(default_factory=list)

    @property
    def eigenvalues(self) -> list[DualNumber]:
        return self.decomposition.eigenvalues

    def zero_space_basis(self) -> DQMatrix:
        """Columns spanning the zero eigenspace of ``L̂``."""
        u = self.decomposition.eigenvectors
        idx = self.zero_indices
        return DQMatrix(u.std[:, idx], u.dual[:, idx])


def laplacian_spectrum_report(bundle: LaplacianBundle, tol: float = ZERO_TOL) -> SpectrumReport:
    """Eigen-decomposition of ``L̂`` with zero multiplicity and the stability flag.

    The flag is set when exactly one eigenvalue is ``0 + 0ε`` (within ``tol``)
    and all others are nonnegative.
    """
    dec = herm_eigen(bundle.laplacian)
    zeros = [k for k, v in enumerate(dec.eigenvalues) if abs(v.std) <= tol and abs(v.dual) <= tol]
    definiteness = classify_eigenvalues(dec.eigenvalues, tol)
    mult = zero_count(dec.eigenvalues, tol)
    flag = mult == 1 and definiteness is not Definiteness.INDEFINITE
    report = gershgorin(bundle.laplacian, dec.eigenvalues)
    return SpectrumReport(dec, mult, definiteness, flag, report, zeros)
