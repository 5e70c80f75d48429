"""Immutable undirected graph with the structural primitives used everywhere else.

Vertices carry opaque external string tokens; internally they are dense
0-based indices in token first-appearance order. The adjacency is stored in
CSR form (``indptr``/``indices``) with each neighbor list sorted strictly
ascending. Graphs are immutable after construction and safe to share across
worker processes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Graph",
    "SampledSubgraph",
    "EdgeListParseError",
    "DegenerateCutError",
    "load_edge_list",
    "loads_edge_list",
    "write_edge_list",
    "as_vertex_set",
    "cut_size",
    "volume",
    "conductance",
    "induced_subgraph",
    "k_core",
    "connected_components",
]


class EdgeListParseError(ValueError):
    """Raised for a malformed edge-list line; carries the 1-based line number."""

    def __init__(self, lineno: int, text: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: expected two whitespace-separated tokens, got {text!r}")


class DegenerateCutError(ValueError):
    """Conductance requested for a set with an empty or zero-volume side."""

    def __init__(self, reason: str):
        self.reason = reason  # "empty-set" | "full-set" | "zero-volume-side"
        super().__init__(f"conductance undefined: {reason}")


class Graph:
    """Undirected simple graph: CSR adjacency plus external label bijection."""

    __slots__ = ("indptr", "indices", "labels", "_label_to_index")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, labels: Sequence[str]):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.labels = tuple(labels)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        self._label_to_index = {tok: i for i, tok in enumerate(self.labels)}

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> "Graph":
        """Build from (u, v) index pairs; self-loops dropped, duplicates collapsed."""
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise ValueError(f"{len(labels)} labels for {n} vertices")
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise ValueError("edge endpoint out of range")
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]  # no self-loops
        if pairs.size:
            both = np.concatenate([pairs, pairs[:, ::-1]])
            both = np.unique(both, axis=0)  # collapses duplicates, sorts (u, v)
            src, dst = both[:, 0], both[:, 1]
        else:
            src = dst = np.empty(0, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(indptr, dst, labels)

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor indices of ``v`` (a read-only view)."""
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        k = np.searchsorted(nbrs, v)
        return k < len(nbrs) and nbrs[k] == v

    def index_of(self, token: str) -> int:
        return self._label_to_index[token]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each undirected edge once, as (u, v) with u < v, in sorted order."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield u, int(v)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.labels == other.labels
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.labels, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # pickling for worker processes (slots class)

    def __getstate__(self):
        return self.indptr, self.indices, self.labels

    def __setstate__(self, state):
        indptr, indices, labels = state
        self.__init__(indptr, indices, labels)

    def validate(self) -> None:
        """Assert structural invariants (test helper)."""
        n = self.n
        assert self.indptr[0] == 0 and self.indptr[-1] == len(self.indices)
        assert np.all(np.diff(self.indptr) >= 0)
        deg_sum = 0
        for u in range(n):
            nbrs = self.neighbors(u)
            assert np.all(np.diff(nbrs) > 0), f"neighbor list of {u} not strictly ascending"
            assert not np.any(nbrs == u), f"self-loop at {u}"
            deg_sum += len(nbrs)
            for v in nbrs:
                assert self.has_edge(int(v), u), f"asymmetric edge ({u},{v})"
        assert deg_sum == 2 * self.m


@dataclass(frozen=True)
class SampledSubgraph:
    """Induced subgraph plus the index mapping back to its parent graph.

    ``graph`` reuses the parent's external tokens, so label-space operations
    work on it directly; ``to_parent`` maps local index -> parent index.
    ``seed_local`` is filled by the sampler (empty for plain induced subgraphs).
    """

    graph: Graph
    to_parent: np.ndarray
    seed_local: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.graph.n

    def to_local(self, parent_vertices: np.ndarray) -> np.ndarray:
        """Map parent indices into local indices (all must be present)."""
        pos = np.searchsorted(self.to_parent, parent_vertices)
        ok = (pos < len(self.to_parent)) & (self.to_parent[np.minimum(pos, len(self.to_parent) - 1)] == parent_vertices)
        if not np.all(ok):
            missing = np.asarray(parent_vertices)[~ok]
            raise KeyError(f"parent vertices {missing.tolist()} not in subgraph")
        return pos


# -- edge-list I/O -----------------------------------------------------------


def loads_edge_list(text: str) -> Graph:
    """Parse edge-list text: one edge per line, two whitespace-separated tokens.

    Lines starting with ``#`` and blank lines are ignored. Tokens are opaque
    strings mapped to dense indices in first-appearance order; duplicate edges
    collapse and self-loops are dropped. Empty input gives the empty graph.
    """
    labels: list[str] = []
    label_of: dict[str, int] = {}
    edges: list[tuple[int, int]] = []

    def intern(tok: str) -> int:
        i = label_of.get(tok)
        if i is None:
            i = len(labels)
            label_of[tok] = i
            labels.append(tok)
        return i

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, raw)
        edges.append((intern(parts[0]), intern(parts[1])))
    return Graph.from_edges(len(labels), edges, labels)


def load_edge_list(path) -> Graph:
    """Read :func:`loads_edge_list` input from a UTF-8 file."""
    with open(path, encoding="utf-8") as fh:
        return loads_edge_list(fh.read())


def write_edge_list(path, g: Graph) -> None:
    """Write one ``token token`` line per edge, in sorted index order."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{g.labels[u]} {g.labels[v]}\n")


# -- vertex sets -------------------------------------------------------------


def as_vertex_set(g: Graph, vs: Iterable[int]) -> np.ndarray:
    """Normalize to a sorted, deduplicated int64 index array; bounds-checked."""
    arr = np.unique(np.asarray(list(vs) if not isinstance(vs, np.ndarray) else vs, dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= g.n):
        raise ValueError(f"vertex index out of range for graph with n={g.n}")
    return arr


def _membership(sorted_set: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Boolean membership of ``queries`` in a sorted array, without O(n) scratch."""
    if sorted_set.size == 0:
        return np.zeros(len(queries), dtype=bool)
    pos = np.searchsorted(sorted_set, queries)
    pos[pos == len(sorted_set)] = len(sorted_set) - 1
    return sorted_set[pos] == queries


def _neighbor_block(g: Graph, vs: np.ndarray) -> np.ndarray:
    """Concatenated neighbor lists of ``vs`` (work ~ sum of degrees of vs)."""
    counts = (g.indptr[vs + 1] - g.indptr[vs]).astype(np.int64)
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    starts = g.indptr[vs]
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    return g.indices[np.repeat(starts, counts) + offsets]


def volume(g: Graph, c: np.ndarray) -> int:
    """Total degree of the vertices in ``c``."""
    return int((g.indptr[c + 1] - g.indptr[c]).sum())


def cut_size(g: Graph, c: Iterable[int]) -> int:
    """Number of edges with exactly one endpoint in ``c``."""
    c = as_vertex_set(g, c)
    if c.size == 0 or c.size == g.n:
        return 0
    nbrs = _neighbor_block(g, c)
    return int(np.count_nonzero(~_membership(c, nbrs)))


def conductance(g: Graph, c: Iterable[int]) -> float:
    """cut(c, c̄) / min(Vol(c), Vol(c̄)); errors on degenerate sets.

    Both the empty and the full vertex set are rejected, as is any split
    where one side has zero volume — callers are expected to stay inside the
    well-defined range rather than rely on an infinity convention.
    """
    c = as_vertex_set(g, c)
    if c.size == 0:
        raise DegenerateCutError("empty-set")
    if c.size == g.n:
        raise DegenerateCutError("full-set")
    vol_c = volume(g, c)
    vol_rest = 2 * g.m - vol_c
    if min(vol_c, vol_rest) == 0:
        raise DegenerateCutError("zero-volume-side")
    return cut_size(g, c) / min(vol_c, vol_rest)


def induced_subgraph(g: Graph, vs: Iterable[int]) -> SampledSubgraph:
    """Subgraph on ``vs`` with exactly the parent edges inside ``vs``.

    Work is proportional to ``vs`` and its incident edges, not to ``g.n``.
    """
    vs = as_vertex_set(g, vs)
    k = len(vs)
    counts = g.indptr[vs + 1] - g.indptr[vs]
    nbrs = _neighbor_block(g, vs)
    keep = _membership(vs, nbrs)
    # renumber kept neighbors to local ids; vs is sorted so searchsorted is the map
    local_indices = np.searchsorted(vs, nbrs[keep])
    row_ids = np.repeat(np.arange(k, dtype=np.int64), counts)
    kept_per_row = np.bincount(row_ids[keep], minlength=k).astype(np.int64)
    indptr = np.zeros(k + 1, dtype=np.int64)
    np.cumsum(kept_per_row, out=indptr[1:])
    local = Graph(indptr, local_indices, [g.labels[int(p)] for p in vs])
    return SampledSubgraph(graph=local, to_parent=vs)


def k_core(g: Graph, k: int) -> np.ndarray:
    """Vertices of the maximal subgraph where every vertex has degree >= k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    deg = g.degrees.copy()
    alive = np.ones(g.n, dtype=bool)
    queue = deque(np.flatnonzero(deg < k).tolist())
    while queue:
        u = queue.popleft()
        if not alive[u]:
            continue
        alive[u] = False
        for v in g.neighbors(u):
            if alive[v]:
                deg[v] -= 1
                if deg[v] < k:
                    queue.append(int(v))
    return np.flatnonzero(alive).astype(np.int64)


def connected_components(g: Graph) -> list[np.ndarray]:
    """Maximal connected vertex sets, each sorted, ordered by smallest member."""
    seen = np.zeros(g.n, dtype=bool)
    out: list[np.ndarray] = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    comp.append(int(v))
                    queue.append(int(v))
        out.append(np.array(sorted(comp), dtype=np.int64))
    return out  # discovery from vertex 0 upward => ordered by smallest member


def subgraph_as_graph(g: Graph, vs: Iterable[int]) -> Graph:
    """Induced subgraph repackaged as a standalone Graph (labels preserved)."""
    return induced_subgraph(g, vs).graph
