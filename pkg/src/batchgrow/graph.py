"""Compressed-adjacency graph, BFS primitives and exact small-scale oracles."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DisconnectedGraph, TooLarge

# Strictly larger than any hop distance a graph we can hold could produce.
UNREACHABLE = np.int64(2**62)

EXACT_DIAMETER_CAP = 10_000
KCENTER_MAX_N = 30
KCENTER_MAX_K = 4


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected unweighted graph in CSR form.

    ``indptr``/``indices`` hold sorted neighbour lists; ``labels`` maps the
    dense ids back to the ids found in an input file (None for generated
    graphs).
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Each undirected edge once, as (u, v) with u < v."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degree())
        keep = src < self.indices
        return src[keep], self.indices[keep]

    @classmethod
    def from_edges(cls, n: int, u, v, labels=None) -> "Graph":
        """Build from an edge list; drops self-loops and duplicates, symmetrizes."""
        if n < 1:
            raise ValueError("a graph needs at least one node")
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise ValueError("endpoint arrays differ in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise ValueError("edge endpoint out of range")
        keep = u != v
        src = np.concatenate([u[keep], v[keep]])
        dst = np.concatenate([v[keep], u[keep]])
        key = np.unique(src * n + dst)
        src, dst = key // n, key % n
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if labels is not None:
            labels = np.asarray(labels, dtype=np.int64)
        return cls(indptr, dst.astype(np.int64), labels)

    def subgraph(self, nodes) -> "Graph":
        """Induced subgraph on ``nodes`` (sorted), ids remapped densely."""
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[nodes] = np.arange(len(nodes))
        u, v = self.edges()
        keep = (remap[u] >= 0) & (remap[v] >= 0)
        base = self.labels if self.labels is not None else np.arange(self.n)
        return Graph.from_edges(len(nodes), remap[u[keep]], remap[v[keep]], labels=base[nodes])


@dataclass(frozen=True, eq=False)
class DistanceVector:
    source: int
    dist: np.ndarray

    def reachable(self) -> np.ndarray:
        return self.dist < UNREACHABLE

    def eccentricity(self) -> int:
        return int(self.dist[self.reachable()].max())


def frontier_edges(g: Graph, frontier: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All (u, w) with u in ``frontier`` and w adjacent to u, vectorized."""
    starts = g.indptr[frontier]
    deg = g.indptr[frontier + 1] - starts
    total = int(deg.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    src = np.repeat(frontier, deg)
    offsets = np.repeat(starts - np.cumsum(deg) + deg, deg) + np.arange(total)
    return src, g.indices[offsets]


def multi_source_bfs(g: Graph, sources) -> np.ndarray:
    """Hop distance from every node to the nearest node of ``sources``."""
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    dist[frontier] = 0
    level = 0
    while frontier.size:
        level += 1
        _, nbrs = frontier_edges(g, frontier)
        nbrs = np.unique(nbrs)
        frontier = nbrs[dist[nbrs] == UNREACHABLE]
        dist[frontier] = level
    return dist


def bfs(g: Graph, source: int) -> DistanceVector:
    if not 0 <= source < g.n:
        raise IndexError(f"source {source} not in graph with {g.n} nodes")
    return DistanceVector(int(source), multi_source_bfs(g, [source]))


def _segment_or(values: np.ndarray, indptr: np.ndarray) -> np.ndarray:
    # np.bitwise_or.reduceat mishandles empty segments, so reduce only rows
    # that have neighbours; zero-length rows collapse away when dropped.
    n = len(indptr) - 1
    out = np.zeros((n,) + values.shape[1:], dtype=values.dtype)
    nonempty = np.flatnonzero(np.diff(indptr) > 0)
    if nonempty.size:
        out[nonempty] = np.bitwise_or.reduceat(values, indptr[nonempty], axis=0)
    return out


def _eccentricity_batch(g: Graph, sources: np.ndarray) -> np.ndarray:
    # Bit-parallel BFS: bit j of row v says "source j has reached v".
    k = len(sources)
    words = (k + 63) // 64
    bit = np.left_shift(np.uint64(1), (np.arange(k) % 64).astype(np.uint64))
    visited = np.zeros((g.n, words), dtype=np.uint64)
    np.bitwise_or.at(visited, (sources, np.arange(k) // 64), bit)
    frontier = visited.copy()
    ecc = np.zeros(k, dtype=np.int64)
    level = 0
    while True:
        nxt = _segment_or(frontier[g.indices], g.indptr) & ~visited
        seen = np.bitwise_or.reduce(nxt, axis=0)
        if not seen.any():
            break
        level += 1
        visited |= nxt
        frontier = nxt
        hit = (seen[np.arange(k) // 64] & bit) != 0
        ecc[hit] = level
    full = np.bitwise_and.reduce(visited, axis=0)
    complete = (full[np.arange(k) // 64] & bit) != 0
    ecc[~complete] = UNREACHABLE
    return ecc


def eccentricities(g: Graph, sources=None, workers: int = 1, batch: int = 1024) -> np.ndarray:
    """Eccentricity of each source (UNREACHABLE if it does not reach every node)."""
    sources = np.arange(g.n) if sources is None else np.asarray(sources, dtype=np.int64)
    chunks = [sources[i:i + batch] for i in range(0, len(sources), batch)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _eccentricity_batch(g, c), chunks))
    else:
        parts = [_eccentricity_batch(g, c) for c in chunks]
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def exact_diameter(g: Graph, max_nodes: int = EXACT_DIAMETER_CAP, workers: int = 1) -> int:
    """All-pairs BFS diameter. Refuses graphs above ``max_nodes`` (None disables)."""
    if max_nodes is not None and g.n > max_nodes:
        raise TooLarge(f"exact diameter on {g.n} nodes exceeds cap {max_nodes}")
    ecc = eccentricities(g, workers=workers)
    if (ecc >= UNREACHABLE).any():
        raise DisconnectedGraph("graph is not connected")
    return int(ecc.max())


def double_bfs_bound(g: Graph, seed: int) -> int:
    """2 * ecc(v) for a seeded random v: an upper bound within factor two of the diameter."""
    v = int(np.random.default_rng(seed).integers(g.n))
    return 2 * bfs_eccentricity(g, v)


def bfs_eccentricity(g: Graph, v: int) -> int:
    dv = bfs(g, v)
    if not dv.reachable().all():
        raise DisconnectedGraph("graph is not connected")
    return dv.eccentricity()


def connected_components(g: Graph) -> tuple[np.ndarray, int]:
    """Dense component ids (numbered by lowest member) and the component count."""
    comp = np.full(g.n, -1, dtype=np.int64)
    h = 0
    for s in range(g.n):
        if comp[s] >= 0:
            continue
        if g.indptr[s] == g.indptr[s + 1]:
            comp[s] = h
        else:
            comp[multi_source_bfs(g, [s]) < UNREACHABLE] = h
        h += 1
    return comp, h


def all_pairs_distances(g: Graph) -> np.ndarray:
    return np.stack([multi_source_bfs(g, [s]) for s in range(g.n)])


def exact_kcenter(g: Graph, k: int) -> tuple[tuple[int, ...], int]:
    """Brute-force optimal k-center on tiny graphs (test oracle)."""
    if g.n > KCENTER_MAX_N or k > KCENTER_MAX_K:
        raise TooLarge(f"exact k-center limited to n <= {KCENTER_MAX_N}, k <= {KCENTER_MAX_K}")
    if not 1 <= k <= g.n:
        raise ValueError("k must lie in [1, n]")
    d = all_pairs_distances(g)
    if (d >= UNREACHABLE).any():
        raise DisconnectedGraph("graph is not connected")
    best, best_r = None, None
    for subset in itertools.combinations(range(g.n), k):
        r = int(d[list(subset)].min(axis=0).max())
        if best_r is None or r < best_r:
            best, best_r = subset, r
    return best, best_r


def log2n(n: int) -> float:
    return math.log2(n) if n > 1 else 0.0
