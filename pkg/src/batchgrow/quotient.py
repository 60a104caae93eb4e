"""Quotient graphs of a clustering and their exact diameters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .decomposition import Clustering
from .errors import DisconnectedQuotient, TooLarge
from .graph import UNREACHABLE, Graph, eccentricities

APSP_CAP = 2**14
_ROW_CHUNK = 512


@dataclass(frozen=True, eq=False)
class QuotientGraph:
    """Clusters as nodes; ``a[i] < b[i]`` with ``weight[i]`` per edge, sorted by (a, b)."""

    cluster_count: int
    a: np.ndarray
    b: np.ndarray
    weight: np.ndarray
    weighted: bool
    cluster_of: np.ndarray
    centers: np.ndarray

    @property
    def edge_count(self) -> int:
        return len(self.a)

    def to_graph(self) -> Graph:
        return Graph.from_edges(self.cluster_count, self.a, self.b)

    def to_sparse(self) -> csr_matrix:
        n = self.cluster_count
        w = self.weight.astype(np.float64)
        return csr_matrix((np.concatenate([w, w]), (np.concatenate([self.a, self.b]),
                                                    np.concatenate([self.b, self.a]))), shape=(n, n))


def _crossing(g: Graph, c: Clustering):
    cid = c.cluster_index()
    u, v = g.edges()
    cu, cv = cid[u], cid[v]
    cross = cu != cv
    u, v, cu, cv = u[cross], v[cross], cu[cross], cv[cross]
    return cid, u, v, np.minimum(cu, cv), np.maximum(cu, cv)


def _reduce_pairs(lo, hi, w):
    # Sort crossing edges by (lo, hi, w) and keep the lightest per cluster pair.
    order = np.lexsort((w, hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]
    first = np.ones(lo.size, dtype=bool)
    first[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
    return lo[first], hi[first], w[first]


def build_quotient(g: Graph, c: Clustering) -> QuotientGraph:
    cid, u, v, lo, hi = _crossing(g, c)
    lo, hi, w = _reduce_pairs(lo, hi, np.ones(lo.size, dtype=np.int64))
    return QuotientGraph(c.cluster_count, lo, hi, w, False, cid, c.centers)


def build_weighted_quotient(g: Graph, c: Clustering) -> QuotientGraph:
    """Edge weight = shortest center-to-center walk through the two clusters only.

    For a crossing edge (x, y) the walk follows x's parent chain to its center,
    the edge itself, and y's chain: ``round(x) + 1 + round(y)`` hops.
    """
    cid, u, v, lo, hi = _crossing(g, c)
    w = c.coverage_round[u] + 1 + c.coverage_round[v]
    lo, hi, w = _reduce_pairs(lo, hi, w)
    return QuotientGraph(c.cluster_count, lo, hi, w, True, cid, c.centers)


def quotient_diameter(q: QuotientGraph, workers: int = 1) -> int:
    """Exact diameter: bit-parallel BFS when unweighted, Dijkstra when weighted."""
    if q.cluster_count == 1:
        return 0
    if not q.weighted:
        ecc = eccentricities(q.to_graph(), workers=workers)
        if (ecc >= UNREACHABLE).any():
            raise DisconnectedQuotient("quotient graph is not connected")
        return int(ecc.max())
    mat = q.to_sparse()
    best = 0.0
    for start in range(0, q.cluster_count, _ROW_CHUNK):
        rows = np.arange(start, min(start + _ROW_CHUNK, q.cluster_count))
        d = dijkstra(mat, directed=False, indices=rows)
        if np.isinf(d).any():
            raise DisconnectedQuotient("quotient graph is not connected")
        best = max(best, float(d.max()))
    return int(round(best))


def apsp_quotient(q: QuotientGraph, cap: int = APSP_CAP) -> np.ndarray:
    """Dense all-pairs shortest paths over the quotient (UNREACHABLE where disconnected)."""
    if q.cluster_count > cap:
        raise TooLarge(f"{q.cluster_count} clusters exceed the APSP cap {cap}")
    d = dijkstra(q.to_sparse(), directed=False)
    out = np.full(d.shape, UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(d)
    out[finite] = np.rint(d[finite]).astype(np.int64)
    return out


def write_quotient(q: QuotientGraph, path) -> None:
    """Edge-list export; weighted quotients get a third column."""
    from .graph_io import write_pairs

    header = f"quotient n_c={q.cluster_count} m_c={q.edge_count}"
    write_pairs(path, q.a, q.b, q.weight if q.weighted else None, header)


def read_weighted_pairs(path):
    data = np.loadtxt(path, dtype=np.int64, comments="#", ndmin=2)
    return data[:, 0], data[:, 1], (data[:, 2] if data.shape[1] > 2 else None)
