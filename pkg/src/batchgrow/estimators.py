"""Diameter bounds, the quotient distance oracle and k-center approximation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decomposition import Clustering, GrowthParams, RoundLedger, cluster, cluster2
from .errors import DisconnectedGraph, InfeasibleK
from .graph import UNREACHABLE, Graph, connected_components, log2n, multi_source_bfs
from .quotient import (APSP_CAP, QuotientGraph, apsp_quotient, build_quotient,
                       build_weighted_quotient, quotient_diameter)


@dataclass(frozen=True)
class DiameterEstimate:
    delta_c: int
    delta_c_weighted: int
    r_alg2: int
    delta_prime: int
    delta_dprime: int
    ledger: RoundLedger
    quotient_sizes: tuple

    def to_dict(self) -> dict:
        return {
            "delta_c": self.delta_c,
            "delta_c_weighted": self.delta_c_weighted,
            "r_alg2": self.r_alg2,
            "delta_prime": self.delta_prime,
            "delta_dprime": self.delta_dprime,
            "n_c": self.quotient_sizes[0],
            "m_c": self.quotient_sizes[1],
        }


def diameter_bounds(delta_c: int, delta_c_weighted: int, radius: int) -> tuple[int, int]:
    """(loose, tight) upper bounds: 2r(D_C + 1) + D_C and 2r + D'_C."""
    return 2 * radius * (delta_c + 1) + delta_c, 2 * radius + delta_c_weighted


def estimate_from_clustering(g: Graph, c: Clustering, ledger: RoundLedger | None = None,
                             radius: int | None = None, workers: int = 1) -> DiameterEstimate:
    radius = c.r_alg if radius is None else radius
    q = build_quotient(g, c)
    qw = build_weighted_quotient(g, c)
    dc = quotient_diameter(q, workers)
    dcw = quotient_diameter(qw, workers)
    loose, tight = diameter_bounds(dc, dcw, radius)
    return DiameterEstimate(dc, dcw, radius, loose, tight, ledger or RoundLedger(),
                            (q.cluster_count, q.edge_count))


def _require_connected(g: Graph) -> None:
    _, h = connected_components(g)
    if h > 1:
        raise DisconnectedGraph(f"graph has {h} connected components")


def decompose_for_diameter(g: Graph, tau: int, seed: int, use_cluster2: bool = True, workers: int = 1):
    params = GrowthParams(tau=tau, seed=seed)
    if use_cluster2:
        return cluster2(g, params, workers)
    c, ledger = cluster(g, params, workers)
    # Plain CLUSTER mode: the realized radius of this clustering enters the bounds.
    return c, ledger, c.r_alg


def estimate_diameter(g: Graph, tau: int, seed: int, use_cluster2: bool = True,
                      workers: int = 1) -> DiameterEstimate:
    """Lower bound D_C and upper bounds D'' <= D' on the diameter of a connected graph."""
    _require_connected(g)
    c, ledger, radius = decompose_for_diameter(g, tau, seed, use_cluster2, workers)
    return estimate_from_clustering(g, c, ledger, radius, workers)


@dataclass(frozen=True, eq=False)
class DistanceOracle:
    clustering: Clustering
    quotient: QuotientGraph
    apsp: np.ndarray
    r_alg2: int

    def query(self, u: int, v: int) -> int:
        if u == v:
            return 0
        c = self.clustering
        cu, cv = self.quotient.cluster_of[u], self.quotient.cluster_of[v]
        if cu == cv:
            return 2 * self.r_alg2
        return int(c.coverage_round[u] + self.apsp[cu, cv] + c.coverage_round[v])

    def query_many(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        cu, cv = self.quotient.cluster_of[us], self.quotient.cluster_of[vs]
        rounds = self.clustering.coverage_round
        out = rounds[us] + self.apsp[cu, cv] + rounds[vs]
        out[cu == cv] = 2 * self.r_alg2
        out[us == vs] = 0
        return out


def oracle_from_clustering(g: Graph, c: Clustering, radius: int | None = None,
                           cap: int = APSP_CAP) -> DistanceOracle:
    qw = build_weighted_quotient(g, c)
    return DistanceOracle(c, qw, apsp_quotient(qw, cap), c.r_alg if radius is None else radius)


def oracle_build(g: Graph, tau: int, seed: int, use_cluster2: bool = True, workers: int = 1,
                 cap: int = APSP_CAP) -> DistanceOracle:
    c, _, radius = decompose_for_diameter(g, tau, seed, use_cluster2, workers)
    return oracle_from_clustering(g, c, radius, cap)


def oracle_query(state: DistanceOracle, u: int, v: int) -> int:
    return state.query(u, v)


@dataclass(frozen=True)
class KCenterSolution:
    centers: tuple
    radius: int
    method: str


@dataclass(frozen=True, eq=False)
class MergedClusters:
    """``group[i]`` is the merged cluster of quotient node i; ``centers[j]`` its kept center."""

    group: np.ndarray
    centers: np.ndarray

    @property
    def count(self) -> int:
        return len(self.centers)


def _spanning_forest(qg: Graph):
    # BFS forest rooted at each component's lowest id; returns parents and BFS order.
    parent = np.full(qg.n, -1, dtype=np.int64)
    seen = np.zeros(qg.n, dtype=bool)
    order = []
    for root in range(qg.n):
        if seen[root]:
            continue
        seen[root] = True
        layer = [root]
        while layer:
            order.extend(layer)
            nxt = []
            for u in layer:
                for w in qg.neighbors(u).tolist():
                    if not seen[w]:
                        seen[w] = True
                        parent[w] = u
                        nxt.append(w)
            layer = nxt
    return parent, np.array(order, dtype=np.int64)


def _pieces(parent, order, top):
    piece = np.empty(len(parent), dtype=np.int64)
    for v in order.tolist():
        piece[v] = v if top[v] else piece[parent[v]]
    return piece


def merge_clusters(q: QuotientGraph, k: int) -> MergedClusters:
    """Cut a spanning forest of the quotient into exactly min(k, n_C) connected pieces.

    Post-order accumulation closes a piece once it reaches ceil(n_C / k)
    quotient nodes. Some trees (stars, for instance) cannot meet that size and
    the count at once, so the count is then repaired: surplus pieces fold into
    their parent piece (smallest first), missing ones are split off the largest
    piece at its most balanced node. Each piece keeps its lowest-id center.
    """
    n_c = q.cluster_count
    qg = q.to_graph()
    _, h = connected_components(qg)
    if k < h:
        raise InfeasibleK(f"k={k} is below the {h} components of the quotient")
    k = min(k, n_c)
    parent, order = _spanning_forest(qg)
    size = math.ceil(n_c / k)
    top = np.zeros(n_c, dtype=bool)
    residual = np.ones(n_c, dtype=np.int64)
    for v in order[::-1].tolist():
        if parent[v] < 0 or residual[v] >= size:
            top[v] = True
        else:
            residual[parent[v]] += residual[v]
    piece = _pieces(parent, order, top)

    while top.sum() > k:
        counts = np.bincount(piece, minlength=n_c)
        movable = np.flatnonzero(top & (parent >= 0))
        victim = movable[np.lexsort((movable, counts[movable]))[0]]
        top[victim] = False
        piece = _pieces(parent, order, top)

    while top.sum() < k:
        counts = np.bincount(piece, minlength=n_c)
        target = int(np.argmax(counts))
        members = piece == target
        sub = members.astype(np.int64)
        for v in order[::-1].tolist():
            if members[v] and not top[v]:
                sub[parent[v]] += sub[v]
        cand = np.flatnonzero(members & ~top)
        balance = np.minimum(sub[cand], counts[target] - sub[cand])
        top[cand[np.lexsort((cand, -balance))[0]]] = True
        piece = _pieces(parent, order, top)

    tops = np.flatnonzero(top)
    group = np.searchsorted(tops, piece)
    centers = np.full(len(tops), np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(centers, group, q.centers)
    return MergedClusters(group, centers)


def _farthest_first(g: Graph, centers: list, k: int) -> list:
    # Add the node farthest from the current centers (lowest id on ties) until k.
    chosen = list(centers)
    is_center = np.zeros(g.n, dtype=bool)
    is_center[chosen] = True
    dist = multi_source_bfs(g, chosen) if chosen else np.full(g.n, UNREACHABLE, dtype=np.int64)
    while len(chosen) < k:
        masked = np.where(is_center, -1, dist)
        v = int(np.argmax(masked))
        chosen.append(v)
        is_center[v] = True
        dist = np.minimum(dist, multi_source_bfs(g, [v]))
    return chosen


def _radius(g: Graph, centers) -> int:
    return int(multi_source_bfs(g, centers).max())


def kcenter_approx(g: Graph, k: int, seed: int, workers: int = 1) -> KCenterSolution:
    """k centers from CLUSTER, merged over a quotient spanning forest when too many.

    With h components: if k >= h log2^2 n run CLUSTER with tau = ceil(k / log2^2 n),
    otherwise run it with tau = h and merge down to k.
    """
    n = g.n
    _, h = connected_components(g)
    if k < h:
        raise InfeasibleK(f"k={k} is below the component count {h}")
    if k > n:
        raise InfeasibleK(f"k={k} exceeds the node count {n}")
    sq = log2n(n) ** 2
    tau = max(1, math.ceil(k / sq)) if k >= sq * h else h
    c, _ = cluster(g, GrowthParams(tau=tau, seed=seed), workers)
    if c.cluster_count <= k:
        method = "direct" if c.cluster_count == k else "padded"
        centers = _farthest_first(g, c.centers.tolist(), k)
    else:
        merged = merge_clusters(build_quotient(g, c), k)
        method = "merged"
        centers = merged.centers.tolist()
    return KCenterSolution(tuple(sorted(centers)), _radius(g, centers), method)


def gonzalez(g: Graph, k: int, seed: int) -> KCenterSolution:
    """Farthest-first traversal from a seeded random first center (2-approximation)."""
    if not 1 <= k <= g.n:
        raise InfeasibleK(f"k={k} outside [1, {g.n}]")
    first = int(np.random.default_rng(seed).integers(g.n))
    centers = _farthest_first(g, [first], k)
    r = _radius(g, centers)
    if r >= UNREACHABLE:
        raise DisconnectedGraph("gonzalez needs a connected graph")
    return KCenterSolution(tuple(sorted(centers)), r, "gonzalez")
