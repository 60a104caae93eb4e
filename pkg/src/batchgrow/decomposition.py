"""Batch-activated center growing (CLUSTER, CLUSTER2) and the MPX baseline.

All three decompositions share one representation: every node records the
center that claimed it, the growth step at which it was claimed and the
neighbour it was claimed through. Those three arrays are a certificate that
each cluster is connected and that ``coverage_round`` bounds the hop distance
to the center.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import StalledDisconnected
from .graph import Graph, frontier_edges, log2n

REDRAW_BUDGET = 64
# Below this many candidate edges a step is not worth splitting across threads.
PARALLEL_MIN_EDGES = 4096


@dataclass(frozen=True)
class GrowthParams:
    """Batch-size parameter tau (real, >= 1), seed and contested-node policy."""

    tau: float = 1
    seed: int = 0
    tie_break: str = "min-priority"

    def __post_init__(self):
        if not self.tau >= 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")
        if self.tie_break != "min-priority":
            raise ValueError(f"unknown tie_break policy {self.tie_break!r}")


@dataclass
class BatchRecord:
    iteration: int
    uncovered_before: int
    centers_drawn: int
    steps: int


@dataclass
class RoundLedger:
    """Synchronous growth steps spent, batch by batch."""

    batches: list = field(default_factory=list)
    stalls: int = 0
    pilot: Optional["RoundLedger"] = None
    pilot_radius: Optional[int] = None

    @property
    def growing_steps(self) -> int:
        return sum(b.steps for b in self.batches)

    @property
    def total_steps(self) -> int:
        """Steps including a pilot run (CLUSTER2 runs CLUSTER first)."""
        return self.growing_steps + (self.pilot.total_steps if self.pilot else 0)

    def to_dict(self) -> dict:
        out = {
            "growing_steps": self.growing_steps,
            "total_steps": self.total_steps,
            "stalls": self.stalls,
            "batches": [[b.iteration, b.uncovered_before, b.centers_drawn, b.steps] for b in self.batches],
        }
        if self.pilot is not None:
            out["pilot"] = self.pilot.to_dict()
            out["pilot_radius"] = self.pilot_radius
        return out


@dataclass(frozen=True, eq=False)
class Clustering:
    """Per-node assignment plus per-center summaries (aligned with ``centers``)."""

    center: np.ndarray
    coverage_round: np.ndarray
    parent: np.ndarray
    centers: np.ndarray
    batch: np.ndarray
    cluster_radius: np.ndarray

    @property
    def n(self) -> int:
        return len(self.center)

    @property
    def cluster_count(self) -> int:
        return len(self.centers)

    @property
    def r_alg(self) -> int:
        return int(self.coverage_round.max()) if self.n else 0

    def cluster_index(self) -> np.ndarray:
        """Per-node dense cluster id (position of its center in ``centers``)."""
        return np.searchsorted(self.centers, self.center)

    @classmethod
    def from_arrays(cls, center, coverage_round, parent, batch_of_node=None) -> "Clustering":
        center = np.asarray(center, dtype=np.int64)
        coverage_round = np.asarray(coverage_round, dtype=np.int64)
        parent = np.asarray(parent, dtype=np.int64)
        centers = np.flatnonzero(center == np.arange(len(center)))
        radius = np.zeros(len(center), dtype=np.int64)
        np.maximum.at(radius, center, coverage_round)
        if batch_of_node is None:
            batch = np.zeros(len(centers), dtype=np.int64)
        else:
            batch = np.asarray(batch_of_node, dtype=np.int64)[centers]
        return cls(center, coverage_round, parent, centers, batch, radius[centers])

    @classmethod
    def singletons(cls, n: int) -> "Clustering":
        ids = np.arange(n, dtype=np.int64)
        return cls.from_arrays(ids, np.zeros(n, dtype=np.int64), ids)


class GrowthState:
    """Mutable partial clustering driven by :func:`grow_step`."""

    def __init__(self, n: int):
        self.center = np.full(n, -1, dtype=np.int64)
        self.coverage_round = np.zeros(n, dtype=np.int64)
        self.parent = np.full(n, -1, dtype=np.int64)
        self.priority = np.zeros(n, dtype=np.int64)
        self.batch = np.full(n, -1, dtype=np.int64)
        self.frontier = np.empty(0, dtype=np.int64)
        self.uncovered = n
        self.active = 0

    def uncovered_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.center < 0)

    def activate(self, nodes, batch: int, priorities) -> None:
        nodes = np.asarray(nodes, dtype=np.int64)
        if nodes.size == 0:
            return
        if (self.center[nodes] >= 0).any():
            raise ValueError("cannot activate an already covered node")
        self.center[nodes] = nodes
        self.coverage_round[nodes] = 0
        self.parent[nodes] = nodes
        self.priority[nodes] = priorities
        self.batch[nodes] = batch
        self.frontier = np.union1d(self.frontier, nodes)
        self.uncovered -= nodes.size
        self.active += nodes.size

    def to_clustering(self) -> Clustering:
        if self.uncovered:
            raise ValueError(f"{self.uncovered} nodes still uncovered")
        return Clustering.from_arrays(self.center, self.coverage_round, self.parent, self.batch)


def _pick_claims(prio, ctr, src, dst):
    # Winner per contested node: smallest (priority, center, claimant node).
    order = np.lexsort((src, ctr, prio, dst))
    dst = dst[order]
    first = np.ones(dst.size, dtype=bool)
    first[1:] = dst[1:] != dst[:-1]
    return prio[order][first], ctr[order][first], src[order][first], dst[first]


def grow_step(g: Graph, state: GrowthState, workers: int = 1) -> int:
    """Expand every cluster frontier by one hop; returns the number of nodes claimed.

    A node reachable from several clusters goes to the claimant whose center
    has the lowest priority, so the outcome does not depend on ``workers``.
    """
    if state.frontier.size == 0:
        return 0
    src, dst = frontier_edges(g, state.frontier)
    open_ = state.center[dst] < 0
    src, dst = src[open_], dst[open_]
    if dst.size == 0:
        state.frontier = dst
        return 0
    ctr = state.center[src]
    prio = state.priority[ctr]
    if workers > 1 and dst.size >= PARALLEL_MIN_EDGES:
        bounds = np.linspace(0, dst.size, workers + 1).astype(np.int64)
        parts = [(prio[a:b], ctr[a:b], src[a:b], dst[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            local = list(pool.map(lambda p: _pick_claims(*p), parts))
        prio, ctr, src, dst = (np.concatenate(cols) for cols in zip(*local))
    _, ctr, src, dst = _pick_claims(prio, ctr, src, dst)
    state.center[dst] = ctr
    state.coverage_round[dst] = state.coverage_round[src] + 1
    state.parent[dst] = src
    state.frontier = dst
    state.uncovered -= dst.size
    return int(dst.size)


def _priorities(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.integers(0, np.iinfo(np.int64).max, size=count, dtype=np.int64)


def _draw(rng: np.random.Generator, state: GrowthState, p: float) -> np.ndarray:
    candidates = state.uncovered_nodes()
    return candidates[rng.random(candidates.size) < p]


def cluster(g: Graph, params: GrowthParams, workers: int = 1, seed_seq=None) -> tuple[Clustering, RoundLedger]:
    """CLUSTER(tau): activate Bernoulli batches of centers, grow until half the rest is covered.

    While at least ``8 tau log2 n`` nodes are uncovered, each uncovered node
    becomes a center with probability ``4 tau log2 n / uncovered``; then all
    clusters grow in lockstep until the uncovered count has at least halved.
    Leftover nodes become singleton clusters.

    An empty first batch is redrawn, and a growth step that claims nothing
    before the halving target (uncovered nodes in components holding no
    cluster) triggers a fresh draw. Both count as stalls; more than
    ``REDRAW_BUDGET`` of them raises :class:`StalledDisconnected`.
    """
    n = g.n
    rng = np.random.default_rng(seed_seq if seed_seq is not None else params.seed)
    log_n = log2n(n)
    threshold = 8 * params.tau * log_n
    state = GrowthState(n)
    ledger = RoundLedger()
    iteration = 0

    def redraw(batch):
        ledger.stalls += 1
        if ledger.stalls > REDRAW_BUDGET:
            raise StalledDisconnected(
                f"{state.uncovered} nodes unreachable from any cluster after {REDRAW_BUDGET} redraws")
        p = min(1.0, 4 * params.tau * log_n / state.uncovered)
        drawn = _draw(rng, state, p)
        state.activate(drawn, batch, _priorities(rng, drawn.size))
        return drawn.size

    # n == 1 gives log2 n == 0, so the guard alone would never fail.
    while state.uncovered >= threshold and state.uncovered > 0 and n > 1:
        before = state.uncovered
        p = min(1.0, 4 * params.tau * log_n / before)
        drawn = _draw(rng, state, p)
        if drawn.size == 0 and state.active == 0:
            redraw_needed = True
            while redraw_needed:
                drawn_count = redraw(iteration)
                redraw_needed = drawn_count == 0
            drawn_total = state.active
        else:
            state.activate(drawn, iteration, _priorities(rng, drawn.size))
            drawn_total = drawn.size
        steps = 0
        while 2 * state.uncovered > before:
            claimed = grow_step(g, state, workers)
            if claimed:
                steps += 1
            else:
                drawn_total += redraw(iteration)
        ledger.batches.append(BatchRecord(iteration, before, int(drawn_total), steps))
        iteration += 1

    rest = state.uncovered_nodes()
    state.activate(rest, iteration, _priorities(rng, rest.size))
    return state.to_clustering(), ledger


def cluster2(g: Graph, params: GrowthParams, workers: int = 1) -> tuple[Clustering, RoundLedger, int]:
    """CLUSTER2(tau): fixed-length growth phases with doubling center probability.

    A pilot CLUSTER run supplies R_ALG (its clustering is discarded). Then for
    ``i = 1..ceil(log2 n)`` uncovered nodes become centers with probability
    ``min(1, 2^i / n)`` and all clusters grow for ``max(1, 2 R_ALG)`` steps.
    Pilot and main loop draw from independent substreams of ``params.seed``.
    """
    n = g.n
    pilot_seq, main_seq = np.random.SeedSequence(params.seed).spawn(2)
    pilot, pilot_ledger = cluster(g, params, workers, seed_seq=pilot_seq)
    r_pilot = pilot.r_alg
    steps_per_phase = max(1, 2 * r_pilot)
    rng = np.random.default_rng(main_seq)
    state = GrowthState(n)
    ledger = RoundLedger(pilot=pilot_ledger, pilot_radius=r_pilot)
    phases = max(1, math.ceil(log2n(n)))
    for i in range(1, phases + 1):
        before = state.uncovered
        if before == 0:
            break
        p = min(1.0, 2.0**i / n)
        drawn = _draw(rng, state, p)
        state.activate(drawn, i, _priorities(rng, drawn.size))
        steps = 0
        # Steps after the frontier empties are no-ops and are not counted.
        while steps < steps_per_phase and state.uncovered:
            if grow_step(g, state, workers) == 0:
                break
            steps += 1
        ledger.batches.append(BatchRecord(i, before, int(drawn.size), steps))
    clustering = state.to_clustering()
    r_alg2 = clustering.r_alg
    assert r_alg2 <= cluster2_radius_bound(r_pilot, n), (r_alg2, r_pilot, n)
    return clustering, ledger, r_alg2


def cluster2_radius_bound(r_pilot: int, n: int) -> float:
    """Radius cap for CLUSTER2: 2 R_ALG log2 n, with the one-step floor when R_ALG = 0."""
    return max(1, 2 * r_pilot) * log2n(n)


def exponential_shifts(n: int, beta: float, seed: int) -> np.ndarray:
    """delta = -ln(U) / beta with U uniform on (0, 1]."""
    u = 1.0 - np.random.default_rng(seed).random(n)
    return -np.log(u) / beta


def mpx(g: Graph, beta: float, seed: int, workers: int = 1) -> Clustering:
    """Exponential-shift decomposition: node u joins argmin_v dist(u, v) - delta_v.

    Implemented as ball growing over real-valued keys in one priority queue,
    ties broken by center id. The queue is inherently sequential, so
    ``workers`` is accepted for interface symmetry and ignored.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    n = g.n
    delta = exponential_shifts(n, beta, seed)
    center = np.full(n, -1, dtype=np.int64)
    rounds = np.zeros(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    heap = [(-float(delta[v]), v, v, v, 0) for v in range(n)]
    heapq.heapify(heap)
    indptr, indices = g.indptr, g.indices
    while heap:
        _, c, u, par, hops = heapq.heappop(heap)
        if center[u] >= 0:
            continue
        center[u], rounds[u], parent[u] = c, hops, par
        nxt = hops + 1
        key = float(nxt) - float(delta[c])
        for w in indices[indptr[u]:indptr[u + 1]].tolist():
            if center[w] < 0:
                heapq.heappush(heap, (key, c, w, u, nxt))
    return Clustering.from_arrays(center, rounds, parent)
