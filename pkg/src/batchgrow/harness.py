"""Experiment drivers behind the ``compare`` and ``tails`` commands."""

from __future__ import annotations

import math
import time

import numpy as np

from .decomposition import GrowthParams, cluster, mpx
from .errors import TuningFailed
from .estimators import estimate_diameter
from .graph import Graph, bfs_eccentricity, exact_diameter, EXACT_DIAMETER_CAP
from .graph_io import append_chain
from .quotient import build_quotient

TUNING_ROUNDS = 20
BETA_RANGE = (1e-4, 1e2)


def tune_tau(g: Graph, low: float, high: float, seed: int, workers: int = 1):
    """Log-scale bisection on tau in [1, n] until CLUSTER's cluster count lands in [low, high]."""
    lo, hi = 0.0, math.log(max(2, g.n))
    for i in range(TUNING_ROUNDS):
        tau = 1.0 if i == 0 else math.exp((lo + hi) / 2)
        c, ledger = cluster(g, GrowthParams(tau=tau, seed=seed), workers)
        if low <= c.cluster_count <= high:
            return tau, c, ledger
        if c.cluster_count < low:
            lo = math.log(tau)
        elif i == 0:
            break
        else:
            hi = math.log(tau)
    raise TuningFailed(f"no tau gives between {low:g} and {high:g} clusters (seed {seed})")


def tune_beta(g: Graph, low: float, high: float, seed: int):
    """Log-scale bisection on beta until MPX's cluster count lands in [low, high]."""
    lo, hi = (math.log(b) for b in BETA_RANGE)
    for _ in range(TUNING_ROUNDS):
        beta = math.exp((lo + hi) / 2)
        c = mpx(g, beta, seed)
        if low <= c.cluster_count <= high:
            return beta, c
        if c.cluster_count < low:
            lo = math.log(beta)
        else:
            hi = math.log(beta)
    raise TuningFailed(f"no beta gives between {low:g} and {high:g} clusters (seed {seed})")


def compare(g: Graph, target: int, seeds, tolerance: float = 0.2, workers: int = 1) -> list[dict]:
    """Paired CLUSTER / MPX runs at matched granularity, one pair per seed.

    CLUSTER is tuned into ``target * (1 +- tolerance)``. MPX is then tuned to at
    least as many clusters as both the target and CLUSTER's realized count, at
    most ``1 + tolerance`` times that, so MPX always gets the count advantage.
    """
    if target > g.n or target < 1:
        raise TuningFailed(f"target {target} outside [1, {g.n}]")
    rows = []
    for seed in seeds:
        t0 = time.perf_counter()
        tau, c, ledger = tune_tau(g, target * (1 - tolerance), target * (1 + tolerance), seed, workers)
        t1 = time.perf_counter()
        ref = max(target, c.cluster_count)
        beta, m = tune_beta(g, ref, ref * (1 + tolerance), seed)
        t2 = time.perf_counter()
        for algo, clustering, param, elapsed in (("cluster", c, {"tau": tau}, t1 - t0),
                                                 ("mpx", m, {"beta": beta}, t2 - t1)):
            q = build_quotient(g, clustering)
            rows.append({
                "algo": algo, "seed": seed, "params": param,
                "n_c": q.cluster_count, "m_c": q.edge_count, "radius": clustering.r_alg,
                "ledger": ledger.to_dict() if algo == "cluster" else {},
                "wall_time": elapsed,
            })
    return rows


def tails(g: Graph, cs, tau: int, seeds, use_cluster2: bool = False, workers: int = 1) -> list[dict]:
    """Append chains of c * diameter nodes and compare BFS rounds with growth steps.

    BFS rounds are the eccentricity of one seeded source drawn from the base
    graph, i.e. the depth of the single BFS behind the 2 * ecc upper bound.
    Each seed also gets a ``c = 0`` row for the unmodified graph.
    """
    cs = list(cs)
    if any(c <= 0 for c in cs):
        raise ValueError("chain factors must be positive")
    if g.n <= EXACT_DIAMETER_CAP:
        diameter = exact_diameter(g, workers=workers)
    else:
        diameter = bfs_eccentricity(g, 0)
    rows = []
    for seed in seeds:
        # Substream independent of the chain anchor drawn by append_chain(seed).
        source = int(np.random.default_rng([seed, 1]).integers(g.n))
        for c in [0] + cs:
            gc = g if c == 0 else append_chain(g, c * diameter, seed)
            t0 = time.perf_counter()
            ecc = bfs_eccentricity(gc, source)
            t1 = time.perf_counter()
            est = estimate_diameter(gc, tau, seed, use_cluster2, workers)
            t2 = time.perf_counter()
            rows.append({
                "c": c, "seed": seed, "n": gc.n, "chain": c * diameter, "source": source,
                "bfs_rounds": ecc, "bfs_bound": 2 * ecc,
                "growing_steps": est.ledger.total_steps,
                "delta_dprime": est.delta_dprime, "delta_c": est.delta_c,
                "bfs_time": t1 - t0, "cluster_time": t2 - t1,
            })
    return rows
