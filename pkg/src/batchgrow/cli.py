"""Command-line entry point: decompose, diameter, compare, kcenter, tails."""

from __future__ import annotations

import argparse
import json
import logging
import os
import statistics
import sys
import time

from . import harness
from .decomposition import GrowthParams, cluster, cluster2, mpx
from .errors import BatchGrowError, DisconnectedGraph, ParseError
from .estimators import estimate_diameter, gonzalez, kcenter_approx
from .graph import EXACT_DIAMETER_CAP, Graph, connected_components, exact_diameter
from .graph_io import load_edge_list, parse_generator, restrict_largest_component
from .quotient import build_quotient
from .report import RunReport, json_default, document, write_clustering, write_reports

log = logging.getLogger("batchgrow")


def _load(args) -> tuple[Graph, str]:
    if args.gen:
        g, source = parse_generator(args.gen, args.seed), f"gen:{args.gen}"
    elif args.edge_list:
        g = load_edge_list(args.edge_list, symmetrize=not args.no_symmetrize)
        source = os.fspath(args.edge_list)
    else:
        raise ParseError("one of --gen or --edge-list is required")
    if args.largest_cc:
        g = restrict_largest_component(g)
    return g, source


def _graph_info(g: Graph, source: str) -> dict:
    return {"n": g.n, "m": g.m, "source": source}


def cmd_decompose(args) -> list[RunReport]:
    g, source = _load(args)
    t0 = time.perf_counter()
    ledger = {}
    if args.algo == "mpx":
        params = {"beta": args.beta, "seed": args.seed}
        c = mpx(g, args.beta, args.seed, args.threads)
        r = c.r_alg
    else:
        params = {"tau": args.tau, "seed": args.seed}
        gp = GrowthParams(tau=args.tau, seed=args.seed)
        if args.algo == "cluster":
            c, led = cluster(g, gp, args.threads)
            r = c.r_alg
        else:
            c, led, r = cluster2(g, gp, args.threads)
        ledger = led.to_dict()
    elapsed = time.perf_counter() - t0
    q = build_quotient(g, c)
    os.makedirs(args.out, exist_ok=True)
    write_clustering(os.path.join(args.out, "clustering.txt"), c)
    params["algo"] = args.algo
    outputs = {"n_c": q.cluster_count, "m_c": q.edge_count, "max_radius": r}
    return [RunReport("decompose", _graph_info(g, source), params, outputs, ledger, elapsed)]


def cmd_diameter(args) -> list[RunReport]:
    g, source = _load(args)
    _, h = connected_components(g)
    if h > 1:
        raise DisconnectedGraph(f"graph has {h} components; pass --largest-cc")
    t0 = time.perf_counter()
    est = estimate_diameter(g, args.tau, args.seed, use_cluster2=args.algo == "cluster2",
                            workers=args.threads)
    elapsed = time.perf_counter() - t0
    outputs = est.to_dict()
    if args.exact:
        outputs["delta"] = exact_diameter(g, max_nodes=EXACT_DIAMETER_CAP, workers=args.threads)
    params = {"tau": args.tau, "seed": args.seed, "algo": args.algo}
    return [RunReport("diameter", _graph_info(g, source), params, outputs, est.ledger.to_dict(), elapsed)]


def cmd_compare(args) -> list[RunReport]:
    g, source = _load(args)
    rows = harness.compare(g, args.target, args.seeds, workers=args.threads)
    if args.plot:
        from .plotting import plot_compare
        plot_compare(rows, os.path.join(args.out, "compare.png"))
    reports = []
    for row in rows:
        params = dict(row["params"], seed=row["seed"], algo=row["algo"], target=args.target)
        outputs = {"n_c": row["n_c"], "m_c": row["m_c"], "max_radius": row["radius"]}
        reports.append(RunReport("compare", _graph_info(g, source), params, outputs, row["ledger"],
                                 row["wall_time"]))
    return reports


def cmd_kcenter(args) -> list[RunReport]:
    g, source = _load(args)
    t0 = time.perf_counter()
    sol = kcenter_approx(g, args.k, args.seed, args.threads)
    elapsed = time.perf_counter() - t0
    outputs = {"radius": sol.radius, "method": sol.method, "centers": list(sol.centers)}
    if args.baseline:
        base = gonzalez(g, args.k, args.seed)
        outputs["gonzalez_radius"] = base.radius
        outputs["ratio"] = sol.radius / base.radius if base.radius else (0.0 if sol.radius == 0 else None)
    params = {"k": args.k, "seed": args.seed}
    return [RunReport("kcenter", _graph_info(g, source), params, outputs, {}, elapsed)]


def cmd_tails(args) -> list[RunReport]:
    g, source = _load(args)
    rows = harness.tails(g, args.c, args.tau, args.seeds, use_cluster2=args.algo == "cluster2",
                         workers=args.threads)
    if args.plot:
        from .plotting import plot_tails
        plot_tails(rows, os.path.join(args.out, "tails.png"))
    reports = []
    for row in rows:
        params = {"tau": args.tau, "seed": row["seed"], "c": row["c"], "algo": args.algo}
        outputs = {k: row[k] for k in ("n", "chain", "source", "bfs_rounds", "bfs_bound",
                                       "delta_c", "delta_dprime", "bfs_time")}
        ledger = {"growing_steps": row["growing_steps"]}
        reports.append(RunReport("tails", _graph_info(g, source), params, outputs, ledger,
                                 row["cluster_time"]))
    return reports


def _positive_ints(text: str) -> list[int]:
    values = [int(x) for x in text.split(",") if x]
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("expected a comma-separated list of positive integers")
    return values


def _seed_list(text: str) -> list[int]:
    if ":" in text:
        lo, hi = (int(x) for x in text.split(":"))
        return list(range(lo, hi))
    return [int(x) for x in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="batchgrow", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--gen", help="generator spec: mesh:RxC, expath:N,P,D, path:N, cycle:N, clique:N")
    src.add_argument("--edge-list", help="whitespace-separated edge list (.gz accepted)")
    common.add_argument("--no-symmetrize", action="store_true", help="keep only mutual pairs")
    common.add_argument("--largest-cc", action="store_true")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="worker threads; results do not depend on it")
    common.add_argument("--out", default="out", help="directory for reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common])
    p.add_argument("--algo", choices=("cluster", "cluster2", "mpx"), default="cluster")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.1)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("diameter", parents=[common])
    p.add_argument("--algo", choices=("cluster", "cluster2"), default="cluster2")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--exact", action="store_true", help=f"also compute the true diameter (n <= {EXACT_DIAMETER_CAP})")
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("compare", parents=[common])
    p.add_argument("--target", type=int, required=True, help="cluster-count target")
    p.add_argument("--seeds", type=_seed_list, default=list(range(10)), help="'0:10' or '1,2,3'")
    p.add_argument("--no-plot", dest="plot", action="store_false")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("kcenter", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--baseline", action="store_true", help="also run farthest-first traversal")
    p.set_defaults(func=cmd_kcenter)

    p = sub.add_parser("tails", parents=[common])
    p.add_argument("--c", type=_positive_ints, default=[1, 2, 4, 6, 8, 10])
    p.add_argument("--tau", type=float, default=8.0)
    p.add_argument("--algo", choices=("cluster", "cluster2"), default="cluster")
    p.add_argument("--seeds", type=_seed_list, default=list(range(5)))
    p.add_argument("--no-plot", dest="plot", action="store_false")
    p.set_defaults(func=cmd_tails)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        reports = args.func(args)
    except (BatchGrowError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    json_path, csv_path = write_reports(args.out, args.command, reports)
    log.info("wrote %s and %s", json_path, csv_path)
    if args.command in ("compare", "tails"):
        key = "max_radius" if args.command == "compare" else "bfs_rounds"
        vals = [r.outputs[key] for r in reports]
        log.info("%s median %s", key, statistics.median(vals))
    json.dump(document(args.command, reports), sys.stdout, sort_keys=True, default=json_default)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
