import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from batchgrow.cli import main
from batchgrow.decomposition import Clustering
from batchgrow.graph import exact_diameter, log2n
from batchgrow.graph_io import append_chain, gen_mesh
from batchgrow.report import flatten, read_clustering

from conftest import check_partition


def run(tmp_path, capsys, *argv, out="out"):
    code = main(list(argv) + ["--out", str(tmp_path / out)])
    captured = capsys.readouterr()
    doc = json.loads(captured.out) if code == 0 else None
    return code, doc, captured.err


def strip_timing(doc):
    return [{k: v for k, v in run.items() if k != "wall_time"} for run in doc["runs"]]


@pytest.mark.parametrize("algo", ["cluster", "cluster2"])
def test_decompose_growth(tmp_path, capsys, algo):
    code, doc, _ = run(tmp_path, capsys, "decompose", "--gen", "mesh:32x32", "--algo", algo,
                       "--tau", "8", "--seed", "1")
    assert code == 0 and doc["schema"] == 1 and doc["command"] == "decompose"
    (rep,) = doc["runs"]
    bound = 12 * 8 * log2n(1024) ** (2 if algo == "cluster" else 4)
    assert rep["outputs"]["n_c"] <= bound
    assert rep["graph"] == {"n": 1024, "m": 1984, "source": "gen:mesh:32x32"}
    assert "growing_steps" in rep["ledger"]
    text = (tmp_path / "out" / "clustering.txt").read_text()
    assert text.startswith("# node center round\n")
    center, rounds = read_clustering(tmp_path / "out" / "clustering.txt")
    assert len(np.unique(center)) == rep["outputs"]["n_c"]
    assert rounds.max() == rep["outputs"]["max_radius"]


def test_decompose_mpx_valid(tmp_path, capsys):
    code, doc, _ = run(tmp_path, capsys, "decompose", "--algo", "mpx", "--beta", "5",
                       "--gen", "mesh:32x32", "--seed", "1")
    assert code == 0
    center, rounds = read_clustering(tmp_path / "out" / "clustering.txt")
    g = gen_mesh(32, 32)
    # rebuild parents from rounds to run the shared validity check
    parent = np.arange(g.n)
    for v in range(g.n):
        if rounds[v]:
            parent[v] = next(w for w in g.neighbors(v).tolist()
                             if center[w] == center[v] and rounds[w] == rounds[v] - 1)
    assert check_partition(g, Clustering.from_arrays(center, rounds, parent)) == []


def test_decompose_missing_file(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "decompose", "--edge-list", str(tmp_path / "nope.txt"))
    assert code == 2 and "ParseError" in err


def test_requires_input(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "decompose")
    assert code == 2 and "ParseError" in err


def test_diameter_exact(tmp_path, capsys):
    code, doc, _ = run(tmp_path, capsys, "diameter", "--gen", "mesh:32x32", "--tau", "8",
                       "--seed", "1", "--exact")
    out = doc["runs"][0]["outputs"]
    assert out["delta"] == 62
    assert out["delta_c"] <= 62 <= out["delta_dprime"] <= out["delta_prime"]
    assert "pilot" in doc["runs"][0]["ledger"]


def test_diameter_plain_cluster(tmp_path, capsys):
    code, doc, _ = run(tmp_path, capsys, "diameter", "--gen", "mesh:16x16", "--algo", "cluster", "--tau", "2")
    assert code == 0 and "pilot" not in doc["runs"][0]["ledger"]


def test_diameter_single_node(tmp_path, capsys):
    code, doc, _ = run(tmp_path, capsys, "diameter", "--gen", "path:1", "--exact")
    out = doc["runs"][0]["outputs"]
    assert code == 0
    assert out["delta_c"] == out["delta_dprime"] == out["delta_prime"] == out["delta"] == 0


def test_diameter_disconnected(tmp_path, capsys):
    p = tmp_path / "two_components.txt"
    p.write_text("0 1\n1 2\n2 0\n10 11\n11 12\n12 13\n")
    code, _, err = run(tmp_path, capsys, "diameter", "--edge-list", str(p))
    assert code == 2 and "DisconnectedGraph" in err
    code, doc, _ = run(tmp_path, capsys, "diameter", "--edge-list", str(p), "--largest-cc", "--exact")
    assert code == 0
    assert doc["runs"][0]["graph"]["n"] == 4 and doc["runs"][0]["outputs"]["delta"] == 3


def test_compare_mesh64(tmp_path, capsys):
    code, doc, _ = run(tmp_path, capsys, "compare", "--gen", "mesh:64x64", "--target", "300",
                       "--seeds", "0:10")
    assert code == 0
    runs = doc["runs"]
    for algo in ("cluster", "mpx"):
        rows = [r for r in runs if r["params"]["algo"] == algo]
        assert sorted(r["params"]["seed"] for r in rows) == list(range(10))
    for seed in range(10):
        pair = {r["params"]["algo"]: r["outputs"]["n_c"] for r in runs if r["params"]["seed"] == seed}
        assert 240 <= pair["cluster"] <= 360
        assert pair["mpx"] >= max(300, pair["cluster"])
    assert (tmp_path / "out" / "compare.png").stat().st_size > 0
    assert (tmp_path / "out" / "compare.csv").exists()


def test_compare_target_too_large(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "compare", "--gen", "mesh:4x4", "--target", "17")
    assert code == 2 and "TuningFailed" in err


def test_kcenter_baseline(tmp_path, capsys):
    code, doc, _ = run(tmp_path, capsys, "kcenter", "--gen", "mesh:32x32", "--k", "300",
                       "--seed", "1", "--baseline")
    out = doc["runs"][0]["outputs"]
    assert len(out["centers"]) == 300
    assert out["ratio"] == pytest.approx(out["radius"] / out["gonzalez_radius"])


def test_kcenter_k_above_n(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "kcenter", "--gen", "mesh:16x16", "--k", "300", "--baseline")
    assert code == 2 and "InfeasibleK" in err


def test_kcenter_k_below_components(tmp_path, capsys):
    p = tmp_path / "g.txt"
    p.write_text("0 1\n2 3\n4 5\n")
    code, _, err = run(tmp_path, capsys, "kcenter", "--edge-list", str(p), "--k", "2")
    assert code == 2 and "InfeasibleK" in err


def test_kcenter_k_equals_n(tmp_path, capsys):
    code, doc, _ = run(tmp_path, capsys, "kcenter", "--gen", "mesh:4x4", "--k", "16", "--baseline")
    out = doc["runs"][0]["outputs"]
    assert out["radius"] == 0 and out["ratio"] == 0.0


def test_tails(tmp_path, capsys):
    code, doc, _ = run(tmp_path, capsys, "tails", "--gen", "mesh:32x32", "--c", "1,2,4", "--seeds", "0:2")
    assert code == 0
    runs = doc["runs"]
    assert len(runs) == 2 * 4
    base = gen_mesh(32, 32)
    for seed in range(2):
        rows = sorted((r for r in runs if r["params"]["seed"] == seed), key=lambda r: r["params"]["c"])
        assert [r["params"]["c"] for r in rows] == [0, 1, 2, 4]
        assert [r["outputs"]["chain"] for r in rows] == [0, 62, 124, 248]
        deltas = []
        for r in rows:
            chain = r["outputs"]["chain"]
            g = append_chain(base, chain, seed) if chain else base
            delta = exact_diameter(g)
            out = r["outputs"]
            assert out["delta_c"] <= delta <= out["delta_dprime"]
            assert out["bfs_rounds"] <= delta <= out["bfs_bound"]
            deltas.append(delta)
        assert deltas == sorted(set(deltas))
        assert all("growing_steps" in r["ledger"] for r in rows)
    assert (tmp_path / "out" / "tails.png").stat().st_size > 0


@pytest.mark.parametrize("bad", ["0", "1,0", "-2", ""])
def test_tails_rejects_nonpositive_c(tmp_path, bad):
    with pytest.raises(SystemExit) as exc:
        main(["tails", "--gen", "mesh:4x4", "--c", bad, "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_no_plot(tmp_path, capsys):
    code, _, _ = run(tmp_path, capsys, "tails", "--gen", "mesh:8x8", "--c", "1", "--seeds", "0",
                     "--tau", "1", "--no-plot")
    assert code == 0 and not (tmp_path / "out" / "tails.png").exists()


def cast(cell, value):
    if isinstance(value, (list, bool)) or value is None:
        return json.loads(cell)
    return type(value)(cell)


@pytest.mark.parametrize("argv", [
    ["decompose", "--gen", "mesh:16x16", "--tau", "2"],
    ["diameter", "--gen", "mesh:16x16", "--tau", "2", "--exact"],
    ["kcenter", "--gen", "mesh:16x16", "--k", "20", "--baseline"],
    ["tails", "--gen", "mesh:8x8", "--c", "1,2", "--seeds", "0:2", "--tau", "1", "--no-plot"],
])
def test_csv_matches_json(tmp_path, capsys, argv):
    code, _, _ = run(tmp_path, capsys, *argv)
    cmd = argv[0]
    doc = json.loads((tmp_path / "out" / f"{cmd}.json").read_text())
    with open(tmp_path / "out" / f"{cmd}.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(doc["runs"])
    for run_, row in zip(doc["runs"], rows):
        flat = flatten(run_)
        assert set(flat) <= set(row)
        for key, value in flat.items():
            assert cast(row[key], value) == value, key


@pytest.mark.parametrize("argv", [
    ["decompose", "--gen", "mesh:32x32", "--algo", "cluster", "--tau", "2", "--seed", "4"],
    ["decompose", "--gen", "mesh:32x32", "--algo", "cluster2", "--tau", "2", "--seed", "4"],
    ["decompose", "--gen", "mesh:32x32", "--algo", "mpx", "--beta", "0.3", "--seed", "4"],
    ["diameter", "--gen", "expath:2048,32,4", "--tau", "4", "--seed", "2"],
    ["kcenter", "--gen", "mesh:32x32", "--k", "40", "--seed", "2"],
])
def test_reproducible_across_threads(tmp_path, capsys, argv):
    outs = []
    for i, threads in enumerate(("1", "4")):
        code, doc, _ = run(tmp_path, capsys, *argv, "--threads", threads, out=f"o{i}")
        assert code == 0
        outs.append(strip_timing(doc))
    assert outs[0] == outs[1]
    if argv[0] == "decompose":
        a = (tmp_path / "o0" / "clustering.txt").read_bytes()
        b = (tmp_path / "o1" / "clustering.txt").read_bytes()
        assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "batchgrow", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "decompose" in res.stdout
