"""Run reports: one JSON document and one CSV table per command invocation."""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .decomposition import Clustering

SCHEMA_VERSION = 1
TIMING_FIELDS = ("wall_time",)


@dataclass
class RunReport:
    command: str
    graph: dict
    params: dict
    outputs: dict
    ledger: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "graph": self.graph,
            "params": self.params,
            "outputs": self.outputs,
            "ledger": self.ledger,
            "wall_time": self.wall_time,
        }


def flatten(d: dict, prefix: str = "") -> dict:
    """Dotted keys; lists are kept whole (serialized as JSON in CSV cells)."""
    out = {}
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(flatten(value, name + "."))
        else:
            out[name] = value
    return out


def _cell(value: Any) -> str:
    if isinstance(value, (list, tuple, bool)) or value is None:
        return json.dumps(value)
    return str(value)


def document(command: str, reports: list[RunReport]) -> dict:
    return {"schema": SCHEMA_VERSION, "command": command, "runs": [r.to_dict() for r in reports]}


def write_reports(out_dir, command: str, reports: list[RunReport]) -> tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, f"{command}.json")
    csv_path = os.path.join(out_dir, f"{command}.csv")
    with open(json_path, "w") as fh:
        json.dump(document(command, reports), fh, indent=2, sort_keys=True, default=json_default)
        fh.write("\n")
    rows = [flatten(r.to_dict()) for r in reports]
    columns = []
    for row in rows:
        columns.extend(c for c in row if c not in columns)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) if c in row else "" for c in columns])
    return json_path, csv_path


def json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_clustering(path, c: Clustering) -> None:
    """``# node center round`` header, then one triple per line."""
    with open(path, "w") as fh:
        fh.write("# node center round\n")
        for node, (ctr, rnd) in enumerate(zip(c.center.tolist(), c.coverage_round.tolist())):
            fh.write(f"{node} {ctr} {rnd}\n")


def read_clustering(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, dtype=np.int64, comments="#", ndmin=2)
    order = np.argsort(data[:, 0])
    return data[order, 1], data[order, 2]
