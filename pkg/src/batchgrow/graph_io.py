"""Edge-list ingestion/export and synthetic benchmark generators."""

from __future__ import annotations

import gzip
import os
from typing import Optional

import numpy as np

from .errors import EmptyGraph, GenerationFailed, ParseError
from .graph import Graph, connected_components

MAX_CYCLE_RETRIES = 1000


def _open_text(path):
    path = os.fspath(path)
    if path.endswith(".gz"):
        return gzip.open(path, "rt")
    return open(path, "r")


def _parse_pairs(lines):
    us, vs = [], []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative node id in {line!r}", lineno)
        us.append(u)
        vs.append(v)
    return np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64)


def load_edge_list(path, symmetrize: bool = True, largest_cc: bool = False) -> Graph:
    """Read a SNAP-style whitespace-separated edge list.

    With ``symmetrize`` every listed pair becomes an undirected edge. Without it
    only mutual pairs (both ``u v`` and ``v u`` present) are kept, which is the
    strict reading of a directed file as an undirected graph. External ids are
    remapped to ``0..n-1`` in increasing order; the original ids are kept in
    ``Graph.labels``.
    """
    try:
        with _open_text(path) as fh:
            u, v = _parse_pairs(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {os.fspath(path)}: {exc.strerror or exc}") from None
    if u.size == 0:
        raise EmptyGraph(f"no edges in {os.fspath(path)}")
    if not symmetrize:
        key = set(zip(u.tolist(), v.tolist()))
        mutual = np.array([(a, b) in key and (b, a) in key for a, b in zip(u.tolist(), v.tolist())])
        u, v = u[mutual], v[mutual]
    keep = u != v
    u, v = u[keep], v[keep]
    if u.size == 0:
        raise EmptyGraph(f"no usable edges in {os.fspath(path)}")
    labels, dense = np.unique(np.concatenate([u, v]), return_inverse=True)
    g = Graph.from_edges(len(labels), dense[:len(u)], dense[len(u):], labels=labels)
    if largest_cc:
        g = restrict_largest_component(g)
    return g


def restrict_largest_component(g: Graph) -> Graph:
    comp, h = connected_components(g)
    if h == 1:
        return g
    sizes = np.bincount(comp)
    return g.subgraph(np.flatnonzero(comp == int(np.argmax(sizes))))


def write_edge_list(g: Graph, path, weights: Optional[np.ndarray] = None, header: Optional[str] = None):
    """Write each edge once as ``u v`` (original labels when present)."""
    u, v = g.edges()
    if g.labels is not None:
        u, v = g.labels[u], g.labels[v]
    write_pairs(path, u, v, weights, header)


def write_pairs(path, u, v, weights=None, header=None):
    opener = gzip.open if os.fspath(path).endswith(".gz") else open
    with opener(path, "wt") as fh:
        if header:
            fh.write(f"# {header}\n")
        if weights is None:
            for a, b in zip(np.asarray(u).tolist(), np.asarray(v).tolist()):
                fh.write(f"{a} {b}\n")
        else:
            for a, b, w in zip(np.asarray(u).tolist(), np.asarray(v).tolist(), np.asarray(weights).tolist()):
                fh.write(f"{a} {b} {w}\n")


def gen_mesh(rows: int, cols: int) -> Graph:
    """rows x cols grid; node (i, j) has id i*cols + j."""
    if rows < 1 or cols < 1:
        raise ValueError("mesh dimensions must be >= 1")
    ids = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
    u = np.concatenate([ids[:, :-1].ravel(), ids[:-1, :].ravel()])
    v = np.concatenate([ids[:, 1:].ravel(), ids[1:, :].ravel()])
    return Graph.from_edges(rows * cols, u, v)


def gen_path(n: int) -> Graph:
    return gen_mesh(1, n)


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 nodes")
    u = np.arange(n)
    return Graph.from_edges(n, u, (u + 1) % n)


def gen_clique(n: int) -> Graph:
    u, v = np.triu_indices(n, k=1)
    return Graph.from_edges(n, u, v)


def _pair_keys(u, v, n):
    return np.minimum(u, v) * n + np.maximum(u, v)


def _random_expander(size: int, degree: int, rng: np.random.Generator):
    # Union of degree//2 Hamiltonian cycles (+ a perfect matching for odd
    # degree); each new layer is redrawn until it shares no edge with earlier ones.
    used = np.empty(0, dtype=np.int64)
    us, vs = [], []
    layers = [("cycle", i) for i in range(degree // 2)]
    if degree % 2:
        layers.append(("matching", 0))
    for kind, _ in layers:
        for _attempt in range(MAX_CYCLE_RETRIES):
            perm = rng.permutation(size)
            if kind == "cycle":
                u, v = perm, np.roll(perm, -1)
            else:
                u, v = perm[0::2], perm[1::2]
            keys = _pair_keys(u, v, size)
            if np.unique(keys).size == keys.size and not np.isin(keys, used).any():
                break
        else:
            raise GenerationFailed(f"could not draw a {degree}-regular layer on {size} nodes")
        used = np.concatenate([used, keys])
        us.append(u)
        vs.append(v)
    return np.concatenate(us), np.concatenate(vs)


def gen_expander_plus_path(n_total: int, path_len: int, degree: int, seed: int) -> Graph:
    """Random regular expander on n_total - path_len nodes with a pendant path.

    The path occupies ids ``size..n_total-1`` and hangs off a seeded random
    expander node. ``degree == size - 1`` yields a clique instead.
    """
    size = n_total - path_len
    if path_len < 0 or size < 1:
        raise ValueError("need n_total > path_len >= 0")
    if degree < 3 or (degree * size) % 2:
        raise ValueError("degree must be >= 3 with degree * (n_total - path_len) even")
    if degree > size - 1:
        raise ValueError("degree exceeds expander size - 1")
    rng = np.random.default_rng(seed)
    if degree == size - 1:
        u, v = np.triu_indices(size, k=1)
    else:
        u, v = _random_expander(size, degree, rng)
    if path_len:
        anchor = int(rng.integers(size))
        pu = np.concatenate([[anchor], np.arange(size, n_total - 1)])
        pv = np.arange(size, n_total)
        u, v = np.concatenate([u, pu]), np.concatenate([v, pv])
    return Graph.from_edges(n_total, u, v)


def append_chain(g: Graph, length: int, seed: int) -> Graph:
    """Hang a path of ``length`` new nodes off one seeded random node of ``g``."""
    if length < 1:
        raise ValueError("chain length must be >= 1")
    anchor = int(np.random.default_rng(seed).integers(g.n))
    u, v = g.edges()
    new = np.arange(g.n, g.n + length)
    cu = np.concatenate([[anchor], new[:-1]])
    labels = None
    if g.labels is not None:
        extra = np.arange(length) + int(g.labels.max()) + 1
        labels = np.concatenate([g.labels, extra])
    return Graph.from_edges(g.n + length, np.concatenate([u, cu]), np.concatenate([v, new]), labels=labels)


def parse_generator(spec: str, seed: int = 0) -> Graph:
    """Inline generator specs: ``mesh:RxC``, ``expath:N,P,D``, ``path:N``, ``cycle:N``, ``clique:N``."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "mesh":
            r, c = arg.lower().split("x")
            return gen_mesh(int(r), int(c))
        if kind == "expath":
            n_total, path_len, degree = (int(x) for x in arg.split(","))
            return gen_expander_plus_path(n_total, path_len, degree, seed)
        if kind == "path":
            return gen_path(int(arg))
        if kind == "cycle":
            return gen_cycle(int(arg))
        if kind == "clique":
            return gen_clique(int(arg))
    except ValueError as exc:
        raise ParseError(f"bad generator spec {spec!r}: {exc}") from None
    raise ParseError(f"unknown generator {kind!r}")
