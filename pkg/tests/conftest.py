import functools

import networkx as nx
import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from batchgrow.decomposition import Clustering
from batchgrow.graph import Graph, bfs, exact_diameter
from batchgrow.graph_io import gen_cycle, gen_expander_plus_path, gen_mesh, gen_path


def two_triangles():
    return Graph.from_edges(6, [0, 1, 2, 3, 4, 5], [1, 2, 0, 4, 5, 3])


def star(leaves):
    return Graph.from_edges(leaves + 1, [0] * leaves, range(1, leaves + 1))


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    u, v = g.edges()
    h.add_edges_from(zip(u.tolist(), v.tolist()))
    return h


def hop_distances(g, sources):
    """Independent BFS oracle (scipy); -1 marks unreachable."""
    n = g.n
    mat = csr_matrix((np.ones(len(g.indices)), g.indices, g.indptr), shape=(n, n))
    d = shortest_path(mat, unweighted=True, directed=False, indices=np.asarray(sources))
    out = np.where(np.isinf(d), -1, d).astype(np.int64)
    return out


def check_partition(g, c):
    """Zero-tolerance validity check; returns a list of violation strings."""
    bad = []
    n = g.n
    if c.center.shape != (n,) or (c.center < 0).any() or (c.center >= n).any():
        return ["assignment not total"]
    if not (c.center[c.centers] == c.centers).all():
        bad.append("center not self-assigned")
    nodes = np.arange(n)
    non_center = nodes[c.center != nodes]
    if (c.coverage_round[c.centers] != 0).any():
        bad.append("center with nonzero round")
    for v in non_center.tolist():
        p = int(c.parent[v])
        if p not in set(g.neighbors(v).tolist()):
            bad.append(f"parent of {v} not adjacent")
        elif c.center[p] != c.center[v]:
            bad.append(f"parent of {v} in another cluster")
        elif c.coverage_round[p] != c.coverage_round[v] - 1:
            bad.append(f"round of {v} not parent+1")
    d = hop_distances(g, c.centers)
    row = np.searchsorted(c.centers, c.center)
    dist_to_center = d[row, nodes]
    if (dist_to_center < 0).any() or (c.coverage_round < dist_to_center).any():
        bad.append("coverage round below BFS distance")
    return bad


def bfs_tree_clustering(g, root=0):
    """Whole connected graph as one cluster grown by BFS from root."""
    d = bfs(g, root).dist
    parent = np.full(g.n, root)
    for v in range(g.n):
        if v != root:
            parent[v] = next(w for w in g.neighbors(v).tolist() if d[w] == d[v] - 1)
    return Clustering.from_arrays(np.full(g.n, root), d, parent)


@functools.lru_cache(maxsize=None)
def named_graph(name):
    if name == "mesh32":
        return gen_mesh(32, 32)
    if name == "mesh64":
        return gen_mesh(64, 64)
    if name == "expath":
        return gen_expander_plus_path(4096, 64, 4, seed=7)
    if name == "two_triangles":
        return two_triangles()
    if name == "P1000":
        return gen_path(1000)
    if name == "C1000":
        return gen_cycle(1000)
    raise KeyError(name)


@functools.lru_cache(maxsize=None)
def named_diameter(name):
    return exact_diameter(named_graph(name))


@pytest.fixture
def mesh32():
    return named_graph("mesh32")
