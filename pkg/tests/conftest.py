"""Shared oracles, graph generators, and the test corpus.

Oracles here are deliberately independent of the package internals:
Floyd-Warshall for distances, numpy's eigensolver for spectra, Prufer
decoding for exhaustive tree enumeration.
"""

from __future__ import annotations

import heapq
import itertools
import random

import numpy as np
import pytest

from qegraph import Graph, OrientedTree, graph_from_uri, is_connected

INF = 10**9


def floyd_warshall(g: Graph) -> np.ndarray:
    n = g.n
    d = np.full((n, n), INF, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for u, v in g.edges:
        d[u, v] = d[v, u] = 1
    for k in range(n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


def prufer_decode(seq: tuple[int, ...], n: int) -> tuple[tuple[int, int], ...]:
    """Labeled tree on vertices 0..n-1 from a Prufer sequence of length n-2."""
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    leaf_heap = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaf_heap)
    for x in seq:
        leaf = heapq.heappop(leaf_heap)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaf_heap, x)
    u = heapq.heappop(leaf_heap)
    v = heapq.heappop(leaf_heap)
    edges.append((u, v))
    return tuple(edges)


def all_labeled_trees(n: int):
    """Every labeled tree on n vertices, via Prufer sequences."""
    if n == 1:
        yield ()
        return
    if n == 2:
        yield ((0, 1),)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)


def two_coloring(g: Graph) -> list[int] | None:
    """A proper 2-coloring, or None when the graph is not bipartite."""
    color = [-1] * g.n
    color[0] = 0
    queue = [0]
    while queue:
        u = queue.pop()
        for w in g.neighbors(u):
            if color[w] == -1:
                color[w] = 1 - color[u]
                queue.append(w)
            elif color[w] == color[u]:
                return None
    return color


def random_connected_graph(rng: random.Random, n: int, p: float = 0.4) -> Graph:
    """Erdos-Renyi G(n, p), resampled until connected."""
    while True:
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < p
        ]
        if len(edges) < n - 1:
            continue
        g = Graph(n, tuple(edges))
        if is_connected(g):
            return g


def random_spanning_tree(rng: random.Random, g: Graph) -> tuple[tuple[int, int], ...]:
    """Uniformly shuffled edge order fed to union-find; returns tree edges."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = list(g.edges)
    rng.shuffle(edges)
    tree = []
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.append((u, v))
    return tuple(tree)


def random_oriented_tree(rng: random.Random, g: Graph) -> OrientedTree:
    """Random spanning tree with every host edge randomly directed."""
    tree = tuple(
        (u, v) if rng.random() < 0.5 else (v, u)
        for u, v in random_spanning_tree(rng, g)
    )
    directed = {tuple(sorted(e)): e for e in tree}
    orientation = tuple(
        directed.get(e, e if rng.random() < 0.5 else (e[1], e[0]))
        for e in g.edges
    )
    return OrientedTree(g, tree, orientation)


# (uri, is_qe or None when not pinned by a closed form)
CORPUS = (
    ("path:2", True),
    ("path:6", True),
    ("path:10", True),
    ("cycle:3", True),
    ("cycle:4", True),
    ("cycle:5", True),
    ("cycle:6", True),
    ("cycle:9", True),
    ("cycle:12", True),
    ("theta:1,2,2", True),
    ("theta:1,4,6", True),
    ("theta:1,5,8", True),
    ("theta:2,3,3", True),
    ("theta:2,3,5", True),
    ("theta:2,3,7", True),
    ("theta:2,2,2", False),
    ("theta:2,2,5", False),
    ("theta:2,3,4", False),
    ("theta:2,3,9", False),
    ("theta:2,4,4", False),
    ("theta:3,3,3", False),
    ("theta:3,4,5", False),
)


@pytest.fixture(scope="session")
def corpus():
    return tuple((uri, graph_from_uri(uri), qe) for uri, qe in CORPUS)


@pytest.fixture()
def rng():
    return random.Random(20260813)
