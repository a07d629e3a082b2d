"""Named graphs and small generators used by the tests and the CLI."""

from __future__ import annotations

import itertools

import numpy as np

from .problems import Graph

BUTTERFLY_EDGES = ((0, 1), (0, 2), (1, 2), (3, 2), (3, 4), (4, 2))

# Listed 1-indexed in the original Mathematica session; shifted to 0-indexing.
MOSER_SPINDLE_EDGES = tuple(
    (a - 1, b - 1)
    for a, b in (
        (1, 2), (1, 3), (2, 3), (4, 3), (2, 4), (4, 5),
        (6, 5), (5, 7), (6, 7), (1, 6), (1, 7),
    )
)


def butterfly() -> Graph:
    """Two triangles sharing vertex 2."""
    return Graph(5, BUTTERFLY_EDGES)


def moser_spindle() -> Graph:
    return Graph(7, MOSER_SPINDLE_EDGES)


def path(n, weights=None) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)), weights)


def cycle(n, weights=None) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)), weights)


def star(n, weights=None) -> Graph:
    """Vertex 0 joined to every other vertex."""
    return Graph(n, tuple((0, i) for i in range(1, n)), weights)


def complete(n) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def cube() -> Graph:
    """The 3-cube: 3-regular on 8 vertices, bipartite."""
    edges = [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)]
    return Graph(8, tuple(edges))


def disjoint_union(a: Graph, b: Graph) -> Graph:
    shift = a.n_vertices
    edges = a.edges + tuple((i + shift, j + shift) for i, j in b.edges)
    return Graph(a.n_vertices + b.n_vertices, edges, a.weights + b.weights)


def random_graph(n, edge_prob, rng: np.random.Generator, min_edges=1) -> Graph:
    """Erdos-Renyi sample, redrawn until it has at least ``min_edges`` edges."""
    pairs = list(itertools.combinations(range(n), 2))
    while True:
        keep = rng.random(len(pairs)) < edge_prob
        edges = tuple(p for p, k in zip(pairs, keep) if k)
        if len(edges) >= min_edges:
            return Graph(n, edges)
