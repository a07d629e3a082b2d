"""Closed-form single-layer expectations and the edge-neighbourhood decomposition.

At depth p the contribution of an edge to F only depends on the vertices
within p steps of it, so F is a sum over rooted-isomorphism classes of those
neighbourhoods, each simulated once and weighted by how often it occurs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .circuit import AngleSchedule, build_qaoa_state
from .errors import PreconditionError
from .graphs import butterfly, moser_spindle
from .problems import Graph, IsingProblem, maxcut_spectrum, maxcut_to_ising
from .statevector import expectation_diagonal

sin, cos = math.sin, math.cos


def find_triangle(g: Graph):
    """Some triangle ``(a, b, c)`` of ``g`` with ``a < b < c``, or None."""
    adj = g.adjacency()
    for i, j in g.edges:
        common = adj[i] & adj[j]
        if common:
            return tuple(sorted((i, j, min(common))))
    return None


def triangle_free_ising_expectation(m: IsingProblem, gamma: float, beta: float) -> float:
    """Exact single-layer ``<H>`` for an Ising problem whose couplings form no triangle.

    Neighbour products for a coupling ``(i, j)`` run over the other couplings
    at ``i`` (respectively ``j``); an empty product is 1. The constant offset
    is added unchanged so the result is comparable with the simulated mean.
    """
    cg = m.coupling_graph()
    tri = find_triangle(cg)
    if tri is not None:
        raise PreconditionError(f"coupling graph contains the triangle {tri}")
    h = [m.fields.get(i, 0.0) for i in range(m.n_spins)]
    nbrs = [[] for _ in range(m.n_spins)]
    for (i, j), J in zip(cg.edges, cg.weights):
        nbrs[i].append((j, J))
        nbrs[j].append((i, J))

    def cos_prod(v, skip=None):
        return math.prod(cos(2 * gamma * J) for k, J in nbrs[v] if k != skip)

    s2b = sin(2 * beta)
    total = m.offset
    for i in range(m.n_spins):
        if h[i]:
            total += h[i] * s2b * sin(2 * gamma * h[i]) * cos_prod(i)
    for (i, j), J in zip(cg.edges, cg.weights):
        pi, pj = cos_prod(i, skip=j), cos_prod(j, skip=i)
        first = 2 * cos(2 * beta) * sin(2 * gamma * J) * (
            2 * cos(2 * gamma * h[i]) * pi + 2 * cos(2 * gamma * h[j]) * pj
        )
        second = 4 * s2b * sin(2 * gamma * h[i]) * sin(2 * gamma * h[j]) * pi * pj
        total += 0.5 * J * sin(beta) * cos(beta) * (first + second)
    return total


def butterfly_fA(gamma: float, beta: float) -> float:
    """Per-edge expectation of the two edges away from the butterfly's centre."""
    return 0.25 * (
        sin(2 * beta) * sin(gamma) * (cos(2 * beta - gamma) + 3 * cos(2 * beta + gamma)) + 2
    )


def butterfly_fB(gamma: float, beta: float) -> float:
    """Per-edge expectation of the four edges touching the butterfly's centre."""
    return 0.125 * (
        sin(2 * beta) * sin(2 * gamma) * (cos(2 * (beta + gamma)) + 3 * cos(2 * beta)) + 4
    )


def butterfly_F(gamma: float, beta: float) -> float:
    return 2 * butterfly_fA(gamma, beta) + 4 * butterfly_fB(gamma, beta)


def moser_spindle_F(gamma: float, beta: float) -> float:
    cg = cos(gamma)
    return (
        88
        + 8 * cg**2 * (9 + 2 * cg) * sin(4 * beta) * sin(gamma)
        - 8 * (2 + cg) * sin(2 * beta) ** 2 * sin(2 * gamma) ** 2
    ) / 16


# --------------------------------------------------------------------------
# neighbourhood decomposition


@dataclass(frozen=True)
class RootedGraph:
    """A graph with a distinguished root edge.

    ``vertices[k]`` is the host-graph label of local vertex ``k``.
    """

    graph: Graph
    root: tuple[int, int]
    vertices: tuple[int, ...] = ()

    def root_weight(self) -> float:
        return self.graph.weight(*self.root)


@dataclass(frozen=True)
class SubgraphClass:
    representative: RootedGraph
    multiplicity: int
    members: tuple[tuple[int, int], ...]


def _distances(adj, sources, limit):
    dist = {v: 0 for v in sources}
    frontier = list(sources)
    for d in range(1, limit + 1):
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


def edge_neighborhood_subgraph(g: Graph, edge, p: int) -> RootedGraph:
    """Induced subgraph on every vertex within ``p`` steps of ``edge``.

    Local labels follow ascending host labels. Distances inside the induced
    ball equal host distances, so every edge the depth-p light cone reaches is
    kept; edges joining two vertices at distance exactly ``p`` are kept too,
    they commute with the evolved edge operator and do not change its value.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    i, j = int(edge[0]), int(edge[1])
    if not g.has_edge(i, j):
        raise ValueError(f"({i}, {j}) is not an edge of the graph")
    dist = _distances(g.adjacency(), (i, j), p)
    verts = tuple(sorted(dist))
    local = {v: k for k, v in enumerate(verts)}
    edges, weights = [], []
    for (a, b), w in zip(g.edges, g.weights):
        if a in local and b in local:
            edges.append((local[a], local[b]))
            weights.append(w)
    sub = Graph(len(verts), tuple(edges), tuple(weights))
    ri, rj = sorted((local[i], local[j]))
    return RootedGraph(sub, (ri, rj), verts)


def _to_nx(rg: RootedGraph) -> nx.Graph:
    G = nx.Graph()
    for v in range(rg.graph.n_vertices):
        G.add_node(v, root=v in rg.root)
    for (a, b), w in zip(rg.graph.edges, rg.graph.weights):
        G.add_edge(a, b, weight=w)
    return G


def rooted_isomorphic(a: RootedGraph, b: RootedGraph) -> bool:
    """Isomorphism that maps root edge onto root edge and preserves weights."""
    ga, gb = a.graph, b.graph
    if (ga.n_vertices, ga.n_edges) != (gb.n_vertices, gb.n_edges):
        return False
    if sorted(ga.weights) != sorted(gb.weights) or a.root_weight() != b.root_weight():
        return False
    matcher = GraphMatcher(
        _to_nx(a),
        _to_nx(b),
        node_match=lambda x, y: x["root"] == y["root"],
        edge_match=lambda x, y: x["weight"] == y["weight"],
    )
    return matcher.is_isomorphic()


def subgraph_classes(g: Graph, p: int) -> list[SubgraphClass]:
    """Group the depth-p edge neighbourhoods of ``g`` by rooted isomorphism.

    Classes appear in order of their first member edge.
    """
    reps: list[RootedGraph] = []
    members: list[list[tuple[int, int]]] = []
    for e in g.edges:
        nb = edge_neighborhood_subgraph(g, e, p)
        for k, rep in enumerate(reps):
            if rooted_isomorphic(nb, rep):
                members[k].append(e)
                break
        else:
            reps.append(nb)
            members.append([e])
    return [SubgraphClass(r, len(m), tuple(m)) for r, m in zip(reps, members)]


def edge_contribution(rg: RootedGraph, angles: AngleSchedule) -> float:
    """``w/2 (1 - <Z_i Z_j>)`` for the root edge, simulated on the subgraph alone."""
    sub = rg.graph
    state = build_qaoa_state(maxcut_spectrum(sub), angles)
    root_only = Graph(sub.n_vertices, (rg.root,), (rg.root_weight(),))
    return expectation_diagonal(state, maxcut_spectrum(root_only))


def decomposed_expectation(g: Graph, angles: AngleSchedule) -> float:
    """``sum_S m_S f_S`` over the depth-p neighbourhood classes of ``g``."""
    total = 0.0
    for cls in subgraph_classes(g, angles.p):
        total += cls.multiplicity * edge_contribution(cls.representative, angles)
    return total


# --------------------------------------------------------------------------
# formula dispatch


def _same_graph(g: Graph, template: Graph) -> bool:
    if not g.is_unit_weight or (g.n_vertices, g.n_edges) != (template.n_vertices, template.n_edges):
        return False
    a = nx.Graph(list(g.edges))
    a.add_nodes_from(range(g.n_vertices))
    b = nx.Graph(list(template.edges))
    b.add_nodes_from(range(template.n_vertices))
    return nx.is_isomorphic(a, b)


def closed_form_for(g: Graph):
    """A ``(gamma, beta) -> F`` closed form for ``g``, or None if none is known.

    Recognises the butterfly and the Moser spindle up to relabelling, and any
    triangle-free graph through the Ising formula.
    """
    if _same_graph(g, butterfly()):
        return butterfly_F
    if _same_graph(g, moser_spindle()):
        return moser_spindle_F
    if find_triangle(g) is None:
        ising = maxcut_to_ising(g)
        return lambda gamma, beta: triangle_free_ising_expectation(ising, gamma, beta)
    return None
