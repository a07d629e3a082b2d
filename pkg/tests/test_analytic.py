import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_expectation, ising_energy, assignments
from qaoalab.analytic import (
    RootedGraph,
    butterfly_F,
    butterfly_fA,
    butterfly_fB,
    closed_form_for,
    decomposed_expectation,
    edge_contribution,
    edge_neighborhood_subgraph,
    find_triangle,
    moser_spindle_F,
    rooted_isomorphic,
    subgraph_classes,
    triangle_free_ising_expectation,
)
from qaoalab.circuit import AngleSchedule
from qaoalab.errors import PreconditionError
from qaoalab.expectation import expectation_F
from qaoalab.graphs import butterfly, complete, cube, cycle, disjoint_union, moser_spindle, path, random_graph, star
from qaoalab.problems import Graph, IsingProblem, build_cost_spectrum, maxcut_spectrum, maxcut_to_ising

angle = st.floats(-7, 7, allow_nan=False)


def one(g, b):
    return AngleSchedule((g,), (b,))


def ising_mean(m, g, b):
    costs = [ising_energy(m.n_spins, m.couplings, m.fields, m.offset, z) for z in assignments(m.n_spins)]
    return dense_expectation(costs, [g], [b])


@st.composite
def triangle_free_ising(draw):
    n = draw(st.integers(2, 7))
    kind = draw(st.sampled_from(["path", "cycle", "star", "cube"]))
    g = {"path": path(n), "cycle": cycle(max(n, 4)), "star": star(n), "cube": cube()}[kind]
    w = st.floats(-2, 2, allow_nan=False)
    couplings = {e: draw(w) for e in g.edges}
    couplings = {e: J for e, J in couplings.items() if J != 0}
    fields = {i: draw(w) for i in draw(st.lists(st.integers(0, g.n_vertices - 1), unique=True))}
    return IsingProblem(g.n_vertices, couplings, fields, draw(w))


class TestTriangleFree:
    def test_zero_problem(self):
        m = IsingProblem(3, {}, {}, 0.0)
        assert triangle_free_ising_expectation(m, 0.4, 0.9) == 0.0

    def test_beta_zero_gives_offset(self):
        m = maxcut_to_ising(cube())
        assert triangle_free_ising_expectation(m, 1.7, 0.0) == pytest.approx(m.offset, abs=1e-14)

    def test_rejects_triangle(self):
        with pytest.raises(PreconditionError, match=r"\(0, 1, 2\)"):
            triangle_free_ising_expectation(maxcut_to_ising(complete(3)), 0.1, 0.2)

    def test_fields_only(self):
        h = {0: 0.5, 1: -1.25, 2: 2.0}
        m = IsingProblem(3, {}, h)
        g, b = 0.8, 0.3
        want = sum(x * math.sin(2 * b) * math.sin(2 * g * x) for x in h.values())
        assert triangle_free_ising_expectation(m, g, b) == pytest.approx(want, abs=1e-13)
        assert ising_mean(m, g, b) == pytest.approx(want, abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(triangle_free_ising(), angle, angle)
    def test_matches_simulation(self, m, g, b):
        sim = expectation_F(build_cost_spectrum(m), one(g, b))
        assert triangle_free_ising_expectation(m, g, b) == pytest.approx(sim, abs=1e-9)

    def test_matches_dense_oracle(self):
        m = IsingProblem(4, {(0, 1): 0.7, (1, 2): -1.3, (2, 3): 0.4}, {0: 0.3, 3: -0.9}, 1.5)
        assert triangle_free_ising_expectation(m, 0.6, 1.2) == pytest.approx(ising_mean(m, 0.6, 1.2), abs=1e-10)


class TestButterflyAndMoser:
    @pytest.mark.parametrize("x", [0.0, 0.7, 2.5, 4.1])
    def test_per_edge_values_at_zero_angles(self, x):
        assert butterfly_fA(0.0, x) == pytest.approx(0.5)
        assert butterfly_fA(x, 0.0) == pytest.approx(0.5)
        assert butterfly_fB(0.0, x) == pytest.approx(0.5)
        assert butterfly_fB(x, 0.0) == pytest.approx(0.5)

    @pytest.mark.parametrize("g, b", [(0.3, 0.2), (1.4, 2.0), (3.9, 0.6)])
    def test_fA_is_the_triangle_edge(self, g, b):
        tri = complete(3)
        rg = RootedGraph(tri, (0, 1))
        assert butterfly_fA(g, b) == pytest.approx(edge_contribution(rg, one(g, b)), abs=1e-12)

    @pytest.mark.parametrize("g, b", [(0.3, 0.2), (1.4, 2.0), (3.9, 0.6)])
    def test_fB_is_a_centre_edge(self, g, b):
        rg = RootedGraph(butterfly(), (0, 2))
        assert butterfly_fB(g, b) == pytest.approx(edge_contribution(rg, one(g, b)), abs=1e-12)

    def test_uniform_values(self):
        assert butterfly_F(0.0, 0.0) == pytest.approx(3.0)
        assert moser_spindle_F(0.0, 0.0) == pytest.approx(5.5)

    @settings(max_examples=30, deadline=None)
    @given(angle, angle)
    def test_moser_matches_simulation(self, g, b):
        sim = expectation_F(maxcut_spectrum(moser_spindle()), one(g, b))
        assert moser_spindle_F(g, b) == pytest.approx(sim, abs=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(angle, angle)
    def test_periodicity(self, g, b):
        for f in (butterfly_F, moser_spindle_F):
            assert f(g + 2 * math.pi, b) == pytest.approx(f(g, b), abs=1e-9)
            assert f(g, b + math.pi) == pytest.approx(f(g, b), abs=1e-9)


class TestNeighbourhoods:
    def test_butterfly_examples(self):
        nb = edge_neighborhood_subgraph(butterfly(), (0, 1), 1)
        assert nb.vertices == (0, 1, 2) and nb.graph.n_edges == 3 and nb.root == (0, 1)
        nb = edge_neighborhood_subgraph(butterfly(), (0, 2), 1)
        assert nb.vertices == (0, 1, 2, 3, 4) and nb.graph.n_edges == 6

    def test_path_depth(self):
        g = path(7)
        assert edge_neighborhood_subgraph(g, (3, 4), 1).vertices == (2, 3, 4, 5)
        assert edge_neighborhood_subgraph(g, (3, 4), 2).vertices == (1, 2, 3, 4, 5, 6)

    def test_rejects_non_edge(self):
        with pytest.raises(ValueError):
            edge_neighborhood_subgraph(butterfly(), (0, 3), 1)

    def test_classes(self):
        cls = subgraph_classes(butterfly(), 1)
        assert [(c.multiplicity, c.representative.graph.n_vertices) for c in cls] == [(2, 3), (4, 5)]
        assert [c.multiplicity for c in subgraph_classes(complete(3), 1)] == [3]
        assert [c.multiplicity for c in subgraph_classes(path(2), 1)] == [1]
        assert sum(c.multiplicity for c in subgraph_classes(moser_spindle(), 2)) == 11

    def test_rooted_isomorphism_respects_root_and_weight(self):
        g = path(3)
        a = RootedGraph(g, (0, 1))
        b = RootedGraph(g, (1, 2))
        assert rooted_isomorphic(a, b)
        w = Graph.from_weighted_edges(3, [(0, 1, 1.0), (1, 2, 2.0)])
        assert not rooted_isomorphic(RootedGraph(w, (0, 1)), RootedGraph(w, (1, 2)))
        s = star(4)
        assert not rooted_isomorphic(RootedGraph(path(4), (0, 1)), RootedGraph(path(4), (1, 2)))
        assert rooted_isomorphic(RootedGraph(s, (0, 1)), RootedGraph(s, (0, 3)))


class TestDecomposition:
    @pytest.mark.parametrize("graph", [butterfly(), moser_spindle(), cube(), disjoint_union(butterfly(), path(3))])
    @pytest.mark.parametrize("angles", [one(0.9, 0.4), AngleSchedule((0.5, 1.2), (0.3, 0.8))])
    def test_matches_full_simulation(self, graph, angles):
        full = expectation_F(maxcut_spectrum(graph), angles)
        assert decomposed_expectation(graph, angles) == pytest.approx(full, abs=1e-10)

    def test_weighted(self):
        g = Graph.from_weighted_edges(5, [(0, 1, 0.5), (1, 2, 2.0), (0, 2, 1.5), (2, 3, -0.7), (3, 4, 1.0)])
        a = one(1.1, 0.35)
        assert decomposed_expectation(g, a) == pytest.approx(expectation_F(maxcut_spectrum(g), a), abs=1e-10)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 2**32 - 1), angle, angle)
    def test_random_graphs(self, seed, g, b):
        graph = random_graph(7, 0.35, np.random.default_rng(seed))
        a = one(g, b)
        assert decomposed_expectation(graph, a) == pytest.approx(expectation_F(maxcut_spectrum(graph), a), abs=1e-9)


class TestDispatch:
    def test_recognises_relabelled_butterfly(self):
        g = Graph(5, ((1, 4), (1, 0), (4, 0), (0, 2), (0, 3), (2, 3)))
        assert closed_form_for(g) is butterfly_F
        assert closed_form_for(moser_spindle()) is moser_spindle_F

    def test_triangle_free_and_unknown(self):
        f = closed_form_for(cube())
        assert f(0.7, 0.2) == pytest.approx(expectation_F(maxcut_spectrum(cube()), one(0.7, 0.2)), abs=1e-10)
        assert closed_form_for(complete(4)) is None
        assert find_triangle(cube()) is None
