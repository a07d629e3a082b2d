import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_qaoa_state, maxcut_costs, run_qasm
from qaoalab.circuit import (
    AngleSchedule,
    Circuit,
    GateOp,
    build_qaoa_state,
    compile_cost_unitary,
    compile_qaoa_circuit,
    export_openqasm,
    simulate_circuit,
)
from qaoalab.errors import UnsupportedGateError
from qaoalab.graphs import BUTTERFLY_EDGES, butterfly
from qaoalab.problems import (
    Graph,
    IsingProblem,
    build_cost_spectrum,
    maxcut_spectrum,
    maxcut_to_ising,
)
from qaoalab.statevector import StateVector, apply_diagonal_phase, expectation_diagonal, uniform_superposition


def global_phase_fidelity(a: StateVector, b: StateVector) -> float:
    return abs(a.overlap(b))


def listing_expression(g, b):
    c = math.cos
    return (21 + 3 * c(4 * b) + 4 * c(4 * b - 2 * g) + 2 * c(2 * g) + c(4 * g)
            - c(4 * (b + g)) - 6 * c(2 * (2 * b + g))) / 8


class TestAngleSchedule:
    def test_rejects_empty_and_mismatched(self):
        with pytest.raises(ValueError):
            AngleSchedule((), ())
        with pytest.raises(ValueError):
            AngleSchedule((0.1, 0.2), (0.3,))
        with pytest.raises(ValueError):
            AngleSchedule((math.nan,), (0.0,))

    def test_flat_roundtrip(self):
        a = AngleSchedule((1.0, 2.0), (3.0, 4.0))
        assert a.flat() == (1.0, 2.0, 3.0, 4.0)
        assert AngleSchedule.from_flat(a.flat()) == a
        assert a.p == 2


class TestBuildState:
    def test_zero_angles_is_uniform(self):
        s = maxcut_spectrum(butterfly())
        psi = build_qaoa_state(s, AngleSchedule((0.0,), (0.0,)))
        np.testing.assert_allclose(psi.amplitudes, uniform_superposition(5).amplitudes, atol=1e-15)

    @pytest.mark.parametrize("g, b", [(0.3, 0.2), (1.9, 2.4), (4.4, 0.7), (6.0, 3.0)])
    def test_butterfly_listing_expression(self, g, b):
        s = maxcut_spectrum(butterfly())
        psi = build_qaoa_state(s, AngleSchedule((g,), (b,)))
        assert expectation_diagonal(psi, s) == pytest.approx(listing_expression(g, b), abs=1e-12)

    def test_identity_second_layer(self):
        s = maxcut_spectrum(butterfly())
        one = build_qaoa_state(s, AngleSchedule((0.8,), (0.3,)))
        two = build_qaoa_state(s, AngleSchedule((0.8, 0.0), (0.3, 0.0)))
        np.testing.assert_allclose(one.amplitudes, two.amplitudes, atol=1e-15)

    def test_matches_dense_oracle(self):
        costs = maxcut_costs(5, list(BUTTERFLY_EDGES))
        gam, bet = (0.4, 1.3, -0.2), (0.9, 0.1, 2.2)
        psi = build_qaoa_state(maxcut_spectrum(butterfly()), AngleSchedule(gam, bet))
        np.testing.assert_allclose(psi.amplitudes, dense_qaoa_state(costs, gam, bet), atol=1e-12)


class TestCostUnitary:
    def test_unit_edge_reproduces_two_qubit_phases(self):
        # MaxCut edge: phases 1, e^{-ig}, e^{-ig}, 1 on |00>, |01>, |10>, |11> up to global phase
        g = 0.66
        rng = np.random.default_rng(0)
        y1 = rng.normal(size=2) + 1j * rng.normal(size=2)
        y2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi = StateVector.from_amplitudes(np.kron(y1, y2), normalize=True)
        circ = compile_cost_unitary(maxcut_to_ising(Graph(2, ((0, 1),))), g)
        assert [op.kind for op in circ.ops] == ["controlled_phase", "phase", "phase"]
        assert circ.ops[0].angle == pytest.approx(-2 * g)
        assert circ.ops[1].angle == pytest.approx(g)
        out = simulate_circuit(circ, psi)
        want = psi.amplitudes * np.array([1, cmath.exp(-1j * g), cmath.exp(-1j * g), 1])
        ratio = out.amplitudes / want
        np.testing.assert_allclose(ratio, ratio[0], atol=1e-14)
        assert abs(abs(ratio[0]) - 1) < 1e-14

    def test_zero_angle_identity(self):
        m = IsingProblem(3, {(0, 1): 1.3, (1, 2): -0.4}, {0: 2.0})
        psi = StateVector.from_amplitudes(np.arange(1, 9), normalize=True)
        out = simulate_circuit(compile_cost_unitary(m, 0.0), psi)
        np.testing.assert_allclose(out.amplitudes, psi.amplitudes, atol=1e-15)

    def test_weighted_three_spin(self):
        m = IsingProblem(3, {(0, 1): 0.8, (0, 2): -1.7, (1, 2): 0.25}, {1: 0.6, 2: -1.1}, 4.0)
        g = 1.234
        psi = StateVector.from_amplitudes(np.linspace(0.1, 1, 8) * np.exp(1j * np.arange(8)), normalize=True)
        circ = simulate_circuit(compile_cost_unitary(m, g), psi)
        diag = apply_diagonal_phase(psi, build_cost_spectrum(m), g)
        assert global_phase_fidelity(circ, diag) > 1 - 1e-10


class TestCompileCircuit:
    def test_butterfly_structure(self):
        g, b = 0.7, 0.3
        m = maxcut_to_ising(butterfly())
        circ = compile_qaoa_circuit(m, AngleSchedule((g,), (b,)))
        kinds = [op.kind for op in circ.ops]
        assert kinds[:5] == ["hadamard"] * 5
        body = circ.ops[5:23]
        for k, (i, j) in enumerate(m.couplings):
            cp, p1, p2 = body[3 * k: 3 * k + 3]
            assert (cp.kind, cp.qubits) == ("controlled_phase", (i, j))
            assert cp.angle == pytest.approx(-2 * g)
            assert (p1.qubits, p2.qubits) == ((i,), (j,))
            assert p1.angle == pytest.approx(g) and p2.angle == pytest.approx(g)
        assert [(op.kind, op.angle) for op in circ.ops[23:]] == [("rx", 2 * b)] * 5

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_gate_count(self, p):
        m = IsingProblem(4, {(0, 1): 1.0, (1, 2): 2.0, (0, 3): -1.0}, {2: 0.5})
        circ = compile_qaoa_circuit(m, AngleSchedule((0.1,) * p, (0.2,) * p))
        n, nc, nf = 4, 3, 1
        assert len(circ.ops) == n + p * (n + 3 * nc + nf)

    def test_matches_fast_path(self):
        m = maxcut_to_ising(butterfly())
        a = AngleSchedule((0.5, 1.7), (0.2, 2.9))
        circ = simulate_circuit(compile_qaoa_circuit(m, a))
        assert global_phase_fidelity(circ, build_qaoa_state(build_cost_spectrum(m), a)) > 1 - 1e-10


class TestSimulate:
    def test_hadamards(self):
        circ = Circuit(3, tuple(GateOp("hadamard", (q,)) for q in range(3)))
        np.testing.assert_allclose(simulate_circuit(circ).amplitudes, uniform_superposition(3).amplitudes, atol=1e-15)

    def test_empty(self):
        assert simulate_circuit(Circuit(2)).amplitudes.tolist() == [1, 0, 0, 0]

    def test_ancilla_circuit(self):
        # H on the data qubits, an X-like rx(pi) on the ancilla, then the two controlled phases
        g = 0.9
        ops = [GateOp("hadamard", (0,)), GateOp("hadamard", (1,)), GateOp("rx", (2,), math.pi),
               GateOp("controlled_phase", (0, 1, 2), g), GateOp("controlled_phase", (0, 2), g)]
        out = simulate_circuit(Circuit(3, tuple(ops)))
        data = 0.5 * np.array([1, 1, cmath.exp(-1j * g), cmath.exp(-2j * g)])
        want = np.kron(data, [0, -1j])
        np.testing.assert_allclose(out.amplitudes, want, atol=1e-15)

    def test_gateop_validation(self):
        with pytest.raises(ValueError):
            GateOp("rx", (0, 1), 0.1)
        with pytest.raises(ValueError):
            GateOp("hadamard", (0,), 0.1)
        with pytest.raises(ValueError):
            GateOp("controlled_phase", (1, 1), 0.1)
        with pytest.raises(ValueError):
            GateOp("swap", (0, 1))
        with pytest.raises(ValueError):
            Circuit(2, (GateOp("hadamard", (2,)),))


class TestOpenQasm:
    def test_empty_circuit(self):
        assert export_openqasm(Circuit(1)) == (
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\n'
        )

    def test_butterfly_lines(self):
        g, b = 0.75, 0.5
        text = export_openqasm(compile_qaoa_circuit(maxcut_to_ising(butterfly()), AngleSchedule((g,), (b,))))
        lines = text.splitlines()
        assert lines[4:9] == [f"h q[{q}];" for q in range(5)]
        assert lines[9:12] == ["cu1(1.5) q[0],q[1];", "u1(-0.75) q[0];", "u1(-0.75) q[1];"]
        assert lines[-10:-5] == [f"rx(1.0) q[{q}];" for q in range(5)]
        assert sum(line.startswith("cu1") for line in lines) == 6
        assert sum(line.startswith("u1") for line in lines) == 12

    def test_multi_control_rejected(self):
        circ = Circuit(3, (GateOp("controlled_phase", (0, 1, 2), 0.3),))
        with pytest.raises(UnsupportedGateError):
            export_openqasm(circ)

    def test_roundtrip_through_independent_interpreter(self):
        m = IsingProblem(4, {(0, 1): 0.7, (1, 2): -1.2, (0, 3): 0.4}, {2: 0.9, 3: -0.3}, 2.0)
        a = AngleSchedule((0.35, 1.4), (0.8, 0.15))
        psi_qasm, measured = run_qasm(export_openqasm(compile_qaoa_circuit(m, a)))
        assert measured == [0, 1, 2, 3]
        psi = build_qaoa_state(build_cost_spectrum(m), a)
        np.testing.assert_allclose(np.abs(psi_qasm) ** 2, psi.probabilities(), atol=1e-12)
        assert abs(np.vdot(psi_qasm, psi.amplitudes)) > 1 - 1e-10


@st.composite
def ising_instances(draw):
    n = draw(st.integers(1, 6))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    w = st.floats(-2, 2, allow_nan=False)
    couplings = {k: draw(w) for k in draw(st.lists(st.sampled_from(pairs), unique=True))} if pairs else {}
    fields = {i: draw(w) for i in draw(st.lists(st.integers(0, n - 1), unique=True))}
    return IsingProblem(n, couplings, fields, draw(w))


@settings(max_examples=50, deadline=None)
@given(ising_instances(), st.lists(st.tuples(st.floats(-4, 4), st.floats(-4, 4)), min_size=1, max_size=3))
def test_path_equivalence_property(m, layers):
    a = AngleSchedule(tuple(g for g, _ in layers), tuple(b for _, b in layers))
    circ = simulate_circuit(compile_qaoa_circuit(m, a))
    fast = build_qaoa_state(build_cost_spectrum(m), a)
    assert abs(circ.overlap(fast)) >= 1 - 1e-10
