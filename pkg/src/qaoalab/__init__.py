"""Exact state-vector QAOA for MaxCut, QUBO and Ising problems."""

from .analytic import (
    butterfly_F,
    butterfly_fA,
    butterfly_fB,
    decomposed_expectation,
    edge_neighborhood_subgraph,
    moser_spindle_F,
    subgraph_classes,
    triangle_free_ising_expectation,
)
from .circuit import (
    AngleSchedule,
    Circuit,
    GateOp,
    build_qaoa_state,
    compile_cost_unitary,
    compile_qaoa_circuit,
    export_openqasm,
    simulate_circuit,
)
from .expectation import (
    ObjectiveReport,
    expectation_F,
    gibbs_objective,
    p1_trace_expectation_maxcut,
    sampled_objective,
)
from .optimize import AngleBounds, OptimizationResult, grid_search, multi_start, nelder_mead
from .problems import (
    CostSpectrum,
    Graph,
    IsingProblem,
    QuboProblem,
    brute_force_optimum,
    build_cost_spectrum,
    ising_value,
    maxcut_cost,
    maxcut_to_ising,
    qubo_to_ising,
    qubo_value,
)
from .statevector import SampleCounts, StateVector

__version__ = "0.1.0"
