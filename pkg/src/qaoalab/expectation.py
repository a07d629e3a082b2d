"""Objective evaluation for the QAOA ansatz.

``expectation_F`` is the exact mean cost of the ansatz state. The Gibbs
objective ``-log <exp(-eta C)>`` is offered as an alternative outer-loop
target. ``p1_trace_expectation_maxcut`` is a separate p = 1 route for MaxCut
that never builds the mixed state: it pushes the mixer through each edge
term by hand and evaluates the resulting ``ZY``, ``YZ`` and ``YY``
correlators on ``U(C, gamma)|+>^n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .circuit import AngleSchedule, build_qaoa_state
from .problems import CostSpectrum, Graph, maxcut_spectrum
from .statevector import (
    SampleCounts,
    StateVector,
    apply_diagonal_phase,
    expectation_diagonal,
    measure_sample,
    uniform_superposition,
)


@dataclass(frozen=True)
class ObjectiveReport:
    exact_value: float
    sampled_mean: float | None = None
    shots: int | None = None
    counts: SampleCounts | None = None

    def __post_init__(self):
        present = [x is not None for x in (self.sampled_mean, self.shots, self.counts)]
        if any(present) and not all(present):
            raise ValueError("sampled_mean, shots and counts go together")


def expectation_F(s: CostSpectrum, angles: AngleSchedule) -> float:
    return expectation_diagonal(build_qaoa_state(s, angles), s)


def gibbs_value(psi: StateVector, s: CostSpectrum, eta: float) -> float:
    """``-log sum_z |a_z|^2 exp(-eta P(z))`` for an already prepared state."""
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta!r}")
    probs = psi.probabilities()
    exponent = -eta * s.values
    live = probs > 0
    shift = exponent[live].max()
    return -(shift + math.log(float(np.dot(probs[live], np.exp(exponent[live] - shift)))))


def gibbs_objective(s: CostSpectrum, angles: AngleSchedule, eta: float) -> float:
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta!r}")
    return gibbs_value(build_qaoa_state(s, angles), s, eta)


def spectrum_stddev(psi: StateVector, s: CostSpectrum) -> float:
    """Standard deviation of ``P(z)`` under the measurement distribution of ``psi``."""
    probs = psi.probabilities()
    mean = float(np.dot(probs, s.values))
    var = float(np.dot(probs, (s.values - mean) ** 2))
    return math.sqrt(max(var, 0.0))


def sampled_objective(s: CostSpectrum, angles: AngleSchedule, shots: int, seed: int) -> ObjectiveReport:
    psi = build_qaoa_state(s, angles)
    counts = measure_sample(psi, shots, seed)
    return ObjectiveReport(
        exact_value=expectation_diagonal(psi, s),
        sampled_mean=counts.mean(s.values),
        shots=int(shots),
        counts=counts,
    )


def make_objective(s: CostSpectrum, kind: str = "f", eta: float = 1.0) -> Callable[[AngleSchedule], float]:
    """Objective callable for the optimizers: ``"f"`` (mean cost) or ``"gibbs"``."""
    if kind == "f":
        return lambda angles: expectation_F(s, angles)
    if kind == "gibbs":
        if not eta > 0:
            raise ValueError(f"eta must be positive, got {eta!r}")
        return lambda angles: gibbs_objective(s, angles, eta)
    raise ValueError(f"unknown objective {kind!r}")


# --------------------------------------------------------------------------
# trace route for p = 1 MaxCut


def _pauli_expectation(amps: np.ndarray, n: int, paulis: dict[int, str]) -> float:
    """``<psi| prod_q P_q |psi>`` for ``P_q`` in ``{"Z", "Y"}``."""
    view = amps.reshape((2,) * n)
    out = view.copy()
    for q, name in paulis.items():
        lo = [slice(None)] * n
        hi = [slice(None)] * n
        lo[q], hi[q] = 0, 1
        lo, hi = tuple(lo), tuple(hi)
        if name == "Z":
            out[hi] *= -1
        elif name == "Y":
            # Y|0> = i|1>, Y|1> = -i|0>
            a0 = out[lo].copy()
            out[lo] = -1j * out[hi]
            out[hi] = 1j * a0
        else:
            raise ValueError(f"unsupported Pauli {name!r}")
    return float(np.vdot(view, out).real)


def p1_trace_expectation_maxcut(g: Graph, gamma: float, beta: float) -> float:
    """Single-layer MaxCut expectation from the conjugated-edge traces.

    Conjugating ``Z_i Z_j`` by the two mixer factors on ``i`` and ``j`` gives
    ``cos^2(2b) ZZ + cos(2b) sin(2b) (ZY + YZ) + sin^2(2b) YY``. The initial
    density is the pure uniform state, for which the ``ZZ`` trace vanishes, so
    only the three remaining traces are evaluated, each as an expectation in
    ``U(C, gamma)|+>^n``. Weighted edges scale their own term.
    """
    n = g.n_vertices
    spectrum = maxcut_spectrum(g)
    phi = apply_diagonal_phase(uniform_superposition(n), spectrum, gamma).amplitudes
    cs = math.cos(2 * beta) * math.sin(2 * beta)
    s2 = math.sin(2 * beta) ** 2
    total = g.total_weight / 2
    for (i, j), w in zip(g.edges, g.weights):
        t_zy = _pauli_expectation(phi, n, {i: "Z", j: "Y"})
        t_yz = _pauli_expectation(phi, n, {i: "Y", j: "Z"})
        t_yy = _pauli_expectation(phi, n, {i: "Y", j: "Y"})
        total -= 0.5 * w * (cs * t_zy + cs * t_yz + s2 * t_yy)
    return total
