"""The p-layer QAOA ansatz, its gate-level compilation and OpenQASM 2.0 export.

Two routes produce the same state up to a global phase:

* :func:`build_qaoa_state` applies the cost layer as one diagonal phase;
* :func:`compile_qaoa_circuit` + :func:`simulate_circuit` go through explicit
  ``h``/``rx``/``phase``/``controlled_phase`` gates.

Phase-gate convention: ``phase(g) = diag(1, exp(-i g))``. A two-qubit
``controlled_phase(g)`` multiplies ``|11>`` by ``exp(-i g)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import statevector as sv
from .errors import ResourceLimitError, UnsupportedGateError
from .problems import MAX_QUBITS, CostSpectrum, IsingProblem
from .statevector import StateVector

GATE_KINDS = ("hadamard", "rx", "phase", "controlled_phase")


@dataclass(frozen=True)
class AngleSchedule:
    """Cost angles ``gammas`` and mixer angles ``betas``, one of each per layer."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        g = tuple(float(x) for x in np.atleast_1d(self.gammas))
        b = tuple(float(x) for x in np.atleast_1d(self.betas))
        if len(g) == 0 or len(g) != len(b):
            raise ValueError(f"need equal positive numbers of gammas and betas, got {len(g)} and {len(b)}")
        if not all(math.isfinite(x) for x in g + b):
            raise ValueError("angles must be finite")
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", b)

    @property
    def p(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_flat(cls, x: Sequence[float]) -> "AngleSchedule":
        """Inverse of :meth:`flat`: ``(gamma_1..gamma_p, beta_1..beta_p)``."""
        x = [float(v) for v in x]
        if len(x) % 2:
            raise ValueError("flat angle vector must have even length")
        p = len(x) // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    def flat(self) -> tuple[float, ...]:
        return self.gammas + self.betas


@dataclass(frozen=True)
class GateOp:
    """One gate. ``controlled_phase`` lists its controls first and its target last."""

    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        arity = len(qubits)
        if self.kind == "controlled_phase":
            if arity < 2:
                raise ValueError("controlled_phase needs at least one control and a target")
        elif arity != 1:
            raise ValueError(f"{self.kind} acts on exactly one qubit")
        if len(set(qubits)) != arity or min(qubits) < 0:
            raise ValueError(f"invalid qubit indices {qubits}")
        if self.kind == "hadamard":
            if self.angle is not None:
                raise ValueError("hadamard takes no angle")
        else:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind} needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        object.__setattr__(self, "qubits", qubits)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    ops: tuple[GateOp, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        ops = tuple(self.ops)
        for op in ops:
            if max(op.qubits) >= self.n_qubits:
                raise ValueError(f"{op} addresses a qubit outside 0..{self.n_qubits - 1}")
        object.__setattr__(self, "ops", ops)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot concatenate circuits of different widths")
        return Circuit(self.n_qubits, self.ops + other.ops)

    def count(self, kind: str) -> int:
        return sum(op.kind == kind for op in self.ops)


def build_qaoa_state(
    s: CostSpectrum, angles: AngleSchedule, max_qubits: int = MAX_QUBITS
) -> StateVector:
    """Alternate the cost phase and the mixer, starting from ``|+>^n``."""
    psi = sv.uniform_superposition(s.n_qubits, max_qubits)
    for gamma, beta in zip(angles.gammas, angles.betas):
        psi = sv.apply_diagonal_phase(psi, s, gamma)
        psi = sv.apply_rx_all(psi, beta)
    return psi


def compile_cost_unitary(m: IsingProblem, gamma: float) -> Circuit:
    """Gates for ``exp(-i gamma H)`` up to global phase; the offset is dropped.

    With ``theta = gamma J_ij``, ``exp(-i theta s_i s_j)`` becomes
    ``controlled_phase(4 theta)`` followed by ``phase(-2 theta)`` on both
    qubits. Because bit 1 carries spin +1, a field term
    ``exp(-i gamma h s_i)`` is ``phase(2 gamma h)``.
    """
    ops = []
    for (i, j), J in m.couplings.items():
        theta = gamma * J
        ops.append(GateOp("controlled_phase", (i, j), 4 * theta))
        ops.append(GateOp("phase", (i,), -2 * theta))
        ops.append(GateOp("phase", (j,), -2 * theta))
    for i, h in m.fields.items():
        ops.append(GateOp("phase", (i,), 2 * gamma * h))
    return Circuit(m.n_spins, tuple(ops))


def compile_qaoa_circuit(m: IsingProblem, angles: AngleSchedule) -> Circuit:
    n = m.n_spins
    circ = Circuit(n, tuple(GateOp("hadamard", (q,)) for q in range(n)))
    for gamma, beta in zip(angles.gammas, angles.betas):
        circ = circ + compile_cost_unitary(m, gamma)
        circ = circ + Circuit(n, tuple(GateOp("rx", (q,), 2 * beta) for q in range(n)))
    return circ


def apply_gate(psi: StateVector, op: GateOp) -> StateVector:
    if op.kind == "hadamard":
        return sv.apply_hadamard(psi, op.qubits[0])
    if op.kind == "rx":
        # rx(theta) = exp(-i theta X / 2)
        return sv.apply_rx(psi, op.qubits[0], op.angle / 2)
    if op.kind == "phase":
        return sv.apply_single_qubit_phase(psi, op.qubits[0], op.angle)
    return sv.apply_controlled_phase(psi, op.qubits[:-1], op.qubits[-1], op.angle)


def simulate_circuit(c: Circuit, initial: StateVector | None = None,
                     max_qubits: int = MAX_QUBITS) -> StateVector:
    """Run ``c`` on ``|0...0>`` (or on ``initial``)."""
    if initial is None:
        if c.n_qubits > max_qubits:
            raise ResourceLimitError(f"{c.n_qubits} qubits exceeds the limit of {max_qubits}")
        psi = StateVector.basis(c.n_qubits)
    else:
        psi = initial
    for op in c.ops:
        psi = apply_gate(psi, op)
    return psi


def _num(x: float) -> str:
    # repr gives the shortest round-tripping form; +0.0 folds away -0.0
    return repr(float(x) + 0.0)


def export_openqasm(c: Circuit) -> str:
    """OpenQASM 2.0 text for ``c`` followed by a measurement of every qubit.

    qelib1's ``u1(l) = diag(1, exp(+i l))`` has the opposite sign to
    ``phase``, so ``phase(g)`` is written ``u1(-g)`` and a controlled phase
    ``cu1(-g)``.
    """
    n = c.n_qubits
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{n}];", f"creg c[{n}];"]
    for op in c.ops:
        if op.kind == "hadamard":
            lines.append(f"h q[{op.qubits[0]}];")
        elif op.kind == "rx":
            lines.append(f"rx({_num(op.angle)}) q[{op.qubits[0]}];")
        elif op.kind == "phase":
            lines.append(f"u1({_num(-op.angle)}) q[{op.qubits[0]}];")
        else:
            if len(op.qubits) != 2:
                raise UnsupportedGateError(
                    f"controlled_phase with {len(op.qubits) - 1} controls has no qelib1 equivalent"
                )
            a, b = op.qubits
            lines.append(f"cu1({_num(-op.angle)}) q[{a}],q[{b}];")
    lines += [f"measure q[{q}] -> c[{q}];" for q in range(n)]
    return "\n".join(lines) + "\n"
