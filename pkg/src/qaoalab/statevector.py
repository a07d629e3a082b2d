"""Dense state-vector simulation for the gates QAOA needs.

Every operation has value semantics: it returns a new :class:`StateVector`
and leaves its input untouched. Qubit 0 is the most significant bit of the
amplitude index (see :mod:`qaoalab.problems`).

Norm drift is asserted after each gate while Python runs without ``-O``;
sampling always checks it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError, ShapeError
from .problems import MAX_QUBITS, CostSpectrum

NORM_TOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        n = self.n_qubits
        if amps.shape != (1 << n,):
            raise ShapeError(f"{n} qubits need {1 << n} amplitudes, got shape {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize=False):
        amps = np.asarray(amplitudes, dtype=complex)
        n = int(round(math.log2(amps.size))) if amps.size else 0
        if amps.ndim != 1 or n < 1 or (1 << n) != amps.size:
            raise ShapeError(f"amplitude count {amps.size} is not a power of two >= 2")
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    @classmethod
    def basis(cls, n, index=0):
        amps = np.zeros(1 << n, dtype=complex)
        amps[index] = 1.0
        return cls(n, amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        """``<self|other>``."""
        if other.n_qubits != self.n_qubits:
            raise ShapeError("states have different qubit counts")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def tensor(self, other: "StateVector") -> "StateVector":
        """``|self>|other>``; ``other``'s qubits follow this state's."""
        return StateVector(
            self.n_qubits + other.n_qubits, np.kron(self.amplitudes, other.amplitudes)
        )


@dataclass(frozen=True)
class SampleCounts:
    shots: int
    counts: dict

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to shots")

    def most_common(self, k=None):
        ranked = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked if k is None else ranked[:k]

    def mean(self, values) -> float:
        """Empirical mean of ``values[z]`` over the recorded samples."""
        total = sum(c * float(values[z]) for z, c in self.counts.items())
        return total / self.shots


def _checked(n, amps) -> StateVector:
    if __debug__:
        drift = abs(float(np.vdot(amps, amps).real) - 1.0)
        assert drift <= NORM_TOL, f"norm drift {drift:.3e}"
    return StateVector(n, amps)


def _check_qubit(psi, q):
    if not 0 <= q < psi.n_qubits:
        raise IndexError(f"qubit {q} out of range for {psi.n_qubits} qubits")


def _split(amps, n, q):
    """View amplitudes as ``(high, 2, low)`` with the middle axis being qubit ``q``."""
    return amps.reshape(1 << q, 2, 1 << (n - 1 - q))


def uniform_superposition(n: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    if n < 1:
        raise ValueError("need at least one qubit")
    if n > max_qubits:
        raise ResourceLimitError(f"{n} qubits exceeds the limit of {max_qubits}")
    return StateVector(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=complex))


def apply_diagonal_phase(psi: StateVector, s: CostSpectrum, gamma: float) -> StateVector:
    """Multiply amplitude ``z`` by ``exp(-i gamma P(z))``."""
    if s.n_qubits != psi.n_qubits:
        raise ShapeError(f"spectrum has {s.n_qubits} qubits, state has {psi.n_qubits}")
    return _checked(psi.n_qubits, psi.amplitudes * np.exp(-1j * gamma * s.values))


def _rx_inplace(amps, n, q, c, s):
    v = _split(amps, n, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = c * a0 + s * a1
    v[:, 1, :] = s * a0 + c * a1


def apply_rx(psi: StateVector, q: int, beta: float) -> StateVector:
    """``exp(-i beta X)`` on qubit ``q``."""
    _check_qubit(psi, q)
    amps = psi.amplitudes.copy()
    _rx_inplace(amps, psi.n_qubits, q, math.cos(beta), -1j * math.sin(beta))
    return _checked(psi.n_qubits, amps)


def apply_rx_all(psi: StateVector, beta: float) -> StateVector:
    """The mixer ``prod_q exp(-i beta X_q)``."""
    amps = psi.amplitudes.copy()
    c, s = math.cos(beta), -1j * math.sin(beta)
    for q in range(psi.n_qubits):
        _rx_inplace(amps, psi.n_qubits, q, c, s)
    return _checked(psi.n_qubits, amps)


def apply_hadamard(psi: StateVector, q: int) -> StateVector:
    _check_qubit(psi, q)
    amps = psi.amplitudes.copy()
    v = _split(amps, psi.n_qubits, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :].copy()
    r = 1 / math.sqrt(2)
    v[:, 0, :] = r * (a0 + a1)
    v[:, 1, :] = r * (a0 - a1)
    return _checked(psi.n_qubits, amps)


def apply_single_qubit_phase(psi: StateVector, q: int, gamma: float) -> StateVector:
    """``R(gamma) = diag(1, exp(-i gamma))`` on qubit ``q``."""
    return apply_controlled_phase(psi, (), q, gamma)


def apply_controlled_phase(psi: StateVector, controls, target: int, gamma: float) -> StateVector:
    """``R(gamma)`` on ``target`` when every control qubit is 1.

    An empty control set reduces to :func:`apply_single_qubit_phase`.
    """
    controls = tuple(int(c) for c in controls)
    for q in controls + (target,):
        _check_qubit(psi, q)
    if target in controls:
        raise IndexError(f"target {target} is also a control")
    if len(set(controls)) != len(controls):
        raise IndexError("repeated control qubit")
    n = psi.n_qubits
    amps = psi.amplitudes.copy()
    view = amps.reshape((2,) * n)
    sel = [slice(None)] * n
    for q in controls + (target,):
        sel[q] = 1
    view[tuple(sel)] *= np.exp(-1j * gamma)
    return _checked(n, amps)


def expectation_diagonal(psi: StateVector, s: CostSpectrum) -> float:
    """``sum_z |a_z|^2 P(z)``."""
    if s.n_qubits != psi.n_qubits:
        raise ShapeError(f"spectrum has {s.n_qubits} qubits, state has {psi.n_qubits}")
    return float(np.dot(psi.probabilities(), s.values))


def measure_sample(psi: StateVector, shots: int, seed: int) -> SampleCounts:
    """Draw ``shots`` basis indices from ``|a_z|^2`` by inverse CDF.

    Uses numpy's PCG64 generator seeded with ``seed``; the same seed and state
    always give the same counts.
    """
    if isinstance(shots, bool) or int(shots) != shots or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")
    probs = psi.probabilities()
    drift = abs(probs.sum() - 1.0)
    if drift > NORM_TOL:
        raise ValueError(f"state norm drifted by {drift:.3e} before measurement")
    cdf = np.cumsum(probs)
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(int(shots)) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, probs.size - 1)
    values, counts = np.unique(idx, return_counts=True)
    return SampleCounts(int(shots), {int(v): int(c) for v, c in zip(values, counts)})
