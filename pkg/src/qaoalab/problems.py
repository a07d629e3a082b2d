"""MaxCut, QUBO and Ising encodings, cost spectra and the brute-force oracle.

Conventions used throughout the package:

* qubit 0 is the most significant bit of a basis-state index, so the ket
  ``|z_0 z_1 ... z_{n-1}>`` reads left to right (``|10>`` is index 2);
* bit 0 maps to spin -1 and bit 1 to spin +1 (``s = 2x - 1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidAssignmentError, ResourceLimitError

MAX_QUBITS = 24


def _check_count(n, what):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"{what} must be a positive integer, got {n!r}")
    return int(n)


def _finite(x, what):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{what} must be finite, got {x!r}")
    return x


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph on vertices ``0 .. n_vertices-1``.

    Edges are stored in canonical ``(low, high)`` order; pairs given the other
    way round are flipped on construction. Self-loops and duplicates raise.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...] = ()
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        n = _check_count(self.n_vertices, "n_vertices")
        edges = []
        seen = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if i > j:
                i, j = j, i
            if i < 0 or j >= n:
                raise ValueError(f"edge ({i}, {j}) out of range for {n} vertices")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            edges.append((i, j))
        if self.weights is None:
            weights = (1.0,) * len(edges)
        else:
            if len(self.weights) != len(edges):
                raise ValueError("weights and edges differ in length")
            weights = tuple(_finite(w, "edge weight") for w in self.weights)
        object.__setattr__(self, "n_vertices", n)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_weighted_edges(cls, n_vertices, triples):
        """Build from ``(i, j)`` or ``(i, j, w)`` tuples."""
        edges, weights = [], []
        for t in triples:
            edges.append((t[0], t[1]))
            weights.append(t[2] if len(t) > 2 else 1.0)
        return cls(n_vertices, tuple(edges), tuple(weights))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> float:
        return float(sum(self.weights))

    @property
    def is_unit_weight(self) -> bool:
        return all(w == 1.0 for w in self.weights)

    def weight(self, i, j) -> float:
        key = (i, j) if i < j else (j, i)
        for e, w in zip(self.edges, self.weights):
            if e == key:
                return w
        raise KeyError(key)

    def has_edge(self, i, j) -> bool:
        key = (i, j) if i < j else (j, i)
        return key in self.edges

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n_vertices)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def weighted_edges(self):
        return [(i, j, w) for (i, j), w in zip(self.edges, self.weights)]


@dataclass(frozen=True)
class QuboProblem:
    """Binary quadratic objective ``sum_{i<=j} J_ij x_i x_j`` with ``x in {0,1}``.

    Diagonal entries act as linear terms because ``x_i**2 == x_i``.
    """

    n_vars: int
    coefficients: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        n = _check_count(self.n_vars, "n_vars")
        coeffs = {}
        for key, value in self.coefficients.items():
            i, j = (int(k) for k in key)
            if not 0 <= i <= j < n:
                raise ValueError(f"QUBO key ({i}, {j}) must satisfy 0 <= i <= j < {n}")
            coeffs[(i, j)] = _finite(value, f"coefficient ({i}, {j})")
        object.__setattr__(self, "n_vars", n)
        object.__setattr__(self, "coefficients", dict(sorted(coeffs.items())))

    @classmethod
    def from_matrix(cls, matrix):
        """Fold a square matrix into upper-triangular form (``J_ij + J_ji`` above the diagonal)."""
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("QUBO matrix must be square")
        n = m.shape[0]
        coeffs = {}
        for i in range(n):
            for j in range(i, n):
                v = m[i, i] if i == j else m[i, j] + m[j, i]
                if v != 0.0:
                    coeffs[(i, j)] = float(v)
        return cls(n, coeffs)


@dataclass(frozen=True)
class IsingProblem:
    """Spin objective ``offset + sum_{i<j} J_ij s_i s_j + sum_i h_i s_i``."""

    n_spins: int
    couplings: Mapping[tuple[int, int], float] = field(default_factory=dict)
    fields: Mapping[int, float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self):
        n = _check_count(self.n_spins, "n_spins")
        couplings = {}
        for key, value in self.couplings.items():
            i, j = (int(k) for k in key)
            if not 0 <= i < j < n:
                raise ValueError(f"coupling key ({i}, {j}) must satisfy 0 <= i < j < {n}")
            couplings[(i, j)] = _finite(value, f"coupling ({i}, {j})")
        fields = {}
        for key, value in self.fields.items():
            i = int(key)
            if not 0 <= i < n:
                raise ValueError(f"field index {i} out of range for {n} spins")
            fields[i] = _finite(value, f"field {i}")
        object.__setattr__(self, "n_spins", n)
        object.__setattr__(self, "couplings", dict(sorted(couplings.items())))
        object.__setattr__(self, "fields", dict(sorted(fields.items())))
        object.__setattr__(self, "offset", _finite(self.offset, "offset"))

    def coupling_graph(self) -> Graph:
        """Graph of the nonzero couplings, weighted by ``J_ij``."""
        items = [(k, v) for k, v in self.couplings.items() if v != 0.0]
        return Graph(self.n_spins, tuple(k for k, _ in items), tuple(v for _, v in items))


@dataclass(frozen=True)
class CostSpectrum:
    """Diagonal of a cost operator: ``values[z]`` is the cost of basis state ``z``."""

    n_qubits: int
    values: np.ndarray

    def __post_init__(self):
        n = _check_count(self.n_qubits, "n_qubits")
        values = np.array(self.values, dtype=float)
        if values.shape != (1 << n,):
            raise ValueError(f"spectrum needs {1 << n} entries, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("spectrum entries must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "values", values)

    def __neg__(self):
        return CostSpectrum(self.n_qubits, -self.values)

    @property
    def min(self) -> float:
        return float(self.values.min())

    @property
    def max(self) -> float:
        return float(self.values.max())


# --------------------------------------------------------------------------
# assignments and basis indices


def index_to_bits(z: int, n: int) -> tuple[int, ...]:
    """Bits of basis index ``z``; qubit 0 is the most significant."""
    if not 0 <= z < (1 << n):
        raise ValueError(f"index {z} out of range for {n} qubits")
    return tuple((z >> (n - 1 - q)) & 1 for q in range(n))


def bits_to_index(bits: Sequence[int]) -> int:
    z = 0
    for b in bits:
        z = (z << 1) | int(b)
    return z


def bitstring(z: int, n: int) -> str:
    return format(z, f"0{n}b")


def all_assignments(n: int) -> np.ndarray:
    """Every assignment as a ``(2**n, n)`` uint8 array, row ``z`` decoding index ``z``."""
    z = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((z[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def _as_bits(a, n) -> np.ndarray:
    """Coerce one assignment (shape ``(n,)``) or a batch (``(k, n)``) to a uint8 array."""
    if isinstance(a, str):
        a = [c for c in a.strip()]
    try:
        arr = np.asarray(a, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise InvalidAssignmentError(f"cannot read assignment {a!r}") from exc
    if arr.ndim not in (1, 2) or arr.shape[-1] != n:
        raise InvalidAssignmentError(
            f"assignment has shape {arr.shape}, expected ({n},) or (k, {n})"
        )
    if np.any((arr != 0) & (arr != 1)):
        raise InvalidAssignmentError("assignment entries must be 0 or 1")
    return arr.astype(np.uint8)


def _scalar_or_array(values, batched):
    return values if batched else float(values[0])


def maxcut_cost(g: Graph, a) -> float | np.ndarray:
    """Total weight of edges whose endpoints land on different sides.

    ``a`` may be a single assignment (sequence of bits or a bit string) or a
    2-D batch of assignments, in which case an array of costs is returned.
    """
    bits = _as_bits(a, g.n_vertices)
    batched = bits.ndim == 2
    bits = np.atleast_2d(bits).astype(np.int64)
    total = np.zeros(bits.shape[0])
    for (i, j), w in zip(g.edges, g.weights):
        total += w * (bits[:, i] != bits[:, j])
    return _scalar_or_array(total, batched)


def qubo_value(q: QuboProblem, a) -> float | np.ndarray:
    bits = _as_bits(a, q.n_vars)
    batched = bits.ndim == 2
    x = np.atleast_2d(bits).astype(float)
    total = np.zeros(x.shape[0])
    for (i, j), c in q.coefficients.items():
        total += c * x[:, i] * x[:, j]
    return _scalar_or_array(total, batched)


def ising_value(m: IsingProblem, a) -> float | np.ndarray:
    bits = _as_bits(a, m.n_spins)
    batched = bits.ndim == 2
    s = 2.0 * np.atleast_2d(bits) - 1.0
    total = np.full(s.shape[0], m.offset)
    for (i, j), c in m.couplings.items():
        total += c * s[:, i] * s[:, j]
    for i, h in m.fields.items():
        total += h * s[:, i]
    return _scalar_or_array(total, batched)


def qubo_to_ising(q: QuboProblem) -> IsingProblem:
    """Rewrite a QUBO over spins via ``x = (1 + s) / 2``.

    ``J x_i x_j`` expands to ``J/4 (1 + s_i + s_j + s_i s_j)`` and a diagonal
    ``J x_i`` to ``J/2 (1 + s_i)``.
    """
    couplings: dict[tuple[int, int], float] = {}
    fields: dict[int, float] = {}
    offset = 0.0
    for (i, j), c in q.coefficients.items():
        if i == j:
            fields[i] = fields.get(i, 0.0) + c / 2
            offset += c / 2
        else:
            couplings[(i, j)] = couplings.get((i, j), 0.0) + c / 4
            fields[i] = fields.get(i, 0.0) + c / 4
            fields[j] = fields.get(j, 0.0) + c / 4
            offset += c / 4
    return IsingProblem(q.n_vars, couplings, fields, offset)


def maxcut_to_ising(g: Graph) -> IsingProblem:
    """Each edge contributes ``w/2 (1 - s_i s_j)``."""
    couplings = {e: -w / 2 for e, w in zip(g.edges, g.weights)}
    return IsingProblem(g.n_vertices, couplings, {}, g.total_weight / 2)


def _spin_column(n, q):
    z = np.arange(1 << n, dtype=np.int64)
    return (2 * ((z >> (n - 1 - q)) & 1) - 1).astype(np.int8)


def build_cost_spectrum(m: IsingProblem, max_qubits: int = MAX_QUBITS) -> CostSpectrum:
    """Tabulate ``ising_value`` over all ``2**n`` basis indices."""
    n = m.n_spins
    if n > max_qubits:
        raise ResourceLimitError(f"{n} spins exceeds the qubit limit of {max_qubits}")
    cols: dict[int, np.ndarray] = {}

    def spin(q):
        if q not in cols:
            cols[q] = _spin_column(n, q)
        return cols[q]

    values = np.full(1 << n, m.offset)
    for (i, j), c in m.couplings.items():
        values += c * (spin(i) * spin(j))
    for i, h in m.fields.items():
        values += h * spin(i)
    return CostSpectrum(n, values)


def maxcut_spectrum(g: Graph, max_qubits: int = MAX_QUBITS) -> CostSpectrum:
    return build_cost_spectrum(maxcut_to_ising(g), max_qubits)


def qubo_spectrum(q: QuboProblem, max_qubits: int = MAX_QUBITS) -> CostSpectrum:
    return build_cost_spectrum(qubo_to_ising(q), max_qubits)


def brute_force_optimum(s: CostSpectrum, sense: str = "max", atol: float = 1e-12):
    """Extreme spectrum value and every index attaining it.

    Returns ``(value, indices)`` with indices ascending. Values within ``atol``
    of the extremum count as ties, which absorbs rounding in weighted
    instances whose optima come in complement pairs.
    """
    if sense not in ("max", "min"):
        raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")
    values = s.values
    best = values.max() if sense == "max" else values.min()
    idx = np.flatnonzero(np.abs(values - best) <= atol)
    return float(best), tuple(int(i) for i in idx)


def complement(bits: Iterable[int]) -> tuple[int, ...]:
    return tuple(1 - int(b) for b in bits)
