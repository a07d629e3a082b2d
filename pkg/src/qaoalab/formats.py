"""Readers and writers for the edge-list and QUBO text formats.

Both formats are line oriented and 0-indexed; ``#`` starts a comment and blank
lines are ignored. The first content line is ``n <count>``.

Edge list::

    n 5
    0 1
    0 2 1.5

QUBO (``i <= j``; diagonal entries are linear terms)::

    n 2
    0 0 -1
    0 1 2
"""

from __future__ import annotations

import math
from pathlib import Path

from .errors import ParseError
from .problems import Graph, QuboProblem


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(tok, lineno, source):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno, source) from None


def _float(tok, lineno, source):
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"expected a number, got {tok!r}", lineno, source) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value {tok!r}", lineno, source)
    return v


def _header(lines, source):
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise ParseError("empty file: missing 'n <count>' header", None, source) from None
    if len(toks) != 2 or toks[0] != "n":
        raise ParseError("first line must be 'n <count>'", lineno, source)
    n = _int(toks[1], lineno, source)
    if n < 1:
        raise ParseError(f"count must be positive, got {n}", lineno, source)
    return n


def parse_edge_list(text: str, source: str | None = None) -> Graph:
    lines = _content_lines(text)
    n = _header(lines, source)
    edges, weights, seen = [], [], {}
    for lineno, toks in lines:
        if len(toks) not in (2, 3):
            raise ParseError("expected 'i j [weight]'", lineno, source)
        i, j = _int(toks[0], lineno, source), _int(toks[1], lineno, source)
        w = _float(toks[2], lineno, source) if len(toks) == 3 else 1.0
        for v in (i, j):
            if not 0 <= v < n:
                raise ParseError(f"vertex {v} out of range 0..{n - 1}", lineno, source)
        if i == j:
            raise ParseError(f"self-loop on vertex {i}", lineno, source)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ParseError(f"duplicate edge {key} (first on line {seen[key]})", lineno, source)
        seen[key] = lineno
        edges.append(key)
        weights.append(w)
    return Graph(n, tuple(edges), tuple(weights))


def parse_qubo(text: str, source: str | None = None) -> QuboProblem:
    lines = _content_lines(text)
    n = _header(lines, source)
    coeffs, seen = {}, {}
    for lineno, toks in lines:
        if len(toks) != 3:
            raise ParseError("expected 'i j value'", lineno, source)
        i, j = _int(toks[0], lineno, source), _int(toks[1], lineno, source)
        v = _float(toks[2], lineno, source)
        for idx in (i, j):
            if not 0 <= idx < n:
                raise ParseError(f"index {idx} out of range 0..{n - 1}", lineno, source)
        if i > j:
            raise ParseError(f"entry ({i}, {j}) must have i <= j", lineno, source)
        if (i, j) in seen:
            raise ParseError(f"duplicate entry ({i}, {j}) (first on line {seen[(i, j)]})", lineno, source)
        seen[(i, j)] = lineno
        coeffs[(i, j)] = v
    return QuboProblem(n, coeffs)


def read_edge_list(path) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(), str(path))


def read_qubo(path) -> QuboProblem:
    path = Path(path)
    return parse_qubo(path.read_text(), str(path))


def format_edge_list(g: Graph) -> str:
    out = [f"n {g.n_vertices}"]
    for (i, j), w in zip(g.edges, g.weights):
        out.append(f"{i} {j}" if w == 1.0 else f"{i} {j} {w!r}")
    return "\n".join(out) + "\n"


def format_qubo(q: QuboProblem) -> str:
    out = [f"n {q.n_vars}"]
    out += [f"{i} {j} {v!r}" for (i, j), v in q.coefficients.items()]
    return "\n".join(out) + "\n"
