"""Command-line front end.

    qaoalab solve --problem graph.txt --p 1 --optimizer multistart
    qaoalab landscape --problem graph.txt --method formula --resolution 21
    qaoalab export-qasm --problem graph.txt --gamma 0.6 --beta 0.4 --out c.qasm
    qaoalab brute-force --qubo q.txt
    qaoalab sample --problem graph.txt --gamma 0.6 --beta 0.4 --shots 1000

Exit codes: 0 success, 1 I/O or other failure, 2 parse or usage error,
3 resource limit, 4 numeric error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .circuit import AngleSchedule, build_qaoa_state, compile_qaoa_circuit, export_openqasm
from .errors import (
    NumericError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    UnsupportedMethodError,
)
from .expectation import make_objective, p1_trace_expectation_maxcut
from .formats import read_edge_list, read_qubo
from .optimize import AngleBounds, grid_search, multi_start, nelder_mead
from .problems import (
    CostSpectrum,
    Graph,
    IsingProblem,
    QuboProblem,
    bitstring,
    brute_force_optimum,
    build_cost_spectrum,
    maxcut_to_ising,
    qubo_to_ising,
)
from .statevector import expectation_diagonal, measure_sample

SCHEMA_VERSION = 1
DEFAULT_SHOTS = 2048
TOP_K = 8

EXIT_OK, EXIT_FAILURE, EXIT_PARSE, EXIT_RESOURCE, EXIT_NUMERIC = 0, 1, 2, 3, 4


@dataclass
class Problem:
    """A loaded instance together with its Ising form and cost spectrum."""

    kind: str
    source: str | None
    ising: IsingProblem
    spectrum: CostSpectrum
    sense: str
    graph: Graph | None = None
    qubo: QuboProblem | None = None

    @property
    def n(self) -> int:
        return self.ising.n_spins

    @property
    def target(self) -> CostSpectrum:
        """Spectrum QAOA maximizes: the cost itself, or its negation for minimization."""
        return self.spectrum if self.sense == "max" else -self.spectrum

    @classmethod
    def from_graph(cls, g: Graph, source=None, sense="max"):
        ising = maxcut_to_ising(g)
        return cls("maxcut", source, ising, build_cost_spectrum(ising), sense, graph=g)

    @classmethod
    def from_qubo(cls, q: QuboProblem, source=None, sense="min"):
        ising = qubo_to_ising(q)
        return cls("qubo", source, ising, build_cost_spectrum(ising), sense, qubo=q)


@dataclass
class RunConfig:
    problem: Problem
    p: int = 1
    objective: str = "f"
    eta: float = 1.0
    optimizer: str = "multistart"
    resolution: int = 51
    starts: int = 20
    shots: int = DEFAULT_SHOTS
    seed: int = 0
    bounds: AngleBounds = field(default_factory=AngleBounds)

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if self.shots < 0:
            raise ValueError("shots must be non-negative")


def load_problem(edge_list=None, qubo=None, sense=None) -> Problem:
    if (edge_list is None) == (qubo is None):
        raise ValueError("give exactly one of --problem or --qubo")
    if edge_list is not None:
        return Problem.from_graph(read_edge_list(edge_list), str(edge_list), sense or "max")
    return Problem.from_qubo(read_qubo(qubo), str(qubo), sense or "min")


def optimize_angles(cfg: RunConfig):
    s = cfg.problem.target
    objective = make_objective(s, cfg.objective, cfg.eta)
    if cfg.optimizer == "grid":
        return grid_search(objective, cfg.p, cfg.bounds, cfg.resolution, "max")
    if cfg.optimizer == "nm":
        lo, hi = cfg.bounds.box(cfg.p)
        start = AngleSchedule.from_flat((lo + hi) / 2)
        return nelder_mead(objective, cfg.p, start, cfg.bounds, sense="max")
    if cfg.optimizer == "multistart":
        return multi_start(objective, cfg.p, cfg.bounds, cfg.starts, cfg.seed, "max")
    raise ValueError(f"unknown optimizer {cfg.optimizer!r}")


def _better(a, b, sense):
    return a > b if sense == "max" else a < b


def _approximation_ratio(best_cost, optimum):
    if best_cost == optimum:
        return 1.0
    if optimum > 0:
        return best_cost / optimum
    return None


def _problem_info(pr: Problem):
    info = {"kind": pr.kind, "source": pr.source, "n": pr.n, "sense": pr.sense}
    if pr.graph is not None:
        info["edges"] = pr.graph.n_edges
    else:
        info["terms"] = len(pr.qubo.coefficients)
    return info


def _angles_json(angles: AngleSchedule):
    return {"gammas": list(angles.gammas), "betas": list(angles.betas)}


def _top_assignments(pr: Problem, probs, k=TOP_K):
    order = np.lexsort((np.arange(probs.size), -probs))[:k]
    return [
        {"bits": bitstring(int(z), pr.n), "probability": float(probs[z]), "cost": float(pr.spectrum.values[z])}
        for z in order
    ]


def run_solve(cfg: RunConfig) -> dict:
    """Optimize, evaluate and (optionally) sample; returns the JSON report."""
    pr = cfg.problem
    result = optimize_angles(cfg)
    angles = result.best_angles
    psi = build_qaoa_state(pr.target, angles)
    exact = expectation_diagonal(psi, pr.spectrum)
    optimum, argopt = brute_force_optimum(pr.spectrum, pr.sense)
    objective = {"kind": cfg.objective}
    if cfg.objective == "gibbs":
        objective["eta"] = cfg.eta
    objective["value"] = result.best_value
    report = {
        "schema": SCHEMA_VERSION,
        "command": "solve",
        "problem": _problem_info(pr),
        "p": cfg.p,
        "objective": objective,
        "optimizer": {"kind": cfg.optimizer, "seed": cfg.seed, "evaluations": result.evaluations},
        "angles": _angles_json(angles),
        "exact_F": exact,
        "top_assignments": _top_assignments(pr, psi.probabilities()),
        "brute_force": {
            "optimum": optimum,
            "assignments": [bitstring(z, pr.n) for z in argopt],
        },
    }
    if cfg.optimizer == "multistart":
        report["optimizer"]["starts"] = cfg.starts
    if cfg.optimizer == "grid":
        report["optimizer"]["resolution"] = cfg.resolution
    if cfg.shots > 0:
        counts = measure_sample(psi, cfg.shots, cfg.seed)
        values = pr.spectrum.values
        best_z = None
        for z in sorted(counts.counts):
            if best_z is None or _better(values[z], values[best_z], pr.sense):
                best_z = z
        best_cost = float(values[best_z])
        sampling = {
            "shots": cfg.shots,
            "seed": cfg.seed,
            "mean": counts.mean(values),
            "best_assignment": bitstring(best_z, pr.n),
            "best_cost": best_cost,
        }
        ratio = _approximation_ratio(best_cost, optimum)
        if ratio is not None:
            sampling["approximation_ratio"] = ratio
        report["sampling"] = sampling
    return report


def landscape_rows(pr: Problem, method: str, resolution: int, bounds: AngleBounds | None = None):
    """``(gamma, beta, F)`` over an inclusive grid, gamma-major. F is in cost units."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    bounds = bounds or AngleBounds()
    gammas = np.linspace(*bounds.gamma_range, resolution)
    betas = np.linspace(*bounds.beta_range, resolution)
    f = _landscape_evaluator(pr, method)
    return [(float(g), float(b), float(f(float(g), float(b)))) for g in gammas for b in betas]


def _landscape_evaluator(pr: Problem, method):
    if method == "simulate":
        return lambda g, b: expectation_diagonal(
            build_qaoa_state(pr.spectrum, AngleSchedule((g,), (b,))), pr.spectrum
        )
    if method == "formula":
        if pr.graph is not None:
            f = analytic.closed_form_for(pr.graph)
            if f is None:
                raise UnsupportedMethodError(
                    "no closed form for this graph (not the butterfly, the Moser spindle or triangle-free)"
                )
            return f
        try:
            analytic.triangle_free_ising_expectation(pr.ising, 0.0, 0.0)
        except PreconditionError as exc:
            raise UnsupportedMethodError(f"no closed form for this QUBO: {exc}") from None
        return lambda g, b: analytic.triangle_free_ising_expectation(pr.ising, g, b)
    if method in ("decompose", "trace"):
        if pr.graph is None:
            raise UnsupportedMethodError(f"method {method!r} needs a MaxCut graph")
        if method == "trace":
            return lambda g, b: p1_trace_expectation_maxcut(pr.graph, g, b)
        classes = analytic.subgraph_classes(pr.graph, 1)
        return lambda g, b: sum(
            c.multiplicity * analytic.edge_contribution(c.representative, AngleSchedule((g,), (b,)))
            for c in classes
        )
    raise UnsupportedMethodError(f"unknown method {method!r}")


def run_brute_force(pr: Problem) -> dict:
    optimum, argopt = brute_force_optimum(pr.spectrum, pr.sense)
    return {
        "schema": SCHEMA_VERSION,
        "command": "brute-force",
        "problem": _problem_info(pr),
        "optimum": optimum,
        "assignments": [bitstring(z, pr.n) for z in argopt],
    }


def run_sample(pr: Problem, angles: AngleSchedule, shots: int, seed: int) -> dict:
    psi = build_qaoa_state(pr.target, angles)
    counts = measure_sample(psi, shots, seed)
    return {
        "schema": SCHEMA_VERSION,
        "command": "sample",
        "problem": _problem_info(pr),
        "angles": _angles_json(angles),
        "shots": shots,
        "seed": seed,
        "exact_F": expectation_diagonal(psi, pr.spectrum),
        "mean": counts.mean(pr.spectrum.values),
        "counts": {bitstring(z, pr.n): c for z, c in sorted(counts.counts.items())},
    }


# --------------------------------------------------------------------------
# argument handling and output


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _text(obj, indent=0) -> str:
    out = []
    pad = "  " * indent
    for key, value in obj.items():
        if isinstance(value, dict):
            out.append(f"{pad}{key}:")
            out.append(_text(value, indent + 1).rstrip("\n"))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            out.append(f"{pad}{key}:")
            for item in value:
                out.append(pad + "  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
        elif isinstance(value, list):
            out.append(f"{pad}{key}: {' '.join(str(v) for v in value)}")
        else:
            out.append(f"{pad}{key}: {value}")
    return "\n".join(out) + "\n"


def _cell(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _csv(header, rows) -> str:
    return ",".join(header) + "\n" + "".join(",".join(_cell(v) for v in r) + "\n" for r in rows)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _add_problem_args(sp):
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--problem", metavar="PATH", help="MaxCut edge-list file")
    src.add_argument("--qubo", metavar="PATH", help="QUBO coefficient file")
    sp.add_argument("--sense", choices=("max", "min"),
                    help="optimization sense (default: max for MaxCut, min for QUBO)")
    sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def _add_optimizer_args(sp):
    sp.add_argument("--p", type=int, default=1, help="number of QAOA layers")
    sp.add_argument("--objective", choices=("f", "gibbs"), default="f")
    sp.add_argument("--eta", type=float, default=1.0, help="Gibbs inverse temperature")
    sp.add_argument("--optimizer", choices=("grid", "nm", "multistart"), default="multistart")
    sp.add_argument("--resolution", type=int, default=51, help="grid points per angle axis")
    sp.add_argument("--starts", type=int, default=20, help="random starts for multistart")
    sp.add_argument("--seed", type=int, default=0)


def _add_angle_args(sp):
    sp.add_argument("--gamma", type=float, action="append",
                    help="cost angle; repeat once per layer (omit to optimize)")
    sp.add_argument("--beta", type=float, action="append",
                    help="mixer angle; repeat once per layer (omit to optimize)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaoalab", description="State-vector QAOA toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="optimize angles, sample, and compare with brute force")
    _add_problem_args(sp)
    _add_optimizer_args(sp)
    sp.add_argument("--shots", type=int, default=DEFAULT_SHOTS, help="0 for exact evaluation only")
    sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = sub.add_parser("landscape", help="tabulate F over a (gamma, beta) grid")
    _add_problem_args(sp)
    sp.add_argument("--method", choices=("formula", "simulate", "decompose", "trace"), default="simulate")
    sp.add_argument("--resolution", type=int, default=21)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("export-qasm", help="write the QAOA circuit as OpenQASM 2.0")
    _add_problem_args(sp)
    _add_optimizer_args(sp)
    _add_angle_args(sp)

    sp = sub.add_parser("brute-force", help="exhaustive optimum and all optimal assignments")
    _add_problem_args(sp)
    sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = sub.add_parser("sample", help="measure the ansatz state")
    _add_problem_args(sp)
    _add_optimizer_args(sp)
    _add_angle_args(sp)
    sp.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    return parser


def _config(args, pr) -> RunConfig:
    return RunConfig(
        problem=pr, p=args.p, objective=args.objective, eta=args.eta,
        optimizer=args.optimizer, resolution=args.resolution, starts=args.starts,
        shots=getattr(args, "shots", DEFAULT_SHOTS), seed=args.seed,
    )


def _angles(args, pr) -> AngleSchedule:
    if args.gamma is None and args.beta is None:
        return optimize_angles(_config(args, pr)).best_angles
    if args.gamma is None or args.beta is None or len(args.gamma) != len(args.beta):
        raise ValueError("give the same number of --gamma and --beta values")
    return AngleSchedule(tuple(args.gamma), tuple(args.beta))


def _dispatch(args) -> str:
    pr = load_problem(args.problem, args.qubo, args.sense)
    if args.command == "solve":
        report = run_solve(_config(args, pr))
        return _json(report) if args.format == "json" else _text(report)
    if args.command == "landscape":
        rows = landscape_rows(pr, args.method, args.resolution)
        if args.format == "csv":
            return _csv(("gamma", "beta", "F"), rows)
        return _json({
            "schema": SCHEMA_VERSION, "command": "landscape", "method": args.method,
            "problem": _problem_info(pr),
            "rows": [{"gamma": g, "beta": b, "F": f} for g, b, f in rows],
        })
    if args.command == "export-qasm":
        return export_openqasm(compile_qaoa_circuit(pr.ising, _angles(args, pr)))
    if args.command == "brute-force":
        report = run_brute_force(pr)
        return _json(report) if args.format == "json" else _text(report)
    if args.command == "sample":
        report = run_sample(pr, _angles(args, pr), args.shots, args.seed)
        if args.format == "csv":
            return _csv(("assignment", "count"), list(report["counts"].items()))
        return _json(report) if args.format == "json" else _text(report)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = _dispatch(args)
        _emit(text, args.out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UnsupportedMethodError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
