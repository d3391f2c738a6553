"""Solution evaluation: built-in deterministic problems, an external-command
adapter, and a brute-force oracle.

The surrogate evaluators are smooth analytic stand-ins for full physics
codes.  They are deliberately simple so that optimizer behavior stays
auditable; their outputs reuse familiar objective names but are NOT physics
predictions.
"""
from __future__ import annotations

import math
import shlex
import subprocess
import tempfile
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import CapExceededError, ConfigError, EvaluationError
from .objective import compose_objective
from .problem import EvaluationResult, ProblemDefinition, Solution

Evaluator = Callable[[Solution], EvaluationResult]

DEFAULT_ENUMERATION_CAP = 10**7
DEFAULT_TIMEOUT = 300.0


def evaluate_tsp(sol: Solution, cities: dict[str, tuple[float, float]]) -> EvaluationResult:
    """Closed-tour Euclidean length over a permutation of all cities."""
    if sorted(sol.assignment) != sorted(cities):
        raise ValueError("solution is not a permutation of all cities")
    total = 0.0
    n = len(sol.assignment)
    for i in range(n):
        x1, y1 = cities[sol.assignment[i]]
        x2, y2 = cities[sol.assignment[(i + 1) % n]]
        total += math.hypot(x2 - x1, y2 - y1)
    return {"tour_length": total}


def _attr(problem: ProblemDefinition, decision_id: str, name: str) -> float:
    d = problem.decision(decision_id)
    if name not in d.attributes:
        raise ConfigError(
            f"decision '{decision_id}' is missing attribute '{name}' "
            "required by the configured evaluator"
        )
    return d.attributes[name]


def evaluate_lattice_surrogate(
    sol: Solution, problem: ProblemDefinition, params: dict
) -> EvaluationResult:
    """Reactivity/peaking proxy from per-decision enrichment, poison worth,
    and residual penalty, weighted by guide-tube adjacency."""
    e = np.array([_attr(problem, d, "e") for d in sol.assignment])
    p = np.array([_attr(problem, d, "p") for d in sol.assignment])
    res = np.array([_attr(problem, d, "res") for d in sol.assignment])
    adj = np.asarray(params["adjacency"], dtype=float)
    m = float(params["m"])
    w = e * (1.0 - p) * (1.0 + m * adj)
    k_max = float(params["k0"]) + float(params["a"]) * e.mean() - float(
        params["c"]
    ) * p.mean()
    k_eoc = k_max - float(params["d"]) - res.mean()
    return {
        "k_eoc": float(k_eoc),
        "k_max": float(k_max),
        "pr_max": float(w.max() / w.mean()),
    }


def evaluate_loading_surrogate(
    sol: Solution, problem: ProblemDefinition, params: dict
) -> EvaluationResult:
    """Cycle-length/boron/peaking proxy from per-decision reactivity rho."""
    rho = np.array([_attr(problem, d, "rho") for d in sol.assignment])
    g = np.asarray(params["importance"], dtype=float)
    h = np.asarray(params["peaking"], dtype=float)
    q = rho * h
    fdh = float(q.max() / q.mean())
    return {
        "cycle_length": float(params["c_cl"]) * float((g * rho).sum()),
        "max_boron": float(params["c_sb"]) * float(rho.mean()),
        "FDeltaH": fdh,
        "Fq": float(params["c_fq"]) * fdh,
    }


def _write_request(path: Path, sol: Solution, problem: ProblemDefinition) -> None:
    lines = [f"n={problem.n_variables}"]
    for i, did in enumerate(sol.assignment):
        attrs = problem.decision(did).attributes
        parts = [str(i), did] + [f"{k}={attrs[k]}" for k in sorted(attrs)]
        lines.append(" ".join(parts))
    path.write_text("\n".join(lines) + "\n")


def _read_response(path: Path) -> EvaluationResult:
    if not path.exists():
        raise EvaluationError(f"external command produced no response file {path}")
    values: EvaluationResult = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise EvaluationError(f"{path}:{lineno}: expected 'name = value'")
        name, _, raw = line.partition("=")
        try:
            values[name.strip()] = float(raw.strip())
        except ValueError:
            raise EvaluationError(
                f"{path}:{lineno}: malformed value {raw.strip()!r}"
            ) from None
    return values


def evaluate_external(
    sol: Solution, problem: ProblemDefinition, params: dict
) -> EvaluationResult:
    """Run the configured command in an isolated working directory.

    The solution is written to solution.txt, the command is invoked with the
    directory as its first argument, and objectives.txt is read back.
    """
    command = params["command"]
    if isinstance(command, str):
        command = shlex.split(command)
    timeout = float(params.get("timeout", DEFAULT_TIMEOUT))
    base = params.get("workdir")
    workdir = Path(tempfile.mkdtemp(prefix="combopt-eval-", dir=base))
    _write_request(workdir / "solution.txt", sol, problem)
    try:
        proc = subprocess.run(
            list(command) + [str(workdir)],
            cwd=workdir,
            capture_output=True,
            text=True,
            timeout=timeout,
        )
    except subprocess.TimeoutExpired:
        raise EvaluationError(
            f"external command timed out after {timeout}s in {workdir}"
        ) from None
    if proc.returncode != 0:
        raise EvaluationError(
            f"external command exited {proc.returncode} in {workdir}; "
            f"stderr: {proc.stderr.strip()[:500]}"
        )
    values = _read_response(workdir / "objectives.txt")
    for spec in problem.objectives:
        if spec.name not in values:
            raise EvaluationError(
                f"external response is missing objective '{spec.name}'"
            )
    return values


def make_evaluator(problem: ProblemDefinition) -> Evaluator:
    """Bind the problem's evaluator spec into a pure Solution -> values callable."""
    spec = problem.evaluator
    params = spec.parameters
    if spec.kind == "tsp":
        cities = {
            str(k): (float(v[0]), float(v[1])) for k, v in params["cities"].items()
        }
        return lambda sol: evaluate_tsp(sol, cities)
    if spec.kind == "lattice_surrogate":
        return lambda sol: evaluate_lattice_surrogate(sol, problem, params)
    if spec.kind == "loading_surrogate":
        return lambda sol: evaluate_loading_surrogate(sol, problem, params)
    if spec.kind == "external_command":
        return lambda sol: evaluate_external(sol, problem, params)
    raise ConfigError(f"unknown evaluator kind '{spec.kind}'")


def brute_force_optimum(
    problem: ProblemDefinition,
    evaluator: Evaluator | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Solution, float]:
    """Enumerate every feasible assignment and return an argmax of F.

    Ties keep the first solution in enumeration order.  Refuses upfront when
    the product of per-position allowed counts exceeds the cap.
    """
    if evaluator is None:
        evaluator = make_evaluator(problem)
    specs = problem.objectives
    n = problem.n_variables

    estimate = 1
    for i in range(n):
        if i in problem.fixed_positions:
            continue
        estimate *= max(1, len(problem.allowed_at(i)))
        if estimate > cap:
            raise CapExceededError(estimate, cap)

    remaining = problem.capacities() if problem.group_constrained else None
    used: set[str] = set()
    assignment: list[str | None] = [None] * n
    best: list = [None, -math.inf]

    def recurse(i: int) -> None:
        if i == n:
            sol = Solution(tuple(assignment))
            result = evaluator(sol)
            sol.evaluation = result
            sol.fitness = compose_objective(result, specs).total
            if sol.fitness > best[1]:
                best[0] = sol
                best[1] = sol.fitness
            return
        fixed = problem.fixed_positions.get(i)
        candidates = [fixed] if fixed is not None else problem.allowed_at(i)
        for did in candidates:
            d = problem.decision(did)
            if remaining is not None and remaining[d.group] <= 0:
                continue
            if d.unique and did in used:
                continue
            assignment[i] = did
            if remaining is not None:
                remaining[d.group] -= 1
            if d.unique:
                used.add(did)
            recurse(i + 1)
            assignment[i] = None
            if remaining is not None:
                remaining[d.group] += 1
            if d.unique:
                used.discard(did)

    recurse(0)
    if best[0] is None:
        raise EvaluationError("no feasible assignment exists")
    return best[0], best[1]
