"""Scalar objective composition: weighted maximize/minimize terms plus penalties."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import EvaluationError
from .problem import EvaluationResult, ObjectiveSpec, Solution


def penalty(value: float, target: float, bound: str) -> float:
    """Constraint overshoot: how far the value breaches an upper or lower target."""
    if bound == "upper":
        return max(0.0, value - target)
    if bound == "lower":
        return max(0.0, target - value)
    raise ValueError(f"bound must be 'upper' or 'lower', got {bound!r}")


@dataclass
class ObjectiveBreakdown:
    """Per-objective contributions and their sum F."""

    contributions: dict[str, float]
    total: float


def compose_objective(
    result: EvaluationResult, specs: list[ObjectiveSpec]
) -> ObjectiveBreakdown:
    """Weighted sum over the specs, accumulated in spec order.

    maximize adds +w*Y, minimize adds -w*Y; target goals subtract the
    weighted overshoot of the matching bound.
    """
    contributions: dict[str, float] = {}
    total = 0.0
    for spec in specs:
        if spec.name not in result:
            raise EvaluationError(
                f"evaluation result is missing objective '{spec.name}'"
            )
        y = result[spec.name]
        if spec.goal == "maximize":
            term = spec.weight * y
        elif spec.goal == "minimize":
            term = -spec.weight * y
        elif spec.goal == "less_than_target":
            term = -spec.weight * penalty(y, spec.target, "upper")
        elif spec.goal == "greater_than_target":
            term = -spec.weight * penalty(y, spec.target, "lower")
        else:
            raise ValueError(f"unknown goal '{spec.goal}'")
        contributions[spec.name] = term
        total += term
    return ObjectiveBreakdown(contributions, total)


def rank(solutions: list[Solution]) -> list[int]:
    """Indices sorted by descending fitness; ties keep input order."""
    for i, s in enumerate(solutions):
        if s.fitness is None:
            raise ValueError(f"solution {i} has no fitness; evaluate it first")
    return sorted(range(len(solutions)), key=lambda i: -solutions[i].fitness)
