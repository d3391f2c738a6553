"""Simulated annealing: Metropolis acceptance with a geometric cooling schedule."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .genetic import MUTATION_OPS, MUTATION_VARIANTS
from .generation import generate
from .objective import compose_objective
from .problem import ProblemDefinition
from .record import OptimizationRecord, RecordBuilder


@dataclass
class SaConfig:
    t_initial: float
    alpha: float
    n_steps: int
    perturbation_variants: tuple[str, ...] = ("swap_position",)

    def __post_init__(self):
        if self.t_initial <= 0:
            raise ValueError("t_initial must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if self.n_steps < 1:
            raise ValueError("n_steps must be positive")
        self.perturbation_variants = tuple(self.perturbation_variants)
        if not self.perturbation_variants:
            raise ValueError("at least one perturbation variant is required")
        for v in self.perturbation_variants:
            if v not in MUTATION_VARIANTS:
                raise ValueError(f"unknown perturbation variant '{v}'")


def acceptance_probability(f_current: float, f_new: float, t: float) -> float:
    """1 for strict improvement, otherwise exp(-(f_current - f_new) / t)."""
    if t <= 0:
        raise ValueError("temperature must be positive")
    if f_new > f_current:
        return 1.0
    return math.exp(-(f_current - f_new) / t)


def cool(t: float, alpha: float) -> float:
    """One geometric cooling step."""
    return alpha * t


def sa_run(
    problem: ProblemDefinition,
    config: SaConfig,
    evaluator,
    rng: np.random.Generator,
) -> OptimizationRecord:
    """Serial SA chain: one perturbation, one evaluation, one cooling per step."""
    specs = problem.objectives
    builder = RecordBuilder("simulated_annealing", [o.name for o in specs])

    current = generate(problem, rng)
    current.evaluation = evaluator(current)
    current.fitness = compose_objective(current.evaluation, specs).total
    builder.add(current, stage=0).accepted = True

    t = config.t_initial
    for step in range(1, config.n_steps + 1):
        variant = config.perturbation_variants[
            rng.integers(len(config.perturbation_variants))
        ]
        candidate = MUTATION_OPS[variant](current, problem, rng)
        candidate.evaluation = evaluator(candidate)
        candidate.fitness = compose_objective(candidate.evaluation, specs).total
        row = builder.add(candidate, stage=step)
        p = acceptance_probability(current.fitness, candidate.fitness, t)
        if rng.random() < p:
            current = candidate
            row.accepted = True
        t = cool(t, config.alpha)
    return builder.finish(specs)
