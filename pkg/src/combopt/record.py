"""Run trace: every evaluated solution, per-stage maxima, and the global best."""
from __future__ import annotations

from dataclasses import dataclass

from .objective import ObjectiveBreakdown, compose_objective
from .problem import ObjectiveSpec, Solution


@dataclass
class EvalRow:
    """One evaluated solution. ``stage`` is the GA generation or SA step."""

    index: int
    stage: int
    objectives: dict[str, float]
    fitness: float
    accepted: bool = False
    best_so_far: float = 0.0
    note: str = ""


@dataclass
class StageSummary:
    stage: int
    stage_max: float
    best_so_far: float


@dataclass
class OptimizationRecord:
    method: str
    objective_names: list[str]
    rows: list[EvalRow]
    stages: list[StageSummary]
    best_solution: Solution
    best_breakdown: ObjectiveBreakdown
    seed: int | None = None


class RecordBuilder:
    """Accumulates rows during a run; the optimizers own the control flow."""

    def __init__(self, method: str, objective_names: list[str]):
        self.method = method
        self.objective_names = objective_names
        self.rows: list[EvalRow] = []
        self._row_of: dict[int, EvalRow] = {}
        self.best_solution: Solution | None = None

    def add(self, sol: Solution, stage: int) -> EvalRow:
        if self.best_solution is None or sol.fitness > self.best_solution.fitness:
            self.best_solution = sol
        row = EvalRow(
            index=len(self.rows),
            stage=stage,
            objectives=dict(sol.evaluation),
            fitness=sol.fitness,
            best_so_far=self.best_solution.fitness,
            note="|".join(sol.flags),
        )
        self.rows.append(row)
        self._row_of[id(sol)] = row
        return row

    def mark_accepted(self, solutions) -> None:
        for sol in solutions:
            row = self._row_of.get(id(sol))
            if row is not None:
                row.accepted = True

    def finish(self, specs: list[ObjectiveSpec]) -> OptimizationRecord:
        stages: list[StageSummary] = []
        for row in self.rows:
            if not stages or stages[-1].stage != row.stage:
                stages.append(StageSummary(row.stage, row.fitness, row.best_so_far))
            else:
                last = stages[-1]
                last.stage_max = max(last.stage_max, row.fitness)
                last.best_so_far = max(last.best_so_far, row.best_so_far)
        best = self.best_solution
        return OptimizationRecord(
            method=self.method,
            objective_names=list(self.objective_names),
            rows=self.rows,
            stages=stages,
            best_solution=best,
            best_breakdown=compose_objective(best.evaluation, specs),
        )
