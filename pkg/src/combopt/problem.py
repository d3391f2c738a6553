"""Problem model: decision variables, decisions, groups, placement maps, objectives.

A problem assigns one decision to each of N decision-variable positions.
Placement maps restrict which decisions may sit at which positions, groups
cap how many decisions of a kind appear per solution, and unique decisions
may appear at most once.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError

# Named objective values produced by one evaluation.
EvaluationResult = dict[str, float]

TARGET_GOALS = ("less_than_target", "greater_than_target")
GOALS = ("maximize", "minimize") + TARGET_GOALS


@dataclass(frozen=True)
class Decision:
    """One value a decision variable may take (a pin type, an assembly, a city)."""

    id: str
    group: str
    unique: bool = False
    attributes: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class DecisionGroup:
    """A named set of decisions with a per-solution capacity."""

    id: str
    capacity: int


@dataclass
class ObjectiveSpec:
    """One optimization objective: goal kind, optional target, weight."""

    name: str
    goal: str
    weight: float
    target: float | None = None


@dataclass
class EvaluatorSpec:
    """Which evaluator maps solutions to objective values, plus its parameters."""

    kind: str
    parameters: dict = field(default_factory=dict)


@dataclass
class Solution:
    """An assignment of one decision id to each position, with cached scores."""

    assignment: tuple[str, ...]
    evaluation: EvaluationResult | None = None
    fitness: float | None = None
    flags: tuple[str, ...] = ()


@dataclass
class ProblemDefinition:
    """The full engineering-design problem.

    ``maps[d]`` is a 0/1 vector over positions; entry 1 means decision ``d``
    is allowed at that position.  ``fixed_positions`` pre-assigns a decision
    to a position and exempts it from map checks and variation.
    """

    n_variables: int
    decisions: list[Decision]
    groups: list[DecisionGroup]
    maps: dict[str, tuple[int, ...]]
    objectives: list[ObjectiveSpec]
    group_constrained: bool
    evaluator: EvaluatorSpec
    fixed_positions: dict[int, str] = field(default_factory=dict)
    # Derived lookups, rebuilt in __post_init__; excluded from equality.
    _by_id: dict[str, Decision] = field(
        default_factory=dict, compare=False, repr=False
    )
    _by_group: dict[str, list[Decision]] = field(
        default_factory=dict, compare=False, repr=False
    )
    _allowed_at: list[list[str]] = field(
        default_factory=list, compare=False, repr=False
    )
    _free_positions: list[int] = field(
        default_factory=list, compare=False, repr=False
    )

    def __post_init__(self):
        self._by_id = {d.id: d for d in self.decisions}
        self._by_group = {g.id: [] for g in self.groups}
        for d in self.decisions:
            self._by_group.setdefault(d.group, []).append(d)
        self._allowed_at = [
            [
                d.id
                for d in self.decisions
                if d.id in self.maps and len(self.maps[d.id]) > i and self.maps[d.id][i]
            ]
            for i in range(self.n_variables)
        ]
        self._free_positions = [
            i for i in range(self.n_variables) if i not in self.fixed_positions
        ]

    def decision(self, decision_id: str) -> Decision:
        try:
            return self._by_id[decision_id]
        except KeyError:
            raise ConfigError(f"unknown decision '{decision_id}'") from None

    def group_of(self, decision_id: str) -> str:
        return self.decision(decision_id).group

    def decisions_in_group(self, group_id: str) -> list[Decision]:
        return self._by_group.get(group_id, [])

    def allowed_at(self, pos: int) -> list[str]:
        return self._allowed_at[pos]

    @property
    def free_positions(self) -> list[int]:
        """Positions not pinned by fixed_positions."""
        return self._free_positions

    def capacities(self) -> dict[str, int]:
        return {g.id: g.capacity for g in self.groups}


def allowed(problem: ProblemDefinition, decision_id: str, pos: int) -> bool:
    """Read the placement map entry for (decision, position)."""
    if not 0 <= pos < problem.n_variables:
        raise ConfigError(f"position {pos} out of range for N={problem.n_variables}")
    problem.decision(decision_id)
    if decision_id not in problem.maps:
        raise ConfigError(f"decision '{decision_id}' has no placement map")
    return bool(problem.maps[decision_id][pos])


def _position_label(i: int) -> str:
    return f"X{i + 1}"


def validate_problem(problem: ProblemDefinition) -> list[str]:
    """Check every problem invariant; return violations as messages.

    An empty list means the problem is well formed.  Violations name the
    offending position, decision, or group.
    """
    violations: list[str] = []
    n = problem.n_variables
    if n < 1:
        violations.append("number of decision variables must be positive")
        return violations

    seen_ids: set[str] = set()
    group_ids = {g.id for g in problem.groups}
    for d in problem.decisions:
        if not d.id:
            violations.append("decision with empty id")
            continue
        if d.id in seen_ids:
            violations.append(f"duplicate decision id '{d.id}'")
        seen_ids.add(d.id)
        if d.group not in group_ids:
            violations.append(f"decision '{d.id}' references unknown group '{d.group}'")

    if len(group_ids) != len(problem.groups):
        violations.append("duplicate group ids")

    for d in problem.decisions:
        m = problem.maps.get(d.id)
        if m is None:
            violations.append(f"decision '{d.id}' has no placement map")
        elif len(m) != n:
            violations.append(
                f"map for decision '{d.id}' has length {len(m)}, expected {n}"
            )

    for pos, did in problem.fixed_positions.items():
        if not 0 <= pos < n:
            violations.append(f"fixed position {pos} out of range")
        if did not in seen_ids:
            violations.append(f"fixed position {pos} names unknown decision '{did}'")

    for i in range(n):
        if i in problem.fixed_positions:
            continue
        if not problem.allowed_at(i):
            violations.append(f"position {_position_label(i)} has empty allowed set")

    for spec in problem.objectives:
        if spec.goal not in GOALS:
            violations.append(f"objective '{spec.name}' has unknown goal '{spec.goal}'")
        if spec.weight <= 0:
            violations.append(f"objective '{spec.name}' has non-positive weight")
        if (spec.goal in TARGET_GOALS) != (spec.target is not None):
            violations.append(
                f"objective '{spec.name}' target must be present exactly for "
                "target goals"
            )

    if problem.group_constrained:
        total = 0
        for g in problem.groups:
            if g.capacity < 0:
                violations.append(f"group '{g.id}' has negative capacity")
            total += g.capacity
        if total != n:
            violations.append("capacities do not cover all positions")
        for g in problem.groups:
            pairs = sum(
                sum(problem.maps.get(d.id, ()))
                for d in problem.decisions
                if d.group == g.id
            )
            if pairs < g.capacity:
                violations.append(
                    f"group '{g.id}' allows only {pairs} placements for capacity "
                    f"{g.capacity}"
                )
    return violations


def is_feasible(sol: Solution, problem: ProblemDefinition) -> bool:
    """True iff the solution satisfies maps, group capacities, and uniqueness."""
    n = problem.n_variables
    if len(sol.assignment) != n:
        return False
    counts: dict[str, int] = {}
    seen: dict[str, int] = {}
    for i, did in enumerate(sol.assignment):
        d = problem._by_id.get(did)
        if d is None:
            return False
        fixed = problem.fixed_positions.get(i)
        if fixed is not None:
            if did != fixed:
                return False
        else:
            m = problem.maps.get(did)
            if m is None or not m[i]:
                return False
        counts[d.group] = counts.get(d.group, 0) + 1
        seen[did] = seen.get(did, 0) + 1
        if d.unique and seen[did] > 1:
            return False
    if problem.group_constrained:
        for g in problem.groups:
            if counts.get(g.id, 0) != g.capacity:
                return False
    return True
