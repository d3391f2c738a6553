import pytest

from combopt.errors import ConfigError
from combopt.problem import (
    Decision,
    DecisionGroup,
    EvaluatorSpec,
    ObjectiveSpec,
    ProblemDefinition,
    Solution,
    allowed,
    is_feasible,
    validate_problem,
)

from conftest import toy_problem


def five_by_five_problem():
    """Five positions, five decisions, with one position allowing nothing.

    V1 is allowed everywhere at X1; X3 allows nothing; X4 allows only V3.
    """
    rows = {
        "V1": (1, 1, 0, 0, 0),
        "V2": (1, 1, 0, 0, 0),
        "V3": (1, 0, 0, 1, 0),
        "V4": (1, 0, 0, 0, 1),
        "V5": (1, 1, 0, 0, 1),
    }
    decisions = [Decision(id=k, group="g") for k in rows]
    return ProblemDefinition(
        n_variables=5,
        decisions=decisions,
        groups=[DecisionGroup("g", 0)],
        maps=rows,
        objectives=[ObjectiveSpec("score", "maximize", 1.0)],
        group_constrained=False,
        evaluator=EvaluatorSpec("tsp"),
    )


class TestValidateProblem:
    def test_empty_column_is_a_violation(self):
        problem = five_by_five_problem()
        violations = validate_problem(problem)
        assert "position X3 has empty allowed set" in violations

    def test_fixed_position_excuses_empty_column(self):
        problem = five_by_five_problem()
        problem.fixed_positions = {2: "V1"}
        problem.__post_init__()
        assert validate_problem(problem) == []

    def test_first_cycle_problem_is_valid(self, first_cycle_problem):
        assert validate_problem(first_cycle_problem) == []

    def test_capacity_sum_mismatch(self):
        problem = toy_problem(
            n=3, group_constrained=True, capacities={"g": 2}
        )
        assert "capacities do not cover all positions" in validate_problem(problem)

    def test_idempotent(self, first_cycle_problem):
        first = validate_problem(first_cycle_problem)
        second = validate_problem(first_cycle_problem)
        assert first == second == []

    def test_bad_objective_weight(self):
        problem = toy_problem(
            objectives=[ObjectiveSpec("score", "maximize", 0.0)]
        )
        assert any("weight" in v for v in validate_problem(problem))

    def test_target_presence_rules(self):
        problem = toy_problem(
            objectives=[ObjectiveSpec("score", "maximize", 1.0, target=3.0)]
        )
        assert any("target" in v for v in validate_problem(problem))
        problem = toy_problem(
            objectives=[ObjectiveSpec("score", "less_than_target", 1.0)]
        )
        assert any("target" in v for v in validate_problem(problem))


class TestAllowed:
    def test_map_entries(self):
        problem = five_by_five_problem()
        assert allowed(problem, "V1", 0) is True
        assert allowed(problem, "V3", 1) is False

    def test_all_ones_row(self):
        problem = toy_problem(n=4)
        assert all(allowed(problem, "A", i) for i in range(4))

    def test_unknown_decision(self):
        problem = toy_problem()
        with pytest.raises(ConfigError):
            allowed(problem, "missing", 0)

    def test_out_of_range_position(self):
        problem = toy_problem(n=3)
        with pytest.raises(ConfigError):
            allowed(problem, "A", 3)

    def test_agrees_with_map(self, first_cycle_problem):
        import numpy as np

        rng = np.random.default_rng(0)
        ids = [d.id for d in first_cycle_problem.decisions]
        for _ in range(200):
            d = ids[rng.integers(len(ids))]
            pos = int(rng.integers(first_cycle_problem.n_variables))
            assert allowed(first_cycle_problem, d, pos) == bool(
                first_cycle_problem.maps[d][pos]
            )


class TestIsFeasible:
    def test_first_cycle_counts(self, first_cycle_problem):
        fuel = [i for i in range(35) if first_cycle_problem.maps["Assembly_One"][i]]
        refl = [i for i in range(35) if first_cycle_problem.maps["Reflector"][i]]
        assignment = [""] * 35
        for i in refl:
            assignment[i] = "Reflector"
        for i, pos in enumerate(fuel):
            if i < 11:
                assignment[pos] = "Assembly_One"
            elif i < 18:
                assignment[pos] = "Assembly_Two"
            else:
                assignment[pos] = "Assembly_Three"
        sol = Solution(tuple(assignment))
        assert is_feasible(sol, first_cycle_problem)

        # Swap one 2.0 assembly for a 2.5: counts become {10, 8, 8}.
        broken = list(assignment)
        broken[broken.index("Assembly_One")] = "Assembly_Four"
        assert not is_feasible(Solution(tuple(broken)), first_cycle_problem)

    def test_unique_violation(self):
        problem = toy_problem(
            n=2, decision_ids=("A", "B"), unique=("A",)
        )
        assert not is_feasible(Solution(("A", "A")), problem)
        assert is_feasible(Solution(("A", "B")), problem)

    def test_map_violation(self):
        problem = toy_problem(
            n=2,
            decision_ids=("A", "B"),
            maps={"A": (1, 0), "B": (1, 1)},
        )
        assert not is_feasible(Solution(("B", "A")), problem)

    def test_wrong_length(self):
        problem = toy_problem(n=3)
        assert not is_feasible(Solution(("A", "B")), problem)
