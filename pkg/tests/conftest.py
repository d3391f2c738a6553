from pathlib import Path

import pytest

from combopt.problem import (
    Decision,
    DecisionGroup,
    EvaluatorSpec,
    ObjectiveSpec,
    ProblemDefinition,
)
from combopt.runner import load_config

REPO_ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = REPO_ROOT / "configs"


@pytest.fixture(scope="session")
def first_cycle_config():
    return load_config(CONFIG_DIR / "first_cycle.yaml")


@pytest.fixture(scope="session")
def third_cycle_config():
    return load_config(CONFIG_DIR / "third_cycle.yaml")


@pytest.fixture(scope="session")
def lattice_config():
    return load_config(CONFIG_DIR / "lattice.yaml")


@pytest.fixture(scope="session")
def tsp_config():
    return load_config(CONFIG_DIR / "tsp7.yaml")


@pytest.fixture
def first_cycle_problem(first_cycle_config):
    return first_cycle_config.problem


@pytest.fixture
def third_cycle_problem(third_cycle_config):
    return third_cycle_config.problem


@pytest.fixture
def lattice_problem(lattice_config):
    return lattice_config.problem


@pytest.fixture
def tsp_problem(tsp_config):
    return tsp_config.problem


def toy_problem(
    n=3,
    decision_ids=("A", "B"),
    group_constrained=False,
    capacities=None,
    unique=(),
    maps=None,
    attributes=None,
    objectives=None,
    evaluator=None,
):
    """Small hand-built problem for operator tests."""
    attributes = attributes or {}
    decisions = [
        Decision(
            id=d,
            group="g",
            unique=d in unique,
            attributes=attributes.get(d, {}),
        )
        for d in decision_ids
    ]
    if capacities is None:
        groups = [DecisionGroup("g", n if group_constrained else 0)]
    else:
        groups = [DecisionGroup(g, c) for g, c in capacities.items()]
    full_maps = maps or {d: tuple([1] * n) for d in decision_ids}
    return ProblemDefinition(
        n_variables=n,
        decisions=decisions,
        groups=groups,
        maps=full_maps,
        objectives=objectives
        or [ObjectiveSpec(name="score", goal="maximize", weight=1.0)],
        group_constrained=group_constrained,
        evaluator=evaluator or EvaluatorSpec(kind="tsp", parameters={}),
    )
