"""Feasible initial random solutions, for unconstrained and group-constrained problems."""
from __future__ import annotations

import numpy as np

from .errors import GenerationError
from .problem import ProblemDefinition, Solution

# Retry budgets. Placement retries are bounded so near-infeasible maps fail
# loudly instead of hanging.
PLACEMENT_ATTEMPTS = 1000
RESTART_ATTEMPTS = 100


def generate_unconstrained(
    problem: ProblemDefinition, rng: np.random.Generator
) -> Solution:
    """Fill each position with a uniformly drawn decision, redrawing until allowed."""
    n = problem.n_variables
    decisions = problem.decisions
    assignment: list[str | None] = [None] * n
    for pos, did in problem.fixed_positions.items():
        assignment[pos] = did
    for i in range(n):
        if assignment[i] is not None:
            continue
        for _ in range(PLACEMENT_ATTEMPTS):
            d = decisions[rng.integers(len(decisions))]
            if problem.maps[d.id][i]:
                assignment[i] = d.id
                break
        else:
            raise GenerationError(f"no allowed decision found for position {i}")
    return Solution(tuple(assignment))


def _try_constrained(
    problem: ProblemDefinition, rng: np.random.Generator
) -> Solution | None:
    n = problem.n_variables
    remaining = problem.capacities()
    used_unique: set[str] = set()
    assignment: list[str | None] = [None] * n

    for pos, did in problem.fixed_positions.items():
        d = problem.decision(did)
        assignment[pos] = did
        remaining[d.group] -= 1
        if d.unique:
            used_unique.add(did)

    unfilled = [i for i in range(n) if assignment[i] is None]
    attempts = [0] * n
    while unfilled:
        pos = unfilled[rng.integers(len(unfilled))]
        open_groups = [g for g, c in remaining.items() if c > 0]
        if not open_groups:
            return None
        group = open_groups[rng.integers(len(open_groups))]
        members = problem.decisions_in_group(group)
        d = members[rng.integers(len(members))]
        ok = (not d.unique or d.id not in used_unique) and problem.maps[d.id][pos]
        if ok:
            assignment[pos] = d.id
            remaining[group] -= 1
            if d.unique:
                used_unique.add(d.id)
            unfilled.remove(pos)
        else:
            attempts[pos] += 1
            if attempts[pos] > PLACEMENT_ATTEMPTS:
                return None
    return Solution(tuple(assignment))


def generate_constrained(
    problem: ProblemDefinition, rng: np.random.Generator
) -> Solution:
    """Random fill matching group capacities exactly.

    Repeatedly picks a random unfilled position, a random group with
    remaining capacity, and a random decision from that group; the placement
    sticks only if the decision is map-allowed and, when unique, unused.
    Rejected placements do not consume capacity.  A position exceeding its
    placement budget restarts the whole solution.
    """
    for _ in range(RESTART_ATTEMPTS):
        sol = _try_constrained(problem, rng)
        if sol is not None:
            return sol
    raise GenerationError(
        f"constrained generation failed after {RESTART_ATTEMPTS} restarts"
    )


def generate(problem: ProblemDefinition, rng: np.random.Generator) -> Solution:
    """Dispatch to the branch matching the problem's constraint mode."""
    if problem.group_constrained:
        return generate_constrained(problem, rng)
    return generate_unconstrained(problem, rng)


def generate_population(
    problem: ProblemDefinition, size: int, rng: np.random.Generator
) -> list[Solution]:
    if size < 1:
        raise ValueError("population size must be positive")
    return [generate(problem, rng) for _ in range(size)]
