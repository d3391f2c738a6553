"""Genetic algorithm: similarity mating, constraint-preserving variation, tournament selection."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .objective import compose_objective
from .problem import ProblemDefinition, Solution
from .generation import PLACEMENT_ATTEMPTS, generate_population
from .record import OptimizationRecord, RecordBuilder

CROSSOVER_VARIANTS = ("free", "grouped")
MUTATION_VARIANTS = ("free_replace", "swap_position", "within_group_replace")


@dataclass
class GaConfig:
    population_size: int
    n_generations: int
    r_initial: float
    r_final: float
    crossover_variant: str = "free"
    mutation_variants: tuple[str, ...] = ("free_replace",)
    selection: str = "tournament"
    # Positions redistributed per grouped mating; None means ceil(N/4).
    crossover_positions: int | None = None

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if self.n_generations < 1:
            raise ValueError("n_generations must be positive")
        for r in (self.r_initial, self.r_final):
            if not 0.0 <= r < 1.0:
                raise ValueError("mutation rates must lie in [0, 1)")
        if self.crossover_variant not in CROSSOVER_VARIANTS:
            raise ValueError(f"unknown crossover variant '{self.crossover_variant}'")
        self.mutation_variants = tuple(self.mutation_variants)
        if not self.mutation_variants:
            raise ValueError("at least one mutation variant is required")
        for v in self.mutation_variants:
            if v not in MUTATION_VARIANTS:
                raise ValueError(f"unknown mutation variant '{v}'")
        if self.selection != "tournament":
            raise ValueError(f"unknown selection '{self.selection}'")


def mutation_rate_update(
    r_current: float, r_initial: float, r_final: float, n: int
) -> float:
    """One step of the geometric schedule taking r_initial to r_final over n updates."""
    g = ((1.0 - r_final) / (1.0 - r_initial)) ** (1.0 / n)
    return 1.0 - g * (1.0 - r_current)


def similarity(a: Solution, b: Solution) -> int:
    """Count of positions with matching assignments."""
    if len(a.assignment) != len(b.assignment):
        raise ValueError("solutions have different lengths")
    return sum(x == y for x, y in zip(a.assignment, b.assignment))


def partner_select(index: int, pool: list[Solution]) -> int:
    """Index of the most similar other solution; ties break toward lower index."""
    if len(pool) < 2:
        raise ValueError("pool must hold at least two solutions")
    me = pool[index]
    best_i = -1
    best_sim = -1
    for j, other in enumerate(pool):
        if j == index:
            continue
        s = similarity(me, other)
        if s > best_sim:
            best_sim = s
            best_i = j
    return best_i


def _child(assignment: list[str], flags: tuple[str, ...] = ()) -> Solution:
    return Solution(tuple(assignment), flags=flags)


def crossover_free(
    a: Solution, b: Solution, problem: ProblemDefinition, rng: np.random.Generator
) -> tuple[Solution, Solution]:
    """Exchange each position's decisions with probability 0.5 where maps permit."""
    ca = list(a.assignment)
    cb = list(b.assignment)
    maps = problem.maps
    for i in problem.free_positions:
        if rng.random() < 0.5:
            if maps[cb[i]][i] and maps[ca[i]][i]:
                ca[i], cb[i] = cb[i], ca[i]
    return _child(ca), _child(cb)


def _internal_swap(
    child: list[str],
    pos: int,
    target_group: str,
    problem: ProblemDefinition,
    rng: np.random.Generator,
) -> None:
    """Swap pos with another of the child's own positions holding target_group."""
    maps = problem.maps
    here = child[pos]
    candidates = [
        q
        for q in problem.free_positions
        if q != pos
        and problem.group_of(child[q]) == target_group
        and maps[here][q]
        and maps[child[q]][pos]
    ]
    if not candidates:
        return
    q = candidates[rng.integers(len(candidates))]
    child[pos], child[q] = child[q], child[pos]


def crossover_grouped(
    a: Solution,
    b: Solution,
    problem: ProblemDefinition,
    rng: np.random.Generator,
    n_positions: int | None = None,
) -> tuple[Solution, Solution]:
    """Group-count and uniqueness preserving crossover.

    At each drawn position, same-group decisions are exchanged between the
    children when uniqueness allows; otherwise each child swaps that
    position's content internally with one of its own positions holding a
    decision from the counterpart's group.
    """
    ca = list(a.assignment)
    cb = list(b.assignment)
    free = problem.free_positions
    k = n_positions if n_positions is not None else math.ceil(problem.n_variables / 4)
    k = min(k, len(free))
    drawn = rng.choice(len(free), size=k, replace=False) if k else []
    for fi in drawn:
        pos = free[int(fi)]
        da, db = ca[pos], cb[pos]
        if da == db:
            continue
        ga = problem.group_of(da)
        gb = problem.group_of(db)
        if ga == gb:
            dec_a = problem.decision(da)
            dec_b = problem.decision(db)
            dup_a = dec_a.unique and any(
                cb[q] == da for q in range(len(cb)) if q != pos
            )
            dup_b = dec_b.unique and any(
                ca[q] == db for q in range(len(ca)) if q != pos
            )
            if not dup_a and not dup_b:
                ca[pos], cb[pos] = cb[pos], ca[pos]
                continue
        _internal_swap(ca, pos, gb, problem, rng)
        _internal_swap(cb, pos, ga, problem, rng)
    return _child(ca), _child(cb)


def mutate_free(
    s: Solution, problem: ProblemDefinition, rng: np.random.Generator
) -> Solution:
    """Replace one position's decision with a different map-allowed decision."""
    free = problem.free_positions
    for _ in range(PLACEMENT_ATTEMPTS):
        pos = free[rng.integers(len(free))]
        current = s.assignment[pos]
        alternatives = [d for d in problem.allowed_at(pos) if d != current]
        if alternatives:
            out = list(s.assignment)
            out[pos] = alternatives[rng.integers(len(alternatives))]
            return _child(out)
    return replace(s, evaluation=None, fitness=None, flags=("mutation_noop",))


def mutate_swap(
    s: Solution, problem: ProblemDefinition, rng: np.random.Generator
) -> Solution:
    """Swap the contents of two positions where both maps permit it."""
    free = problem.free_positions
    maps = problem.maps
    if len(free) >= 2:
        for _ in range(PLACEMENT_ATTEMPTS):
            i, j = rng.choice(len(free), size=2, replace=False)
            p, q = free[int(i)], free[int(j)]
            dp, dq = s.assignment[p], s.assignment[q]
            if maps[dq][p] and maps[dp][q]:
                out = list(s.assignment)
                out[p], out[q] = dq, dp
                return _child(out)
    return replace(s, evaluation=None, fitness=None, flags=("mutation_noop",))


def mutate_within_group(
    s: Solution, problem: ProblemDefinition, rng: np.random.Generator
) -> Solution:
    """Replace one position's decision with another from the same group."""
    free = problem.free_positions
    assigned = set(s.assignment)
    for _ in range(PLACEMENT_ATTEMPTS):
        pos = free[rng.integers(len(free))]
        current = s.assignment[pos]
        group = problem.group_of(current)
        candidates = [
            d.id
            for d in problem.decisions_in_group(group)
            if d.id != current
            and problem.maps[d.id][pos]
            and (not d.unique or d.id not in assigned)
        ]
        if candidates:
            out = list(s.assignment)
            out[pos] = candidates[rng.integers(len(candidates))]
            return _child(out)
    return replace(s, evaluation=None, fitness=None, flags=("mutation_noop",))


MUTATION_OPS = {
    "free_replace": mutate_free,
    "swap_position": mutate_swap,
    "within_group_replace": mutate_within_group,
}


def tournament_select(
    pool: list[Solution], rng: np.random.Generator
) -> list[Solution]:
    """Shuffle, pair consecutively, keep the higher-fitness member of each pair."""
    if len(pool) % 2 != 0 or len(pool) < 2:
        raise ValueError("tournament pool must be even and at least 2")
    for s in pool:
        if s.fitness is None:
            raise ValueError("tournament pool contains unevaluated solutions")
    order = rng.permutation(len(pool))
    survivors = []
    for k in range(len(pool) // 2):
        x = pool[order[2 * k]]
        y = pool[order[2 * k + 1]]
        survivors.append(x if x.fitness >= y.fitness else y)
    return survivors


def _evaluate_batch(solutions, evaluator, specs, threads: int) -> None:
    """Evaluate in child-index order; threading must not change results."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(evaluator, solutions))
    else:
        results = [evaluator(s) for s in solutions]
    for s, res in zip(solutions, results):
        s.evaluation = res
        s.fitness = compose_objective(res, specs).total


def ga_run(
    problem: ProblemDefinition,
    config: GaConfig,
    evaluator,
    rng: np.random.Generator,
    threads: int = 1,
) -> OptimizationRecord:
    """Full GA loop.

    Each generation partitions the population into mutation (fraction R,
    rounded to nearest) and crossover reproducers, produces exactly P
    children, evaluates them, and holds a tournament over parents plus
    children.  All random draws happen sequentially, so the record is
    identical for any thread count with a pure evaluator.
    """
    specs = problem.objectives
    builder = RecordBuilder("genetic_algorithm", [o.name for o in specs])
    p_size = config.population_size
    population = generate_population(problem, p_size, rng)
    _evaluate_batch(population, evaluator, specs, threads)
    for sol in population:
        builder.add(sol, stage=0)

    rate = config.r_initial
    for gen in range(1, config.n_generations + 1):
        n_mut = min(p_size, max(0, math.floor(rate * p_size + 0.5)))
        order = rng.permutation(p_size)
        children: list[Solution] = []
        for i in order[:n_mut]:
            variant = config.mutation_variants[
                rng.integers(len(config.mutation_variants))
            ]
            children.append(MUTATION_OPS[variant](population[int(i)], problem, rng))
        for i in order[n_mut:]:
            if len(children) >= p_size:
                break
            i = int(i)
            j = partner_select(i, population)
            if config.crossover_variant == "grouped":
                c1, c2 = crossover_grouped(
                    population[i],
                    population[j],
                    problem,
                    rng,
                    n_positions=config.crossover_positions,
                )
            else:
                c1, c2 = crossover_free(population[i], population[j], problem, rng)
            children.append(c1)
            if len(children) < p_size:
                children.append(c2)
        _evaluate_batch(children, evaluator, specs, threads)
        for sol in children:
            builder.add(sol, stage=gen)
        population = tournament_select(population + children, rng)
        builder.mark_accepted(population)
        rate = mutation_rate_update(
            rate, config.r_initial, config.r_final, config.n_generations
        )
    return builder.finish(specs)
