"""Common input file parsing, the optimizer factory, and run orchestration."""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .annealing import SaConfig, sa_run
from .errors import ConfigError
from .evaluators import make_evaluator
from .genetic import GaConfig, ga_run
from .problem import (
    GOALS,
    TARGET_GOALS,
    Decision,
    DecisionGroup,
    EvaluatorSpec,
    ObjectiveSpec,
    ProblemDefinition,
    validate_problem,
)
from .record import OptimizationRecord

log = logging.getLogger(__name__)

METHODOLOGIES = ("genetic_algorithm", "simulated_annealing")

# Legacy operator names accepted in input files.
MUTATION_ALIASES = {
    "free_replace": "free_replace",
    "swap_position": "swap_position",
    "within_group_replace": "within_group_replace",
    "mutate_free": "free_replace",
    "mutate_by_type": "within_group_replace",
    "mutate fixed": "swap_position",
    "mutate_fixed": "swap_position",
}

# Legacy objective names mapped onto evaluator output names.
OBJECTIVE_ALIASES = {"PinPowerPeaking": "Fq"}

# Keys accepted and ignored for compatibility with older physics-driven inputs.
IGNORED_OPTIMIZATION_KEYS = ("reproducer", "data_type")
IGNORED_CHROMOSOME_KEYS = ("type", "serial", "name")


@dataclass
class RunConfig:
    methodology: str
    problem: ProblemDefinition
    ga: GaConfig | None = None
    sa: SaConfig | None = None
    seed: int = 0
    output_dir: str = "out"
    threads: int = 1


def _require(mapping: dict, key: str, path: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ConfigError(f"missing required key '{path}.{key}'")
    return mapping[key]


def _parse_map(value, n: int | None, path: str) -> tuple[int, ...]:
    if isinstance(value, str):
        entries = [tok.strip() for tok in value.split(",") if tok.strip()]
    elif isinstance(value, (list, tuple)):
        entries = [str(v) for v in value]
    else:
        raise ConfigError(f"{path}: map must be a list or comma string")
    try:
        bits = tuple(int(tok) for tok in entries)
    except ValueError:
        raise ConfigError(f"{path}: map entries must be integers") from None
    if any(b not in (0, 1) for b in bits):
        raise ConfigError(f"{path}: map entries must be 0 or 1")
    if n is not None and len(bits) != n:
        raise ConfigError(f"{path}: map length {len(bits)} does not match N={n}")
    return bits


def _parse_objectives(block: dict, path: str) -> list[ObjectiveSpec]:
    if not isinstance(block, dict) or not block:
        raise ConfigError(f"{path}: at least one objective is required")
    specs = []
    for raw_name, body in block.items():
        name = str(raw_name)
        if name in OBJECTIVE_ALIASES:
            log.info("objective '%s' read as '%s'", name, OBJECTIVE_ALIASES[name])
            name = OBJECTIVE_ALIASES[name]
        goal = _require(body, "goal", f"{path}.{raw_name}")
        if goal not in GOALS:
            raise ConfigError(f"{path}.{raw_name}.goal: unknown goal '{goal}'")
        weight = float(_require(body, "weight", f"{path}.{raw_name}"))
        if weight <= 0:
            raise ConfigError(f"{path}.{raw_name}.weight must be positive")
        target = body.get("target")
        if goal in TARGET_GOALS:
            if target is None:
                raise ConfigError(
                    f"{path}.{raw_name}.target is required for goal '{goal}'"
                )
            target = float(target)
        elif target is not None:
            raise ConfigError(
                f"{path}.{raw_name}.target is not allowed for goal '{goal}'"
            )
        specs.append(ObjectiveSpec(name=name, goal=goal, weight=weight, target=target))
    return specs


def _parse_variants(raw, path: str) -> tuple[str, ...]:
    if isinstance(raw, str):
        raw = [raw]
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{path}: expected a non-empty list of operator names")
    out = []
    for name in raw:
        key = str(name)
        if key not in MUTATION_ALIASES:
            raise ConfigError(f"{path}: unknown mutation operator '{key}'")
        out.append(MUTATION_ALIASES[key])
    return tuple(dict.fromkeys(out))


def _parse_genome(doc: dict) -> tuple[list[Decision], dict, int, dict[int, str]]:
    genome = _require(doc, "genome", "")
    chromosomes = _require(genome, "chromosomes", "genome")

    symmetry = chromosomes.get("symmetry_list", genome.get("symmetry_list"))
    if symmetry:
        raise ConfigError("genome.symmetry_list semantics are undefined; "
                          "only an empty list is accepted")
    if "assembly_data" in genome:
        log.info("ignoring legacy key genome.assembly_data")

    n = genome.get("positions")
    n = int(n) if n is not None else None
    decisions: list[Decision] = []
    maps: dict[str, tuple[int, ...]] = {}
    deferred_default_map: list[str] = []
    for raw_id, body in chromosomes.items():
        cid = str(raw_id)
        if cid == "symmetry_list":
            continue
        path = f"genome.chromosomes.{cid}"
        group = str(_require(body, "gene_group", path))
        unique = bool(body.get("unique", False))
        attributes = {
            str(k): float(v) for k, v in (body.get("attributes") or {}).items()
        }
        for key in IGNORED_CHROMOSOME_KEYS:
            if key in body:
                log.debug("ignoring legacy key %s.%s", path, key)
        if "map" in body:
            bits = _parse_map(body["map"], n, f"{path}.map")
            if n is None:
                n = len(bits)
            elif len(bits) != n:
                raise ConfigError(
                    f"{path}.map: length {len(bits)} does not match N={n}"
                )
            maps[cid] = bits
        else:
            deferred_default_map.append(cid)
        decisions.append(
            Decision(id=cid, group=group, unique=unique, attributes=attributes)
        )
    if n is None:
        raise ConfigError(
            "cannot infer the number of positions: provide genome.positions "
            "or at least one chromosome map"
        )
    for cid in deferred_default_map:
        log.info("genome.chromosomes.%s has no map; defaulting to all-allowed", cid)
        maps[cid] = tuple([1] * n)

    fixed_positions = {
        int(k): str(v) for k, v in (genome.get("fixed_positions") or {}).items()
    }
    return decisions, maps, n, fixed_positions


def parse_config(text: str) -> RunConfig:
    """Parse a configuration document into a validated RunConfig.

    The schema is a superset of the historical input format: legacy physics
    keys are accepted and ignored with a logged notice.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("configuration document must be a mapping")

    opt = _require(doc, "optimization", "")
    methodology = _require(opt, "methodology", "optimization")
    if methodology not in METHODOLOGIES:
        raise ConfigError(
            f"optimization.methodology: unknown methodology '{methodology}'"
        )
    for key in IGNORED_OPTIMIZATION_KEYS:
        if key in opt:
            log.info("ignoring legacy key optimization.%s", key)

    selection = opt.get("selection") or {}
    sel_method = selection.get("method", "tournament")
    if sel_method != "tournament":
        raise ConfigError(
            f"optimization.selection.method: unknown method '{sel_method}'"
        )
    sel_fitness = selection.get("fitness", "weighted")
    if sel_fitness != "weighted":
        raise ConfigError(
            f"optimization.selection.fitness: unknown fitness '{sel_fitness}'"
        )

    objectives = _parse_objectives(
        _require(opt, "objectives", "optimization"), "optimization.objectives"
    )
    decisions, maps, n, fixed_positions = _parse_genome(doc)

    fixed_groups = opt.get("fixed_groups") or {}
    group_constrained = bool(opt.get("fixed_problem", False)) or bool(fixed_groups)
    if group_constrained and not fixed_groups:
        raise ConfigError(
            "optimization.fixed_groups is required when fixed_problem is true"
        )
    if group_constrained:
        groups = [
            DecisionGroup(id=str(g), capacity=int(c)) for g, c in fixed_groups.items()
        ]
        total = sum(g.capacity for g in groups)
        if total != n:
            raise ConfigError(
                f"optimization.fixed_groups: capacities sum to {total}, "
                f"expected N={n}"
            )
    else:
        seen: dict[str, None] = dict.fromkeys(d.group for d in decisions)
        groups = [DecisionGroup(id=g, capacity=0) for g in seen]
    group_ids = {g.id for g in groups}
    for d in decisions:
        if d.group not in group_ids:
            raise ConfigError(
                f"genome.chromosomes.{d.id}.gene_group: unknown group '{d.group}'"
            )

    ev = _require(doc, "evaluator", "")
    evaluator = EvaluatorSpec(
        kind=str(_require(ev, "kind", "evaluator")),
        parameters=dict(ev.get("parameters") or {}),
    )

    problem = ProblemDefinition(
        n_variables=n,
        decisions=decisions,
        groups=groups,
        maps=maps,
        objectives=objectives,
        group_constrained=group_constrained,
        evaluator=evaluator,
        fixed_positions=fixed_positions,
    )

    mutation = opt.get("mutation") or {}
    if "common chromosomes" in mutation:
        log.info("ignoring legacy key optimization.mutation.'common chromosomes'")
    variants = _parse_variants(
        mutation.get("method", ["free_replace"]), "optimization.mutation.method"
    )

    ga_cfg = None
    sa_cfg = None
    if methodology == "genetic_algorithm":
        crossover = (opt.get("crossover") or {}).get(
            "method", "grouped" if group_constrained else "free"
        )
        try:
            ga_cfg = GaConfig(
                population_size=int(_require(opt, "population_size", "optimization")),
                n_generations=int(
                    _require(opt, "number_of_generations", "optimization")
                ),
                r_initial=float(mutation.get("initial_rate", 0.25)),
                r_final=float(mutation.get("final_rate", 0.25)),
                crossover_variant=str(crossover),
                mutation_variants=variants,
            )
        except ValueError as exc:
            raise ConfigError(f"optimization: {exc}") from None
    else:
        try:
            sa_cfg = SaConfig(
                t_initial=float(_require(opt, "initial_temperature", "optimization")),
                alpha=float(opt.get("alpha", opt.get("cooling_rate", 0.999))),
                n_steps=int(_require(opt, "number_of_steps", "optimization")),
                perturbation_variants=variants,
            )
        except ValueError as exc:
            raise ConfigError(f"optimization: {exc}") from None

    run_block = doc.get("run") or {}
    return RunConfig(
        methodology=methodology,
        problem=problem,
        ga=ga_cfg,
        sa=sa_cfg,
        seed=int(run_block.get("seed", 0)),
        output_dir=str(run_block.get("output_directory", "out")),
        threads=int(run_block.get("threads", 1)),
    )


def load_config(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text())


def config_to_dict(cfg: RunConfig) -> dict:
    """Canonical plain-data form of a RunConfig; parse(serialize) round-trips."""
    problem = cfg.problem
    opt: dict = {"methodology": cfg.methodology}
    if cfg.ga is not None:
        opt.update(
            population_size=cfg.ga.population_size,
            number_of_generations=cfg.ga.n_generations,
            mutation={
                "method": list(cfg.ga.mutation_variants),
                "initial_rate": cfg.ga.r_initial,
                "final_rate": cfg.ga.r_final,
            },
            crossover={"method": cfg.ga.crossover_variant},
        )
    if cfg.sa is not None:
        opt.update(
            initial_temperature=cfg.sa.t_initial,
            alpha=cfg.sa.alpha,
            number_of_steps=cfg.sa.n_steps,
            mutation={"method": list(cfg.sa.perturbation_variants)},
        )
    opt["selection"] = {"method": "tournament", "fitness": "weighted"}
    if problem.group_constrained:
        opt["fixed_problem"] = True
        opt["fixed_groups"] = {g.id: g.capacity for g in problem.groups}
    objectives: dict = {}
    for spec in problem.objectives:
        body: dict = {"goal": spec.goal, "weight": spec.weight}
        if spec.target is not None:
            body["target"] = spec.target
        objectives[spec.name] = body
    opt["objectives"] = objectives

    chromosomes: dict = {}
    for d in problem.decisions:
        body = {"gene_group": d.group, "map": list(problem.maps[d.id])}
        if d.unique:
            body["unique"] = True
        if d.attributes:
            body["attributes"] = dict(d.attributes)
        chromosomes[d.id] = body
    genome: dict = {"chromosomes": chromosomes, "positions": problem.n_variables}
    if problem.fixed_positions:
        genome["fixed_positions"] = dict(problem.fixed_positions)

    return {
        "optimization": opt,
        "genome": genome,
        "evaluator": {
            "kind": problem.evaluator.kind,
            "parameters": problem.evaluator.parameters,
        },
        "run": {
            "seed": cfg.seed,
            "output_directory": cfg.output_dir,
            "threads": cfg.threads,
        },
    }


def serialize_config(cfg: RunConfig) -> str:
    # Key order is preserved so parse(serialize(cfg)) rebuilds identical
    # decision and group ordering.
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)


def config_digest(cfg: RunConfig) -> str:
    """Hash of the problem and optimizer settings.

    The run block (seed, output directory, thread count) is excluded: those
    are execution parameters, and the seed is reported separately.
    """
    doc = config_to_dict(cfg)
    del doc["run"]
    text = yaml.safe_dump(doc, sort_keys=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def build_optimizer(cfg: RunConfig):
    """Wire generation, variation, selection, and evaluation into a runnable.

    Returns a callable taking (rng, threads) and producing an
    OptimizationRecord.  Incompatible operator/problem combinations fail here.
    """
    problem = cfg.problem
    violations = validate_problem(problem)
    if violations:
        raise ConfigError("invalid problem: " + "; ".join(violations))

    def check_variants(variants):
        for v in variants:
            if v == "free_replace" and problem.group_constrained:
                raise ConfigError(
                    "free_replace mutation cannot be used on a group-constrained "
                    "problem"
                )
            if v == "within_group_replace" and not problem.group_constrained:
                raise ConfigError(
                    "within_group_replace mutation requires a group-constrained "
                    "problem"
                )

    evaluator = make_evaluator(problem)
    if cfg.methodology == "genetic_algorithm":
        if cfg.ga is None:
            raise ConfigError("genetic_algorithm methodology requires a GA config")
        if cfg.ga.crossover_variant == "grouped" and not problem.group_constrained:
            raise ConfigError(
                "grouped crossover requires a group-constrained problem"
            )
        if cfg.ga.crossover_variant == "free" and problem.group_constrained:
            raise ConfigError(
                "free crossover cannot be used with fixed decision groups"
            )
        check_variants(cfg.ga.mutation_variants)

        def runnable(rng: np.random.Generator, threads: int = 1):
            return ga_run(problem, cfg.ga, evaluator, rng, threads=threads)

    else:
        if cfg.sa is None:
            raise ConfigError(
                "simulated_annealing methodology requires an SA config"
            )
        check_variants(cfg.sa.perturbation_variants)

        def runnable(rng: np.random.Generator, threads: int = 1):
            return sa_run(problem, cfg.sa, evaluator, rng)

    return runnable


def run(cfg: RunConfig) -> OptimizationRecord:
    """Build the configured optimizer and execute it with the configured seed."""
    runnable = build_optimizer(cfg)
    rng = np.random.default_rng(cfg.seed)
    record = runnable(rng, cfg.threads)
    record.seed = cfg.seed
    return record
