"""Command-line interface.

Exit codes: 0 success, 1 configuration error, 2 evaluation error,
3 infeasible problem or enumeration-cap refusal.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CapExceededError, ConfigError, EvaluationError, GenerationError
from .evaluators import brute_force_optimum, make_evaluator
from .objective import compose_objective
from .problem import Solution, validate_problem
from .reporting import write_reports
from .runner import build_optimizer, config_digest, load_config, run


def _cmd_run(args) -> int:
    cfg = load_config(args.input)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.output_dir = args.out
    if args.threads is not None:
        cfg.threads = args.threads
    record = run(cfg)
    paths = write_reports(record, cfg.output_dir, config_digest(cfg))
    print(f"method: {record.method}")
    print(f"seed: {record.seed}")
    print(f"evaluations: {len(record.rows)}")
    print(f"best fitness: {record.best_breakdown.total}")
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def _cmd_validate(args) -> int:
    cfg = load_config(args.input)
    violations = validate_problem(cfg.problem)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return 1
    build_optimizer(cfg)
    print("configuration is valid")
    return 0


def _cmd_brute_force(args) -> int:
    cfg = load_config(args.input)
    violations = validate_problem(cfg.problem)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return 1
    kwargs = {} if args.cap is None else {"cap": args.cap}
    sol, fitness = brute_force_optimum(cfg.problem, **kwargs)
    print(f"optimum fitness: {fitness}")
    print("assignment: " + " ".join(sol.assignment))
    for name, value in sol.evaluation.items():
        print(f"{name} = {value}")
    return 0


def _cmd_replay(args) -> int:
    cfg = load_config(args.input)
    stored = json.loads(Path(args.best).read_text())
    sol = Solution(tuple(stored["assignment"]))
    evaluator = make_evaluator(cfg.problem)
    result = evaluator(sol)
    breakdown = compose_objective(result, cfg.problem.objectives)
    print(f"re-scored fitness: {breakdown.total}")
    for name, value in result.items():
        print(f"{name} = {value}")
    stored_f = stored.get("fitness")
    if stored_f is not None and abs(stored_f - breakdown.total) > 1e-9:
        print(f"warning: stored fitness {stored_f} differs from re-score")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combopt",
        description="Configuration-driven combinatorial design optimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an optimization run")
    p_run.add_argument("--input", required=True, help="configuration file")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None, help="report output directory")
    p_run.add_argument("--threads", type=int, default=None)
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="check a configuration file")
    p_val.add_argument("--input", required=True)
    p_val.set_defaults(func=_cmd_validate)

    p_bf = sub.add_parser(
        "brute-force", help="enumerate all feasible solutions for the optimum"
    )
    p_bf.add_argument("--input", required=True)
    p_bf.add_argument("--cap", type=int, default=None)
    p_bf.set_defaults(func=_cmd_brute_force)

    p_rep = sub.add_parser("replay", help="re-score a stored best solution")
    p_rep.add_argument("--best", required=True, help="best.json from a prior run")
    p_rep.add_argument("--input", required=True)
    p_rep.set_defaults(func=_cmd_replay)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except EvaluationError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return 2
    except (GenerationError, CapExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())
