"""Run reports: delimited traces, the best-solution file, and a progress figure."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .record import OptimizationRecord


def _fmt(x: float) -> str:
    return repr(float(x))


def write_reports(
    record: OptimizationRecord,
    out_dir: str | Path,
    config_digest: str | None = None,
) -> dict[str, Path]:
    """Write trace.csv, progress.csv, best.json, and progress.png.

    CSV output is comma-delimited with '.' decimals and LF line endings, so
    identical records produce byte-identical files on any platform.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = record.objective_names

    trace_path = out / "trace.csv"
    with open(trace_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["index", "stage", *names, "fitness", "accepted", "best_so_far", "note"]
        )
        for row in record.rows:
            writer.writerow(
                [
                    row.index,
                    row.stage,
                    *[_fmt(row.objectives[n]) for n in names],
                    _fmt(row.fitness),
                    int(row.accepted),
                    _fmt(row.best_so_far),
                    row.note,
                ]
            )

    progress_path = out / "progress.csv"
    with open(progress_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["stage", "stage_max_fitness", "best_fitness"])
        for s in record.stages:
            writer.writerow([s.stage, _fmt(s.stage_max), _fmt(s.best_so_far)])

    best_path = out / "best.json"
    payload = {
        "method": record.method,
        "seed": record.seed,
        "config_digest": config_digest,
        "assignment": list(record.best_solution.assignment),
        "objectives": {n: record.best_solution.evaluation[n] for n in names},
        "breakdown": record.best_breakdown.contributions,
        "fitness": record.best_breakdown.total,
    }
    with open(best_path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

    figure_path = out / "progress.png"
    stages = [s.stage for s in record.stages]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(stages, [s.best_so_far for s in record.stages], label="best so far")
    ax.plot(
        stages,
        [s.stage_max for s in record.stages],
        alpha=0.6,
        label="stage maximum",
    )
    unit = "generation" if record.method == "genetic_algorithm" else "step"
    ax.set_xlabel(unit)
    ax.set_ylabel("objective function value")
    ax.set_title(f"{record.method} progress")
    ax.legend()
    fig.tight_layout()
    fig.savefig(figure_path, dpi=120)
    plt.close(fig)

    return {
        "trace": trace_path,
        "progress": progress_path,
        "best": best_path,
        "figure": figure_path,
    }
