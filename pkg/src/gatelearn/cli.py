"""Command-line front end.

Subcommands::

    grover        train the search oracle phase and write ensemble data
    aqft          train the banded Fourier phases likewise
    table1        optimized-phase improvement table as CSV
    grover-curve  ideal-search reference curve as CSV
    selftest      quick internal consistency checks

Every experiment writes ``manifest.json`` with the fully resolved
configuration (defaults included), so re-running a command with the
recorded values reproduces the data files byte for byte.  Output is
CSV/JSON for external plotting; no plotting code lives here.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .feedback import FeedbackConfig
from .grover import GroverInstance
from .harness import (
    ExperimentConfig,
    run_ensemble,
    write_histogram_csv,
    write_runs_csv,
    write_summary_json,
)
from .optimize import grover_reference_curve, improvement_table, improvement_table_csv
from .qft import AqftInstance

__all__ = ["parse_and_dispatch", "main"]

_STRATEGY_FLAGS = {"single-push": "single_push", "double-push": "double_push"}


def _int_list(text: str):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--iterations", type=int, default=120, help="training iterations per run")
    parser.add_argument("--runs", type=int, default=200, help="ensemble size")
    parser.add_argument("--grid-size", type=int, default=None,
                        help="parameter grid cells per axis (default 256; 64 for two-phase training)")
    parser.add_argument("--strategy", choices=sorted(_STRATEGY_FLAGS), default="double-push")
    parser.add_argument("--push-initial", type=int, default=None,
                        help="initial push magnitude in cells (default grid/32)")
    parser.add_argument("--push-asymmetry", type=float, default=1.0,
                        help="leftward/rightward push magnitude ratio")
    parser.add_argument("--walk-x", type=float, default=None,
                        help="walk strength cap x = lambda*dt/hbar (default 24)")
    parser.add_argument("--walk-step", type=int, default=None,
                        help="walk translation step in cells (default 1)")
    parser.add_argument("--walk-floor", type=float, default=None,
                        help="walk strength right after a success (default 1.5)")
    parser.add_argument("--walk-escalation", type=float, default=None,
                        help="consecutive failures per walk-strength doubling; 0 = constant (default 2)")
    parser.add_argument("--no-kickstart", action="store_true",
                        help="disable the first-failure inversion about the mean")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads (never affects results)")
    parser.add_argument("--snapshot-chi", action="store_true",
                        help="record per-iteration |chi|^2 snapshots (large)")
    parser.add_argument("--out", type=Path, required=True, help="output directory")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gatelearn",
        description="Train quantum-circuit phases by measurement back-action and feedback.",
    )
    parser.add_argument("--version", action="version", version=f"gatelearn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("grover", help="train the search oracle phase")
    g.add_argument("--n-elements", type=int, required=True, help="search-space size")
    _add_experiment_flags(g)

    a = sub.add_parser("aqft", help="train banded Fourier-transform phases")
    a.add_argument("--qubits", type=int, required=True)
    a.add_argument("--band", type=int, default=1, help="trained phase count (1 or 2)")
    _add_experiment_flags(a)

    t = sub.add_parser("table1", help="optimized-phase improvement table")
    t.add_argument("--qubits", type=_int_list, default=[6, 8, 10, 12, 14])
    t.add_argument("--bands", type=_int_list, default=[1, 2, 3])
    t.add_argument("--out", type=Path, required=True, help="output CSV file")

    c = sub.add_parser("grover-curve", help="ideal-search reference curve")
    c.add_argument("--n-elements", type=_int_list,
                   default=[16, 64, 200, 1024, 4096, 10000])
    c.add_argument("--out", type=Path, required=True, help="output CSV file")

    sub.add_parser("selftest", help="run quick internal consistency checks")
    return parser


def _experiment_config(args: argparse.Namespace, problem) -> tuple:
    two_axis = isinstance(problem, AqftInstance) and problem.band == 2
    grid_size = args.grid_size if args.grid_size is not None else (64 if two_axis else 256)
    feedback = FeedbackConfig(
        strategy=_STRATEGY_FLAGS[args.strategy],
        initial_push_cells=(
            args.push_initial if args.push_initial is not None else max(1, grid_size // 32)
        ),
        walk_strength=args.walk_x if args.walk_x is not None else 24.0,
        walk_step_cells=args.walk_step if args.walk_step is not None else 1,
        kickstart_enabled=not args.no_kickstart,
        push_asymmetry=args.push_asymmetry,
        walk_floor=args.walk_floor if args.walk_floor is not None else 1.5,
        walk_escalation=args.walk_escalation if args.walk_escalation is not None else 2.0,
    )
    config = ExperimentConfig(
        problem=problem,
        iterations=args.iterations,
        runs=args.runs,
        grid_size=grid_size,
        feedback=feedback,
        master_seed=args.seed,
        snapshot_chi=args.snapshot_chi,
    )
    return config, args.threads


def _manifest(args: argparse.Namespace, config: ExperimentConfig, problem_desc: dict) -> dict:
    fb = config.feedback
    return {
        "version": __version__,
        "command": args.command,
        "problem": problem_desc,
        "iterations": config.iterations,
        "runs": config.runs,
        "grid_size": config.grid_size,
        "master_seed": config.master_seed,
        "snapshot_chi": config.snapshot_chi,
        "threads": args.threads,
        "feedback": {
            "strategy": fb.strategy,
            "initial_push_cells": fb.initial_push_cells,
            "walk_strength": fb.walk_strength,
            "walk_step_cells": fb.walk_step_cells,
            "walk_floor": fb.walk_floor,
            "walk_escalation": fb.walk_escalation,
            "kickstart_enabled": fb.kickstart_enabled,
            "series_cutoff": fb.series_cutoff,
            "push_asymmetry": fb.push_asymmetry,
        },
    }


def _run_experiment(args: argparse.Namespace, problem, problem_desc: dict) -> int:
    config, threads = _experiment_config(args, problem)
    out_dir: Path = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    summary, results = run_ensemble(config, threads=threads)
    write_runs_csv(results, out_dir / "runs.csv")
    write_summary_json(summary, out_dir / "summary.json", extra={"problem": problem_desc})
    write_histogram_csv(summary, out_dir / "histogram.csv")
    if config.snapshot_chi:
        snaps = np.stack([run.chi_snapshots for run in results])
        np.save(out_dir / "chi_snapshots.npy", snaps)
    manifest = _manifest(args, config, problem_desc)
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        f"{args.command}: {config.runs} runs x {config.iterations} iterations -> {out_dir}"
        f" (mean final success {summary.mean_final:.4f},"
        f" target {summary.target_success:.4f})"
    )
    return 0


def _cmd_grover(args: argparse.Namespace) -> int:
    problem = GroverInstance.standard(args.n_elements)
    desc = {
        "kind": "grover",
        "n_elements": problem.n_elements,
        "iterations_deep": problem.iterations,
    }
    return _run_experiment(args, problem, desc)


def _cmd_aqft(args: argparse.Namespace) -> int:
    problem = AqftInstance.standard(args.qubits, args.band)
    desc = {"kind": "aqft", "qubits": problem.n_qubits, "band": problem.band}
    return _run_experiment(args, problem, desc)


def _cmd_table1(args: argparse.Namespace) -> int:
    for n in args.qubits:
        for m in args.bands:
            if m > 3:
                raise ValueError(f"band {m} not supported; bands up to 3")
            if n < 2:
                raise ValueError(f"qubit count {n} too small")
    rows = improvement_table(args.qubits, args.bands)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(improvement_table_csv(rows))
    filled = sum(row["improvement_percent"] is not None for row in rows)
    print(f"table1: {filled}/{len(rows)} cells optimized -> {args.out}")
    return 0


def _cmd_grover_curve(args: argparse.Namespace) -> int:
    rows = grover_reference_curve(args.n_elements)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    lines = ["target_overlap,n_elements,max_success"]
    for row in rows:
        lines.append(
            f"{row['target_overlap']!r},{row['n_elements']},{row['max_success']!r}"
        )
    args.out.write_text("\n".join(lines) + "\n")
    print(f"grover-curve: {len(rows)} points -> {args.out}")
    return 0


def _cmd_selftest(_args: argparse.Namespace) -> int:
    from .selftest import run_selftest

    return run_selftest()


_DISPATCH = {
    "grover": _cmd_grover,
    "aqft": _cmd_aqft,
    "table1": _cmd_table1,
    "grover-curve": _cmd_grover_curve,
    "selftest": _cmd_selftest,
}


def parse_and_dispatch(argv=None) -> int:
    """Parse arguments, run the requested command, return the exit status.

    Configuration errors print a one-line diagnostic and yield exit
    status 2 (same as argparse usage errors).
    """
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"gatelearn {args.command}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(parse_and_dispatch())
