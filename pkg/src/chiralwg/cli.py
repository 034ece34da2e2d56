"""Command-line front end.

Subcommands: steady | sweep | dynamics | analytic | validate.
Exit codes: 0 ok, 1 validation checks failed, 2 config/validation error,
3 numerical error (singular system), 4 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import analytic_pm, analytic_xi_max, diagonal_angles, predict_riel_minima
from .config import RunConfig, build_problem, load_config, sweep_spec_from_config
from .dynamics import integrate, write_trajectory_csv
from .errors import DomainError, OverlappingSets, SingularSystem, ValidationError, ZeroExcitation
from .metrics import compute_metrics
from .model import build_coupling_matrix, build_drive_vector, central_site
from .solver import solve_steady_state
from .sweep import run_sweep
from .validation import run_all, summarize, write_report
from .writers import populations_csv_text, provenance, sweep_csv_text, table_csv_text, write_json, write_text

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _load(args) -> RunConfig:
    if args.config is None:
        raise ValidationError(f"--config is required for the {args.command} command")
    return load_config(args.config)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("CHIRALWG_THREADS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"CHIRALWG_THREADS must be an integer, got {env!r}")
    return 0


def _json_float(x: float):
    return None if np.isnan(x) else float(x)


def cmd_steady(args) -> int:
    cfg = _load(args)
    if cfg.sweep is not None:
        raise ValidationError("the steady command takes a config without a sweep section")
    geom, couplings, scheme = build_problem(cfg)
    matrix = build_coupling_matrix(geom, couplings)
    state = solve_steady_state(matrix, build_drive_vector(geom, scheme))
    mset = compute_metrics(state.populations, scheme)
    out = _outdir(args)
    write_text(out / "populations.csv", populations_csv_text(state))
    sidecar = {
        "config": cfg.to_dict(),
        "metrics": {
            "ipr": mset.ipr,
            "iipr": mset.iipr,
            "riel": _json_float(mset.riel),
            "p_interface": mset.p_interface,
            "p_edge": mset.p_edge,
            "p_defect": mset.p_defect,
            "p_m": float(state.populations[central_site(geom.n_atoms) - 1]),
            "interface_indices": list(mset.interface_indices),
        },
        "diagnostics": {
            "raw_excitation": state.raw_excitation,
            "condition_estimate": state.condition_estimate,
            "weak_excitation_ok": state.weak_excitation_ok,
            "residual_norm": state.residual_norm,
        },
        "provenance": provenance(),
    }
    write_json(out / "steady.json", sidecar)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args)
    spec = sweep_spec_from_config(cfg)
    result = run_sweep(spec, threads=_threads(args))
    out = _outdir(args)
    write_text(out / "sweep.csv", sweep_csv_text(result))
    write_json(
        out / "sweep.json",
        {
            "config": cfg.to_dict(),
            "status_counts": result.status_counts(),
            "cells": int(result.status.size),
            "provenance": result.provenance,
        },
    )
    return EXIT_OK


def cmd_dynamics(args) -> int:
    cfg = _load(args)
    geom, couplings, scheme = build_problem(cfg)
    matrix = build_coupling_matrix(geom, couplings)
    record = integrate(
        matrix,
        build_drive_vector(geom, scheme),
        t_end=cfg.dynamics.t_end,
        dt=cfg.dynamics.dt,
        snapshot_stride=cfg.dynamics.snapshot_stride,
    )
    out = _outdir(args)
    write_trajectory_csv(record, out / "trajectory.csv")
    write_json(
        out / "dynamics.json",
        {
            "config": cfg.to_dict(),
            "converged": record.converged,
            "final_derivative_norm": record.final_derivative_norm,
            "provenance": provenance(),
        },
    )
    return EXIT_OK


def cmd_analytic(args) -> int:
    cfg = _load(args)
    if cfg.analytic is None:
        raise ValidationError("the analytic command requires an analytic section")
    ana = cfg.analytic
    out = _outdir(args)

    pm_rows = []
    xi_grid = (np.arange(ana.xi_count) + 0.5) * (np.pi / ana.xi_count)
    for n in ana.n_atoms:
        for xi in xi_grid:
            pm_rows.append([n, float(xi), analytic_pm(n, float(xi))])
    write_text(out / "analytic_pm.csv", table_csv_text(["n_atoms", "xi", "pm"], pm_rows))

    max_rows = []
    for n in ana.n_atoms:
        xi_max = analytic_xi_max(n, ana.branch_k)
        pm_at_max = analytic_pm(n, xi_max) if abs(np.sin(xi_max)) > 1e-9 else float("nan")
        max_rows.append([n, ana.branch_k, xi_max, pm_at_max])
    write_text(
        out / "xi_max.csv",
        table_csv_text(["n_atoms", "branch_k", "xi_max", "pm_at_max"], max_rows),
    )

    if ana.riel_xi is not None:
        minima_rows = []
        for n in ana.n_atoms:
            for diff in predict_riel_minima(n, ana.riel_xi):
                theta1, theta2 = diagonal_angles(diff)
                minima_rows.append([n, ana.riel_xi, diff, theta1, theta2])
        write_text(
            out / "riel_minima.csv",
            table_csv_text(
                ["n_atoms", "xi", "cos_difference", "theta1_diagonal", "theta2_diagonal"],
                minima_rows,
            ),
        )
    write_json(out / "analytic.json", {"config": cfg.to_dict(), "provenance": provenance()})
    return EXIT_OK


def cmd_validate(args) -> int:
    reports = run_all(filter=args.filter)
    out = _outdir(args)
    write_report(reports, out / "validation_report.json")
    print(summarize(reports))
    return EXIT_OK if all(r.status == "pass" for r in reports) else EXIT_CHECKS_FAILED


HANDLERS = {
    "steady": cmd_steady,
    "sweep": cmd_sweep,
    "dynamics": cmd_dynamics,
    "analytic": cmd_analytic,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="JSON run configuration")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help="sweep worker threads, 0 = auto (fallback: CHIRALWG_THREADS)",
    )
    common.add_argument("--seed", type=int, default=None, help="reserved; the engine is deterministic")
    parser = argparse.ArgumentParser(
        prog="chiralwg",
        description="Steady states and localization metrics of weakly driven chiral waveguide arrays",
    )
    parser.add_argument("--version", action="version", version=f"chiralwg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("steady", parents=[common], help="single steady-state solve, populations CSV + JSON sidecar")
    sub.add_parser("sweep", parents=[common], help="2D parameter sweep, long-format grid CSV")
    sub.add_parser("dynamics", parents=[common], help="fixed-step time integration, trajectory CSV")
    sub.add_parser("analytic", parents=[common], help="closed-form tables for the defect configuration")
    validate = sub.add_parser("validate", parents=[common], help="run the acceptance checks (exit 1 on failure)")
    validate.add_argument("--filter", default=None, help="run only checks whose id contains this substring")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except (ValidationError, DomainError, OverlappingSets) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularSystem, ZeroExcitation) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
