"""Command-line interface: ``parrondo-rel <command> [options]``.

Exit status: 0 on success or when every checked condition holds, 1 when a
check fails, 2 on usage or parameter errors, 3 when a numerical routine
fails (quadrature or sampling).
"""

from __future__ import annotations

import argparse
import datetime as _dt
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .errors import ConstructionError, ParameterError, ParrondoError
from .game import Allocation, GameSpec, simulate, sweep
from .grids import DEFAULT_POINTS, SPACINGS, make_grid
from .ordering import (GRID_CAVEAT, Verdict, check_paradox_conditions, check_within_band,
                       feasibility_table, hazard_identity_check, necessary_conditions,
                       sufficient_family_a_bound, sufficient_family_b_bound)
from .paper_models import (MODELS, Example1Params, build, example1_component_means,
                           example1_system_means, systems)
from .quadrature import integrate_survival
from .report import SCHEMA_VERSION, TIMESTAMP_KEY, to_csv, to_json, to_text
from .survival import UnderflowError, hazard_rate

SYSTEMS = ("X", "Y", "Xstar", "F1", "F2", "G1", "G2")
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

# fixed CSV column orders, one per command
CSV_COLUMNS = {
    "eval": ["t", "survival", "density", "hazard"],
    "mean": ["system", "mean", "error_bound", "t_max", "closed_form"],
    "order-check": ["name", "verdict", "margin", "witness_t", "grid_size", "tolerance", "skipped"],
    "feasible": ["t", "x1", "x2", "a", "excess", "feasible"],
    "bounds": ["t", "lower", "value", "upper", "within"],
    "game": ["allocation", "analytic_gain", "mc_gain", "mc_stderr", "ci95_low", "ci95_high", "n", "seed"],
    "sweep": ["model", "lambda", "nu", "allocation", "analytic_gain", "mc_gain", "mc_stderr",
              "ci95_low", "ci95_high", "n", "seed", "error"],
}


@dataclass
class Outcome:
    result: dict
    rows: list = field(default_factory=list)
    text: str = ""
    status: int = EXIT_OK
    grid: Optional[dict] = None


# ---------------------------------------------------------------------------
# argument parsing


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return n


def _seed(value: str) -> int:
    n = int(value)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return n


def _positive_float(value: str) -> float:
    x = float(value)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parrondo-rel",
        description="Series systems with randomly mixed units: survival, ordering checks and the lifetime game.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=MODELS, default="example1")
    common.add_argument("--output", choices=("json", "csv", "text"), default="json")

    single = argparse.ArgumentParser(add_help=False)
    single.add_argument("--lambda", dest="lam", type=float, default=1.0)
    single.add_argument("--nu", type=float, default=0.5)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid-points", type=_positive_int, default=DEFAULT_POINTS)
    grid.add_argument("--t-max", type=_positive_float, default=None,
                      help="grid end; defaults to the largest support hint of the model")
    grid.add_argument("--spacing", choices=SPACINGS, default="mixed")
    grid.add_argument("--tolerance", type=_positive_float, default=None,
                      help="override the absolute slack of the survival comparisons")

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--replications", type=_positive_int, default=100_000)
    mc.add_argument("--seed", type=_seed, default=0)

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("eval", parents=[common, single, grid], help="tabulate a survival function")
    p.add_argument("--system", choices=SYSTEMS, default="X")
    p = sub.add_parser("mean", parents=[common, single], help="expected lifetime by quadrature")
    p.add_argument("--system", choices=SYSTEMS, default="X")
    p.add_argument("--rel-tol", type=_positive_float, default=1e-12)
    sub.add_parser("order-check", parents=[common, single, grid], help="check the paradox conditions")
    sub.add_parser("feasible", parents=[common, single, grid], help="ratio-coordinate feasibility table")
    sub.add_parser("bounds", parents=[common, single, grid], help="sufficient-family envelope check")
    p = sub.add_parser("game", parents=[common, single, mc], help="analytic and Monte Carlo expected gain")
    p.add_argument("--allocation", choices=[a.value for a in Allocation] + ["both"], default="both")
    p.add_argument("--common-random-numbers", action="store_true",
                   help="share the second system's draws between allocations")
    p = sub.add_parser("sweep", parents=[common, mc], help="game over a grid of (lambda, nu)")
    p.add_argument("--lambda", dest="lam", type=float, nargs="+", default=[1.0])
    p.add_argument("--nu", type=float, nargs="*", default=None,
                   help="nu values; defaults to 0, lambda/4, lambda/2, 3 lambda/4, lambda")
    return parser


# ---------------------------------------------------------------------------
# commands


def _grid(args, quad) -> np.ndarray:
    t_max = args.t_max if args.t_max is not None else max(F.support_hint for F in quad)
    return make_grid(t_max, args.grid_points, args.spacing)


def _grid_info(args, grid: np.ndarray) -> dict:
    return {"points": int(grid.size), "t_max": float(grid[-1]), "spacing": args.spacing}


def _tol(args, default: float = 1e-12) -> float:
    return args.tolerance if args.tolerance is not None else default


def _report_text(title: str, reports) -> str:
    parts = [title]
    for r in reports:
        parts.append(to_text(f"[{r.verdict.value}] {r.name}", [
            ("margin", r.margin), ("witness_t", r.witness_t), ("grid_size", r.grid_size),
            ("tolerance", r.tolerance)]).rstrip("\n"))
    parts.append(GRID_CAVEAT)
    return "\n".join(parts) + "\n"


def cmd_eval(args) -> Outcome:
    quad = build(args.model, args.lam, args.nu)
    F = systems(quad)[args.system]
    t = _grid(args, quad)
    surv, dens = F.eval(t), F.density(t)
    rows = []
    for ti, s, d in zip(t, surv, dens):
        try:
            h = hazard_rate(F, float(ti))
        except UnderflowError:
            h = None
        rows.append({"t": float(ti), "survival": float(s), "density": float(d), "hazard": h})
    text = to_text(f"{args.system} on {t.size} grid points", [
        ("t_max", float(t[-1])), ("survival(t_max)", float(surv[-1]))])
    return Outcome({"system": args.system, "label": F.label, "points": rows}, rows, text,
                   grid=_grid_info(args, t))


def _closed_form_mean(args) -> Optional[float]:
    if args.model != "example1":
        return None
    params = Example1Params(args.lam, args.nu)
    ex, ey, exs = example1_system_means(params)
    ex1, ey1, ex2, ey2 = example1_component_means(params)
    return {"X": ex, "Y": ey, "Xstar": exs, "F1": ex1, "G1": ey1, "F2": ex2, "G2": ey2}[args.system]


def cmd_mean(args) -> Outcome:
    quad = build(args.model, args.lam, args.nu)
    res = integrate_survival(systems(quad)[args.system], args.rel_tol)
    row = {"system": args.system, "mean": res.value, "error_bound": res.error_bound, "t_max": res.t_max,
           "closed_form": _closed_form_mean(args)}
    text = to_text(f"E[{args.system}]", list(row.items()))
    return Outcome(row, [row], text)


def cmd_order_check(args) -> Outcome:
    quad = build(args.model, args.lam, args.nu)
    grid = _grid(args, quad)
    cond_i, cond_ii = check_paradox_conditions(*quad, grid=grid, tolerance=_tol(args))
    necessary = necessary_conditions(*quad)
    hazard = hazard_identity_check(*quad, grid=grid)
    reports = [cond_i, cond_ii, necessary]
    status = EXIT_FAIL if any(r.verdict is Verdict.FAILS for r in reports) else EXIT_OK
    result = {
        "condition_i": cond_i.to_dict(),
        "condition_ii": cond_ii.to_dict(),
        "necessary_conditions": necessary.to_dict(),
        # informational: only family-(b) quadruples are expected to satisfy it
        "hazard_identity": hazard.to_dict(),
        "caveat": GRID_CAVEAT,
    }
    rows = [r.to_dict() for r in (*reports, hazard)]
    return Outcome(result, rows, _report_text(f"order-check {args.model}", [*reports, hazard]), status,
                   grid=_grid_info(args, grid))


def cmd_feasible(args) -> Outcome:
    quad = build(args.model, args.lam, args.nu)
    tol = _tol(args)
    grid = _grid(args, quad)
    points = feasibility_table(*quad, grid=grid)
    rows = [{"t": p.t, "x1": p.x1, "x2": p.x2, "a": p.a, "excess": p.excess, "feasible": p.feasible(tol)}
            for p in points]
    n_bad = sum(not r["feasible"] for r in rows)
    first_bad = next((r["t"] for r in rows if not r["feasible"]), None)
    summary = {"grid_size": len(rows), "infeasible_points": n_bad, "first_infeasible_t": first_bad,
               "tolerance": tol, "caveat": GRID_CAVEAT}
    text = to_text(f"feasibility {args.model}", list(summary.items()))
    return Outcome({"summary": summary, "points": rows}, rows, text, EXIT_FAIL if n_bad else EXIT_OK,
                   grid=_grid_info(args, grid))


def cmd_bounds(args) -> Outcome:
    quad = build(args.model, args.lam, args.nu)
    F1, F2, G1, G2 = quad
    grid = _grid(args, quad)
    tol = _tol(args)
    if args.model == "example1":
        family, curve, lower, upper = "a", G2, F2, sufficient_family_a_bound(F1, F2)
    else:
        family, curve, lower, upper = "b", G1, F1, sufficient_family_b_bound(F1, F2)
    report = check_within_band(curve, lower, upper, grid, tol)
    lo, val, up = lower.eval(grid), curve.eval(grid), upper(grid)
    rows = [{"t": float(t), "lower": float(a), "value": float(v), "upper": float(b),
             "within": bool(v - a >= -tol and b - v >= -tol)} for t, a, v, b in zip(grid, lo, val, up)]
    result = {"family": family, "curve": curve.label, "check": report.to_dict(), "caveat": GRID_CAVEAT,
              "points": rows}
    status = EXIT_FAIL if report.verdict is Verdict.FAILS else EXIT_OK
    return Outcome(result, rows, _report_text(f"bounds family {family}, {curve.label}", [report]), status,
                   grid=_grid_info(args, grid))


def cmd_game(args) -> Outcome:
    quad = build(args.model, args.lam, args.nu)
    allocations = list(Allocation) if args.allocation == "both" else [Allocation(args.allocation)]
    results = [simulate(GameSpec(*quad, allocation=a, replications=args.replications, seed=args.seed),
                        common_random_numbers=args.common_random_numbers) for a in allocations]
    rows = [r.to_dict() for r in results]
    text = "".join(to_text(f"game ({r['allocation']})", list(r.items())) for r in rows)
    return Outcome({"common_random_numbers": args.common_random_numbers, "results": rows}, rows, text)


def cmd_sweep(args) -> Outcome:
    grid = []
    for lam in args.lam:
        nus = args.nu if args.nu is not None else [0.0, lam / 4, lam / 2, 3 * lam / 4, lam]
        grid.extend((lam, nu) for nu in nus)
    rows = [r.to_dict() for r in sweep(args.model, grid, args.replications, args.seed)]
    text = "".join(to_text(f"{r['model']} lambda={r['lambda']:g} nu={r['nu']:g} ({r['allocation']})",
                           [(k, r.get(k)) for k in ("analytic_gain", "mc_gain", "mc_stderr", "error")])
                   for r in rows)
    status = EXIT_FAIL if any(r["error"] for r in rows) else EXIT_OK
    return Outcome({"rows": rows}, rows, text, status)


COMMANDS = {
    "eval": cmd_eval,
    "mean": cmd_mean,
    "order-check": cmd_order_check,
    "feasible": cmd_feasible,
    "bounds": cmd_bounds,
    "game": cmd_game,
    "sweep": cmd_sweep,
}


def _model_block(args) -> dict:
    block: dict[str, Any] = {"name": args.model, "lambda": args.lam}
    if hasattr(args, "nu"):
        block["nu"] = args.nu
    return block


def render(args, outcome: Outcome) -> str:
    if args.output == "csv":
        return to_csv(outcome.rows, CSV_COLUMNS[args.command])
    if args.output == "text":
        return outcome.text
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "model": _model_block(args),
        "exit_status": outcome.status,
        "result": outcome.result,
        TIMESTAMP_KEY: _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    if outcome.grid is not None:
        payload["grid"] = outcome.grid
    return to_json(payload)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        outcome = COMMANDS[args.command](args)
    except (ParameterError, ConstructionError) as exc:
        print(f"parrondo-rel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParrondoError as exc:
        print(f"parrondo-rel: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        sys.stdout.write(render(args, outcome))
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stderr.close()
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
