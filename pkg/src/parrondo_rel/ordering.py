"""Grid checks of the usual stochastic order and of the mixture-paradox conditions.

All "for every t >= 0" statements are certified on a finite grid only; every
:class:`OrderingReport` records the grid size so callers can see the resolution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import UnderflowError
from .grids import default_grid
from .survival import (UNDERFLOW_LEVEL, SurvivalFunction, hazard_rate, validate_survival)

SURVIVAL_TOL = 1e-12
DERIVATIVE_TOL = 1e-6
GRID_CAVEAT = "grid-certified: checked at the listed grid points only, not proven for all t >= 0"


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class OrderingReport:
    """Outcome of a grid check.

    ``margin`` is the smallest slack of the checked inequality over the grid;
    the check fails when it drops below ``-tolerance``, and ``witness_t``
    then names the worst grid point.
    """

    verdict: Verdict
    margin: float
    grid_size: int
    tolerance: float
    witness_t: Optional[float] = None
    name: str = ""
    skipped: int = 0
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "margin": self.margin,
            "witness_t": self.witness_t,
            "grid_size": self.grid_size,
            "tolerance": self.tolerance,
            "skipped": self.skipped,
            "details": self.details,
        }


def _report_from_slack(grid: np.ndarray, slack: np.ndarray, tolerance: float, name: str,
                       skipped: int = 0, details: dict | None = None) -> OrderingReport:
    finite = np.isfinite(slack)
    if not finite.any():
        return OrderingReport(Verdict.INCONCLUSIVE, float("nan"), int(grid.size), tolerance,
                              name=name, skipped=skipped, details=details or {})
    masked = np.where(finite, slack, np.inf)
    i = int(np.argmin(masked))
    margin = float(masked[i])
    if margin < -tolerance:
        return OrderingReport(Verdict.FAILS, margin, int(grid.size), tolerance, witness_t=float(grid[i]),
                              name=name, skipped=skipped, details=details or {})
    return OrderingReport(Verdict.HOLDS, margin, int(grid.size), tolerance,
                          name=name, skipped=skipped, details=details or {})


def _grid_or_default(grid, *functions) -> np.ndarray:
    if grid is None:
        return default_grid(*functions)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty one-dimensional array")
    if np.any(grid < 0) or np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted and non-negative")
    return grid


def check_st_order(lower: SurvivalFunction, upper: SurvivalFunction, grid=None,
                   tolerance: float = SURVIVAL_TOL) -> OrderingReport:
    """Is ``lower <=_st upper``, i.e. ``lower(t) <= upper(t)`` at every grid point?"""
    grid = _grid_or_default(grid, lower, upper)
    slack = upper.eval(grid) - lower.eval(grid)
    return _report_from_slack(grid, slack, tolerance, f"{lower.label} <=st {upper.label}")


def paradox_slacks(F1, F2, G1, G2, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pointwise slacks of the mixed-system dominance and of the two unit orderings."""
    f1, f2, g1, g2 = F1.eval(t), F2.eval(t), G1.eval(t), G2.eval(t)
    return (f1 + f2) ** 2 / 4.0 - g1 * g2, g1 - f1, g2 - f2


def check_paradox_conditions(F1: SurvivalFunction, F2: SurvivalFunction, G1: SurvivalFunction,
                             G2: SurvivalFunction, grid=None,
                             tolerance: float = SURVIVAL_TOL) -> tuple[OrderingReport, OrderingReport]:
    """Reports for ``X* >=_st Y`` (first) and ``X_i <=_st Y_i`` for both units (second).

    Both holding means the randomised weaker system beats the stronger one
    on the grid, although each of its units is individually worse.
    """
    grid = _grid_or_default(grid, F1, F2, G1, G2)
    mixed, unit1, unit2 = paradox_slacks(F1, F2, G1, G2, grid)
    cond_i = _report_from_slack(grid, mixed, tolerance, "mixed system dominates: Xstar >=st Y")
    # worst of the two unit orderings, pointwise
    units = np.minimum(unit1, unit2)
    cond_ii = _report_from_slack(grid, units, tolerance, "unit ordering: X1 <=st Y1 and X2 <=st Y2",
                                 details={"margin_unit1": float(np.min(unit1)),
                                          "margin_unit2": float(np.min(unit2))})
    return cond_i, cond_ii


# ---------------------------------------------------------------------------
# feasibility region in ratio coordinates


@dataclass(frozen=True)
class FeasibilityPoint:
    """Excess reliability ratios ``x_i = G_i/F_i - 1`` and the admissible level ``a`` at time ``t``."""

    t: float
    x1: float
    x2: float
    a: float
    # survival values, kept to express the shared absolute tolerance in ratio units
    f1: float = field(repr=False, default=1.0)
    f2: float = field(repr=False, default=1.0)

    @property
    def excess(self) -> float:
        """``x1 + x2 + x1 x2``, which must not exceed ``a``."""
        return self.x1 + self.x2 + self.x1 * self.x2

    def feasible(self, tolerance: float = 0.0) -> bool:
        """Region membership with an absolute survival-scale ``tolerance``.

        The tolerance is divided by the survival values so it means the same
        thing as the tolerance used on the direct inequalities.
        """
        return bool(self.x1 >= -tolerance / self.f1
                    and self.x2 >= -tolerance / self.f2
                    and self.a - self.excess >= -tolerance / (self.f1 * self.f2))


def feasibility_point(F1, F2, G1, G2, t: float) -> FeasibilityPoint:
    f1, f2 = F1.eval(t), F2.eval(t)
    if min(f1, f2) < UNDERFLOW_LEVEL:
        raise UnderflowError(f"survival of the first system's units underflows at t={t!r}")
    x1 = G1.eval(t) / f1 - 1.0
    x2 = G2.eval(t) / f2 - 1.0
    a = (f1 - f2) ** 2 / (4.0 * f1 * f2)
    return FeasibilityPoint(float(t), x1, x2, a, f1, f2)


def direct_conditions(F1, F2, G1, G2, t: float, tolerance: float = 0.0) -> bool:
    """Both paradox conditions evaluated directly on survival values at one time."""
    mixed, unit1, unit2 = paradox_slacks(F1, F2, G1, G2, t)
    return bool(mixed >= -tolerance and unit1 >= -tolerance and unit2 >= -tolerance)


def feasibility_table(F1, F2, G1, G2, grid=None) -> list[FeasibilityPoint]:
    grid = _grid_or_default(grid, F1, F2, G1, G2)
    points = []
    for t in grid:
        try:
            points.append(feasibility_point(F1, F2, G1, G2, float(t)))
        except UnderflowError:
            continue
    return points


# ---------------------------------------------------------------------------
# sufficient families


@dataclass(frozen=True)
class BoundCurve:
    """An upper envelope from one of the sufficient families.

    Not necessarily a survival function; :meth:`promote` validates it first.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    label: str

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        out = np.asarray(self.fn(np.asarray(t, dtype=float)), dtype=float)
        return float(out) if scalar else out

    def promote(self, grid=None) -> SurvivalFunction:
        hint = float(np.max(grid)) if grid is not None else None
        F = SurvivalFunction(eval_fn=self.fn, label=self.label, support_hint=hint)
        return validate_survival(F, grid)


def sufficient_family_a_bound(F1: SurvivalFunction, F2: SurvivalFunction) -> BoundCurve:
    """Largest second unit ``G2`` allowed when ``G1 = F1``: ``(F1 + F2)^2 / (4 F1)``."""
    s1, s2 = F1.eval_fn, F2.eval_fn
    return BoundCurve(lambda t: (s1(t) + s2(t)) ** 2 / (4.0 * s1(t)), f"band_a({F1.label}, {F2.label})")


def sufficient_family_b_bound(F1: SurvivalFunction, F2: SurvivalFunction) -> BoundCurve:
    """Largest ``G1`` allowed when ``G1/F1 = G2/F2``: ``(F1 + F2)/2 * sqrt(F1/F2)``."""
    s1, s2 = F1.eval_fn, F2.eval_fn
    return BoundCurve(lambda t: 0.5 * (s1(t) + s2(t)) * np.sqrt(s1(t) / s2(t)),
                      f"band_b({F1.label}, {F2.label})")


def check_within_band(curve: SurvivalFunction, lower: SurvivalFunction, upper: BoundCurve, grid=None,
                      tolerance: float = SURVIVAL_TOL) -> OrderingReport:
    """``lower(t) <= curve(t) <= upper(t)`` on the grid."""
    grid = _grid_or_default(grid, curve, lower)
    values = curve.eval(grid)
    slack = np.minimum(values - lower.eval(grid), upper(grid) - values)
    return _report_from_slack(grid, slack, tolerance, f"{curve.label} within [{lower.label}, {upper.label}]")


# ---------------------------------------------------------------------------
# necessary conditions at the origin


def _mixed_gap(F1, F2, G1, G2) -> Callable:
    """``[(F1 + F2)/2]^2 - G1 G2``; zero at the origin and non-negative under the conditions."""
    return lambda t: (F1.eval(t) + F2.eval(t)) ** 2 / 4.0 - G1.eval(t) * G2.eval(t)


def _unit_gap(F, G) -> Callable:
    return lambda t: G.eval(t) - F.eval(t)


def density_at_zero(F: SurvivalFunction, h: float = 1e-6) -> tuple[float, bool]:
    """Density at the origin and whether the estimate is trustworthy.

    Analytic densities are exact. Otherwise a forward difference with
    Richardson extrapolation is used, and it is flagged unreliable when the
    two step sizes disagree badly.
    """
    if F.has_density:
        return F.density(0.0), True
    d_h = (1.0 - F.eval(h)) / h
    d_h2 = (1.0 - F.eval(h / 2)) / (h / 2)
    estimate = 2.0 * d_h2 - d_h
    ok = np.isfinite(estimate) and abs(d_h - d_h2) <= 1e-3 * max(1.0, abs(estimate))
    return float(estimate), bool(ok)


def necessary_conditions(F1, F2, G1, G2, tolerance: float = DERIVATIVE_TOL) -> OrderingReport:
    """Matching densities at the origin, ``f_i(0) = g_i(0)``, required by the paradox conditions."""
    (f1, ok1), (f2, ok2), (g1, ok3), (g2, ok4) = (density_at_zero(F) for F in (F1, F2, G1, G2))
    gap1, gap2 = abs(f1 - g1), abs(f2 - g2)
    margin = -max(gap1, gap2)
    details = {"f1_0": f1, "g1_0": g1, "f2_0": f2, "g2_0": g2}
    name = "matching densities at t=0"
    if not all((ok1, ok2, ok3, ok4)):
        return OrderingReport(Verdict.INCONCLUSIVE, margin, 1, tolerance, name=name, details=details)
    if margin < -tolerance:
        return OrderingReport(Verdict.FAILS, margin, 1, tolerance, witness_t=0.0, name=name, details=details)
    return OrderingReport(Verdict.HOLDS, margin, 1, tolerance, name=name, details=details)


# ---------------------------------------------------------------------------
# hazard-rate identity


def hazard_identity_check(F1, F2, G1, G2, grid=None, rel_tol: float = DERIVATIVE_TOL,
                          ratio_tol: float = 1e-9) -> OrderingReport:
    """Equal hazard gaps ``h_G1 - h_F1 = h_G2 - h_F2`` on the grid.

    The same property is checked a second way, through the survival ratios
    ``G1/F1 = G2/F2``; the verdict is inconclusive if the two routes disagree.
    Points where any survival underflows are skipped and counted.
    """
    grid = _grid_or_default(grid, F1, F2, G1, G2)
    funcs = (F1, F2, G1, G2)
    surv = np.array([F.eval(grid) for F in funcs])
    usable = np.all(surv >= UNDERFLOW_LEVEL, axis=0)
    t = grid[usable]
    skipped = int(grid.size - t.size)
    hF1, hF2, hG1, hG2 = (hazard_rate(F, t) for F in funcs)
    gap = np.abs((hG1 - hF1) - (hG2 - hF2))
    scale = np.maximum.reduce([np.abs(hF1), np.abs(hF2), np.abs(hG1), np.abs(hG2), np.full(t.shape, 1e-300)])
    hazard_report = _report_from_slack(t, -gap / scale, rel_tol, "hazard gaps agree", skipped=skipped)

    f1, f2, g1, g2 = surv[:, usable]
    r1, r2 = g1 / f1, g2 / f2
    ratio_slack = -np.abs(r1 - r2) / np.maximum(np.abs(r1), np.abs(r2))
    ratio_report = _report_from_slack(t, ratio_slack, ratio_tol, "survival ratios agree")

    details = {"ratio_verdict": ratio_report.verdict.value, "ratio_margin": ratio_report.margin,
               "ratio_witness_t": ratio_report.witness_t}
    verdict = hazard_report.verdict
    if ratio_report.verdict is not hazard_report.verdict:
        verdict = Verdict.INCONCLUSIVE
    witness = hazard_report.witness_t if verdict is Verdict.FAILS else None
    return OrderingReport(verdict, hazard_report.margin, int(grid.size), rel_tol, witness_t=witness, name="hazard-rate identity",
                          skipped=skipped, details=details)
