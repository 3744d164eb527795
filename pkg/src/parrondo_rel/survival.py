"""Survival functions, parametric families and the series/mixture combinators.

Every callable in this module is vectorised: it accepts a scalar or an
array of times and returns a float or an ``ndarray`` accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.polynomial import polyval

from .errors import ConstructionError, InvalidSurvivalError, ParameterError, UnderflowError

ArrayFn = Callable[[np.ndarray], np.ndarray]

# F(0) may deviate from 1 by at most this much
NORMALIZATION_TOL = 1e-9
# the support hint marks where survival drops below this level
SUPPORT_LEVEL = 1e-10
# survivals below this are treated as underflowed
UNDERFLOW_LEVEL = 1e-300
MONOTONE_SLACK = 1e-12


def _as_output(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


def _estimate_support_hint(sf: ArrayFn, start: float = 1.0, cap: float = 2.0**40) -> float:
    t = start
    while t < cap:
        value = float(sf(np.asarray(t)))
        if math.isfinite(value) and value < SUPPORT_LEVEL:
            return t
        t *= 2.0
    return cap


@dataclass(frozen=True, eq=False)
class SurvivalFunction:
    """A lifetime distribution described through its survival function.

    ``eval_fn`` maps time to P(T > t). ``density_fn`` and ``quantile_fn`` are
    optional analytic hooks; when absent, densities fall back to finite
    differences and quantiles to numerical root finding (see
    :mod:`parrondo_rel.sampling`).
    """

    eval_fn: ArrayFn
    density_fn: Optional[ArrayFn] = None
    quantile_fn: Optional[ArrayFn] = None
    label: str = "F"
    support_hint: Optional[float] = None
    hint_cap: float = field(default=2.0**40, repr=False)

    def __post_init__(self):
        at_zero = float(self.eval_fn(np.asarray(0.0)))
        if not abs(at_zero - 1.0) <= NORMALIZATION_TOL:
            raise InvalidSurvivalError(f"{self.label}: survival at t=0 is {at_zero!r}, expected 1")
        if self.support_hint is None:
            hint = _estimate_support_hint(self.eval_fn, cap=self.hint_cap)
            object.__setattr__(self, "support_hint", hint)
        elif not (self.support_hint > 0 and math.isfinite(self.support_hint)):
            raise ParameterError(f"support_hint must be positive and finite, got {self.support_hint!r}")

    def eval(self, t):
        scalar = np.ndim(t) == 0
        return _as_output(np.asarray(self.eval_fn(np.asarray(t, dtype=float)), dtype=float), scalar)

    __call__ = eval

    @property
    def has_density(self) -> bool:
        return self.density_fn is not None

    @property
    def has_quantile(self) -> bool:
        return self.quantile_fn is not None

    def density(self, t):
        """Density at ``t``; analytic when available, else Richardson-extrapolated differences."""
        scalar = np.ndim(t) == 0
        t = np.asarray(t, dtype=float)
        if self.density_fn is not None:
            return _as_output(np.asarray(self.density_fn(t), dtype=float), scalar)
        return _as_output(numeric_density(self.eval_fn, t), scalar)

    def quantile(self, u):
        if self.quantile_fn is None:
            raise NotImplementedError(f"{self.label} has no analytic quantile; use sampling.quantile")
        scalar = np.ndim(u) == 0
        return _as_output(np.asarray(self.quantile_fn(np.asarray(u, dtype=float)), dtype=float), scalar)

    def __repr__(self):
        return f"SurvivalFunction({self.label!r}, support_hint={self.support_hint:.6g})"


def numeric_density(sf: ArrayFn, t: np.ndarray) -> np.ndarray:
    """-dF/dt by Richardson-extrapolated differences (steps h and h/2).

    Central differences are used where ``t >= h``; closer to the origin the
    forward formula keeps evaluations inside the support.
    """
    t = np.asarray(t, dtype=float)
    h = 1e-6 * np.maximum(1.0, t)
    central = t >= h

    # clamp so the central branch never evaluates at negative times
    tc = np.where(central, t, h)
    c_h = (sf(tc - h) - sf(tc + h)) / (2.0 * h)
    c_h2 = (sf(tc - h / 2) - sf(tc + h / 2)) / h
    f_h = (sf(t) - sf(t + h)) / h
    f_h2 = (sf(t) - sf(t + h / 2)) / (h / 2)
    return np.where(central, (4.0 * c_h2 - c_h) / 3.0, 2.0 * f_h2 - f_h)


def validate_survival(F: SurvivalFunction, grid: np.ndarray | None = None,
                      slack: float = MONOTONE_SLACK) -> SurvivalFunction:
    """Check range and monotonicity of ``F`` on ``grid``; return ``F`` unchanged.

    Raises :class:`ConstructionError` carrying the first offending time.
    """
    if grid is None:
        from .grids import make_grid
        grid = make_grid(5.0 * F.support_hint)
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(F.eval(grid), dtype=float)
    bad = ~np.isfinite(values) | (values < -slack) | (values > 1.0 + slack)
    if bad.any():
        i = int(np.argmax(bad))
        raise ConstructionError(f"{F.label}: value {values[i]!r} outside [0, 1] at t={grid[i]!r}",
                                witness_t=float(grid[i]))
    rises = np.diff(values) > slack
    if rises.any():
        i = int(np.argmax(rises)) + 1
        raise ConstructionError(f"{F.label}: survival increases at t={grid[i]!r}", witness_t=float(grid[i]))
    return F


# ---------------------------------------------------------------------------
# parametric families


def _check_rate(lam: float, name: str = "lambda") -> float:
    lam = float(lam)
    if not (math.isfinite(lam) and lam > 0):
        raise ParameterError(f"{name} must be positive and finite, got {lam!r}")
    return lam


def exponential(lam: float) -> SurvivalFunction:
    lam = _check_rate(lam)
    return SurvivalFunction(
        eval_fn=lambda t: np.exp(-lam * t),
        density_fn=lambda t: lam * np.exp(-lam * t),
        quantile_fn=lambda u: -np.log(u) / lam,
        label=f"exp({lam:g})",
        support_hint=-math.log(SUPPORT_LEVEL) / lam,
    )


def poly_exponential(coeffs: Sequence[float], lam: float, label: str | None = None) -> SurvivalFunction:
    """Survival ``p(t) exp(-lam t)`` for a polynomial ``p`` with ``p(0) = 1``.

    ``coeffs`` are in increasing degree. The density is ``(lam p - p') exp(-lam t)``.
    Monotonicity is not checked here; pass the result to :func:`validate_survival`.
    """
    lam = _check_rate(lam)
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0 or c[0] != 1.0:
        raise InvalidSurvivalError(f"polynomial factor must equal 1 at t=0, got coefficients {c!r}")
    # density polynomial lam*p - p'
    dc = lam * c - np.append(Polynomial(c).deriv().coef, 0.0)[: c.size]
    return SurvivalFunction(
        eval_fn=lambda t: polyval(t, c) * np.exp(-lam * t),
        density_fn=lambda t: polyval(t, dc) * np.exp(-lam * t),
        label=label or f"poly{tuple(np.round(c, 6))}*exp({lam:g})",
    )


def erlang2(lam: float) -> SurvivalFunction:
    """Sum of two exponential(lam) stages: ``(1 + lam t) exp(-lam t)``."""
    lam = _check_rate(lam)
    return poly_exponential([1.0, lam], lam, label=f"erlang2({lam:g})")


# ---------------------------------------------------------------------------
# combinators


def series(unit1: SurvivalFunction, unit2: SurvivalFunction, label: str | None = None) -> SurvivalFunction:
    """Lifetime of two independent units in series: the product of survivals."""
    s1, s2 = unit1.eval_fn, unit2.eval_fn
    density = None
    if unit1.has_density and unit2.has_density:
        d1, d2 = unit1.density_fn, unit2.density_fn
        density = lambda t: d1(t) * s2(t) + s1(t) * d2(t)
    return SurvivalFunction(
        eval_fn=lambda t: s1(t) * s2(t),
        density_fn=density,
        label=label or f"series({unit1.label}, {unit2.label})",
        support_hint=min(unit1.support_hint, unit2.support_hint),
    )


def _check_weight(weight: float) -> float:
    weight = float(weight)
    if not (0.0 <= weight <= 1.0):
        raise ParameterError(f"mixing weight must lie in [0, 1], got {weight!r}")
    return weight


def mixture_unit(base1: SurvivalFunction, base2: SurvivalFunction, weight: float = 0.5,
                 label: str | None = None) -> SurvivalFunction:
    """Unit drawn from ``base1`` with probability ``weight``, else from ``base2``."""
    w = _check_weight(weight)
    s1, s2 = base1.eval_fn, base2.eval_fn
    density = None
    if base1.has_density and base2.has_density:
        d1, d2 = base1.density_fn, base2.density_fn
        density = lambda t: w * d1(t) + (1.0 - w) * d2(t)
    return SurvivalFunction(
        eval_fn=lambda t: w * s1(t) + (1.0 - w) * s2(t),
        density_fn=density,
        label=label or f"mix({base1.label}, {base2.label}; {w:g})",
        support_hint=max(base1.support_hint, base2.support_hint),
    )


@dataclass(frozen=True)
class SeriesSystem:
    unit1: SurvivalFunction
    unit2: SurvivalFunction
    label: str = "series"

    def survival(self) -> SurvivalFunction:
        return series(self.unit1, self.unit2, label=self.label)


@dataclass(frozen=True)
class MixtureSystem:
    """Series system whose two units are each an independent mixture of ``base1`` and ``base2``."""

    base1: SurvivalFunction
    base2: SurvivalFunction
    weight: float = 0.5
    label: str = "Xstar"

    def __post_init__(self):
        _check_weight(self.weight)

    def unit(self) -> SurvivalFunction:
        return mixture_unit(self.base1, self.base2, self.weight)

    def survival(self) -> SurvivalFunction:
        return mixture_system_survival(self)


def mixture_system_survival(sys: MixtureSystem) -> SurvivalFunction:
    unit = sys.unit()
    return series(unit, unit, label=sys.label)


# ---------------------------------------------------------------------------
# hazard rate


def hazard_rate(F: SurvivalFunction, t):
    """``f(t) / F(t)``, or a central difference of ``-log F`` when no density is known."""
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError("hazard rate requires t >= 0")
    surv = np.asarray(F.eval_fn(t), dtype=float)
    if np.any(surv < UNDERFLOW_LEVEL):
        bad = t[surv < UNDERFLOW_LEVEL] if t.ndim else t
        raise UnderflowError(f"{F.label}: survival underflows at t={np.min(bad)!r}")
    if F.density_fn is not None:
        return _as_output(np.asarray(F.density_fn(t), dtype=float) / surv, scalar)
    h = 1e-6 * np.maximum(1.0, t)
    lo = np.maximum(t - h, 0.0)
    hi = t + h
    with np.errstate(divide="ignore"):
        rate = (np.log(F.eval_fn(lo)) - np.log(F.eval_fn(hi))) / (hi - lo)
    return _as_output(rate, scalar)
