"""The two concrete quadruples ``(F1, F2, G1, G2)`` for which the mixed system wins.

In both families the first system's units are stochastically smaller than
the second system's, yet the equal-weight mixture of the first system's units
yields a series system that is stochastically larger than the second system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import ConstructionError, ParameterError
from .grids import make_grid
from .survival import (MixtureSystem, SurvivalFunction, exponential, poly_exponential, series,
                       validate_survival)

MODELS = ("example1", "example2")


class Quadruple(NamedTuple):
    F1: SurvivalFunction
    F2: SurvivalFunction
    G1: SurvivalFunction
    G2: SurvivalFunction


def _check_params(lam: float, nu: float) -> None:
    if not (math.isfinite(lam) and lam > 0):
        raise ParameterError(f"lambda must be positive and finite, got {lam!r}")
    if not (math.isfinite(nu) and 0 <= nu <= lam):
        raise ParameterError(f"nu must satisfy 0 <= nu <= lambda, got nu={nu!r}, lambda={lam!r}")


@dataclass(frozen=True)
class Example1Params:
    lam: float = 1.0
    nu: float = 0.5

    def __post_init__(self):
        _check_params(self.lam, self.nu)


@dataclass(frozen=True)
class Example2Params:
    lam: float = 1.0
    nu: float = 0.5

    def __post_init__(self):
        _check_params(self.lam, self.nu)


def _standard_grid(*functions: SurvivalFunction) -> np.ndarray:
    return make_grid(5.0 * max(F.support_hint for F in functions))


def example1(params: Example1Params) -> Quadruple:
    """Exponential first units and second units on the family-(a) band.

    ``F1 = G1 = e^{-lt}``, ``F2 = (1 + lt) e^{-lt}`` and
    ``G2 = [(1 + lt/2)^2 - (nt/2)^2] e^{-lt}`` with ``l = lam``, ``n = nu``.
    """
    lam, nu = params.lam, params.nu
    F1 = exponential(lam)
    G1 = exponential(lam)
    F2 = poly_exponential([1.0, lam], lam, label="F2")
    G2 = poly_exponential([1.0, lam, (lam**2 - nu**2) / 4.0], lam, label="G2")
    F1 = _relabel(F1, "F1")
    G1 = _relabel(G1, "G1")
    validate_survival(G2, _standard_grid(G2))
    return Quadruple(F1, F2, G1, G2)


def example1_component_means(params: Example1Params) -> tuple[float, float, float, float]:
    """Closed-form ``(E X1, E Y1, E X2, E Y2)``."""
    lam, ratio = params.lam, params.nu / params.lam
    return 1.0 / lam, 1.0 / lam, 2.0 / lam, 2.0 / lam + (1.0 - ratio**2) / (2.0 * lam)


def example1_system_means(params: Example1Params) -> tuple[float, float, float]:
    """Closed-form ``(E X, E Y, E X*)`` for the example-1 systems."""
    lam, ratio = params.lam, params.nu / params.lam
    return 3.0 / (4.0 * lam), 13.0 / (16.0 * lam) - ratio**2 / (16.0 * lam), 13.0 / (16.0 * lam)


def _example2_g2(lam: float, nu: float) -> SurvivalFunction:
    a, b = nu**2 / 8.0, lam / 2.0

    def sf(t):
        return (1.0 + a * t**2 / (1.0 + b * t)) * np.exp(-lam * t)

    def pdf(t):
        q = 1.0 + a * t**2 / (1.0 + b * t)
        dq = a * t * (2.0 + b * t) / (1.0 + b * t) ** 2
        return (lam * q - dq) * np.exp(-lam * t)

    return SurvivalFunction(sf, pdf, label="G2")


def example2(params: Example2Params) -> Quadruple:
    """Family-(b) quadruple built from ``u(t) = 1 + lt/2``.

    ``F1 = u^2 e^{-lt}``, ``F2 = e^{-lt}``, ``G1 = u [u + (nt)^2/8] e^{-lt}``
    and ``G2 = G1 / u^2``, so ``G1/F1 = G2/F2`` for every ``t``.
    """
    lam, nu = params.lam, params.nu
    F1 = poly_exponential([1.0, lam, lam**2 / 4.0], lam, label="F1")
    F2 = _relabel(exponential(lam), "F2")
    # (1 + lt/2)(1 + lt/2 + n^2 t^2/8) expanded
    G1 = poly_exponential([1.0, lam, lam**2 / 4.0 + nu**2 / 8.0, lam * nu**2 / 16.0], lam, label="G1")
    G2 = _example2_g2(lam, nu)
    quad = Quadruple(F1, F2, G1, G2)
    grid = _standard_grid(*quad)
    for F in quad:
        validate_survival(F, grid)
    return quad


def _relabel(F: SurvivalFunction, label: str) -> SurvivalFunction:
    return SurvivalFunction(F.eval_fn, F.density_fn, F.quantile_fn, label, F.support_hint)


def _derivative(fn: Callable, t: np.ndarray) -> np.ndarray:
    h = 1e-6 * np.maximum(1.0, t)
    lo = np.maximum(t - h, 0.0)
    return (fn(t + h) - fn(lo)) / (t + h - lo)


def example2_custom(u: Callable, g1_selector: float, lam: float, du: Optional[Callable] = None,
                    grid: Optional[np.ndarray] = None) -> Quadruple:
    """Family-(b) quadruple for a user-supplied generator ``u``.

    ``u`` must be vectorised, satisfy ``u(0) = 1``, ``u >= 0`` and
    ``u' <= lam u / 2``; the growth bound is checked numerically on the grid.
    ``g1_selector`` places ``G1`` inside its admissible band, 0 at the lower
    edge ``F1 = u^2 e^{-lt}`` and 1 at the upper edge
    ``u (1 + u^2)/2 e^{-lt}``. ``du``, when given, is used for analytic densities.
    """
    if not (math.isfinite(lam) and lam > 0):
        raise ParameterError(f"lambda must be positive and finite, got {lam!r}")
    s = float(g1_selector)
    if not 0.0 <= s <= 1.0:
        raise ParameterError(f"g1_selector must lie in [0, 1], got {g1_selector!r}")
    if abs(float(u(np.asarray(0.0))) - 1.0) > 1e-12:
        raise ConstructionError("generator must satisfy u(0) = 1", witness_t=0.0)

    base = exponential(lam)
    # u is at most exp(lam t / 2), so 16 exponential hints keep every product finite
    cap = 16.0 * base.support_hint
    if grid is None:
        grid = make_grid(cap / 2.0)
    grid = np.asarray(grid, dtype=float)
    uv = u(grid)
    if np.any(uv < 0) or not np.all(np.isfinite(uv)):
        i = int(np.argmax((uv < 0) | ~np.isfinite(uv)))
        raise ConstructionError(f"generator is negative or non-finite at t={grid[i]!r}", witness_t=float(grid[i]))
    slope = _derivative(u, grid) if du is None else du(grid)
    excess = slope - lam * uv / 2.0
    allowed = 1e-6 * np.maximum(1.0, lam * np.abs(uv) / 2.0)
    if np.any(excess > allowed):
        i = int(np.argmax(excess > allowed))
        raise ConstructionError(f"growth condition u' <= lam u / 2 violated at t={grid[i]!r}",
                                witness_t=float(grid[i]))

    decay = lambda t: np.exp(-lam * t)
    lower = lambda t: u(t) ** 2 * decay(t)
    upper = lambda t: u(t) * (1.0 + u(t) ** 2) / 2.0 * decay(t)
    g1 = lambda t: (1.0 - s) * lower(t) + s * upper(t)
    g2 = lambda t: g1(t) / u(t) ** 2

    d_lower = d_upper = d_g1 = d_g2 = None
    if du is not None:
        d_lower = lambda t: (lam * u(t) ** 2 - 2.0 * u(t) * du(t)) * decay(t)
        d_upper = lambda t: lam * upper(t) - du(t) * (1.0 + 3.0 * u(t) ** 2) / 2.0 * decay(t)
        d_g1 = lambda t: (1.0 - s) * d_lower(t) + s * d_upper(t)
        d_g2 = lambda t: d_g1(t) / u(t) ** 2 + 2.0 * g1(t) * du(t) / u(t) ** 3

    quad = Quadruple(
        SurvivalFunction(lower, d_lower, label="F1", hint_cap=cap),
        _relabel(base, "F2"),
        SurvivalFunction(g1, d_g1, label="G1", hint_cap=cap),
        SurvivalFunction(g2, d_g2, label="G2", hint_cap=cap),
    )
    for F in quad:
        validate_survival(F, grid)
    return quad


def build(model: str, lam: float, nu: float) -> Quadruple:
    """Look up a family by CLI name."""
    if model == "example1":
        return example1(Example1Params(lam, nu))
    if model == "example2":
        return example2(Example2Params(lam, nu))
    raise ParameterError(f"unknown model {model!r}; expected one of {MODELS}")


def systems(quad: Quadruple) -> dict[str, SurvivalFunction]:
    """Every lifetime the CLI can address, keyed by its ``--system`` name."""
    F1, F2, G1, G2 = quad
    return {
        "X": series(F1, F2, label="X"),
        "Y": series(G1, G2, label="Y"),
        "Xstar": MixtureSystem(F1, F2).survival(),
        "F1": F1,
        "F2": F2,
        "G1": G1,
        "G2": G2,
    }
