"""Expected lifetimes as integrals of survival functions."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ParameterError, QuadratureError, UnderflowError
from .survival import SurvivalFunction, hazard_rate

TAIL_LEVEL = 1e-12
MAX_DOUBLINGS = 20


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_bound: float
    t_max: float
    tail: float


def _tail_estimate(F: SurvivalFunction, t: float) -> float:
    """``F(t) / h(t)``: the exact tail for an exponential decay with the local log-slope."""
    surv = F.eval(t)
    if surv == 0.0:
        return 0.0
    try:
        rate = hazard_rate(F, t)
    except UnderflowError:
        # values this small contribute nothing at double precision
        return 0.0
    if not rate > 0:
        return math.inf
    return surv / rate


def integrate_survival(F: SurvivalFunction, rel_tol: float = 1e-10) -> QuadResult:
    """Adaptive quadrature of ``F`` over ``[0, T]`` plus a tail estimate beyond ``T``.

    ``T`` starts at the support hint and doubles until ``F(T) < 1e-12`` and the
    tail estimate is below ``rel_tol`` times the running integral.
    """
    if not (1e-14 < rel_tol < 1e-2):
        raise ParameterError(f"rel_tol must lie in (1e-14, 1e-2), got {rel_tol!r}")
    epsrel = max(rel_tol * 0.1, 2e-14)
    t_max = float(F.support_hint)
    value = abserr = 0.0
    lower = 0.0
    f = lambda t: float(F.eval_fn(np.asarray(t)))
    for _ in range(MAX_DOUBLINGS):
        # breakpoints spread evaluation effort over the decay scale
        points = [lower + (t_max - lower) * frac for frac in (1 / 64, 1 / 16, 1 / 4)]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            piece, err, _info, *message = integrate.quad(
                f, lower, t_max, epsabs=0.0, epsrel=epsrel, limit=500, points=points, full_output=True)
        value += piece
        abserr += err
        # quad appends a message only when it flags a problem
        if message and err > rel_tol * abs(value):
            raise QuadratureError(
                f"{F.label}: quadrature did not converge on [{lower:g}, {t_max:g}]",
                estimate=value, error_bound=abserr)
        tail = _tail_estimate(F, t_max)
        if F.eval(t_max) < TAIL_LEVEL and tail < rel_tol * abs(value):
            return QuadResult(value + tail, abserr + tail, t_max, tail)
        lower, t_max = t_max, 2.0 * t_max
    raise QuadratureError(f"{F.label}: tail did not decay within {MAX_DOUBLINGS} doublings",
                          estimate=value, error_bound=abserr + tail)


def mean_lifetime(F: SurvivalFunction, rel_tol: float = 1e-10) -> float:
    """E[T] = integral of the survival function over [0, inf)."""
    return integrate_survival(F, rel_tol).value
