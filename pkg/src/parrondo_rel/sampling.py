"""Seeded inverse-transform sampling from survival functions.

Streams are addressed by ``(seed, stream)`` through :class:`numpy.random.SeedSequence`
spawn keys, so a given stream index always yields the same numbers no matter
how work is split across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SamplerError
from .survival import SurvivalFunction

BISECTION_WIDTH = 1e-3
MAX_NEWTON_STEPS = 100
BRACKET_LIMIT = 1e3


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    bracket_growth: float = 2.0
    # absolute time tolerance is tol_time * max(1, t)
    tol_time: float = 1e-12

    def __post_init__(self):
        if not (0 <= int(self.seed) < 2**64):
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not self.bracket_growth > 1:
            raise ParameterError(f"bracket_growth must exceed 1, got {self.bracket_growth!r}")
        if not self.tol_time > 0:
            raise ParameterError(f"tol_time must be positive, got {self.tol_time!r}")


def rng_for(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def uniforms(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniforms on (0, 1]; a value of exactly 1 maps to lifetime 0."""
    return 1.0 - rng.random(n)


def quantile(F: SurvivalFunction, u, cfg: SamplerConfig = SamplerConfig()):
    """Times ``t`` with ``F(t) = u``.

    Uses the analytic quantile when ``F`` has one. Otherwise: grow a bracket
    by ``cfg.bracket_growth`` from ``support_hint / 64``, bisect down to
    width 1e-3, then polish with Newton steps that fall back to bisection
    whenever they leave the bracket.
    """
    scalar = np.ndim(u) == 0
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any((u <= 0) | (u > 1)):
        raise ParameterError("quantile levels must lie in (0, 1]")
    if F.quantile_fn is not None:
        t = np.asarray(F.quantile_fn(u), dtype=float)
    else:
        t = _invert(F, u, cfg)
    t = np.where(u >= 1.0, 0.0, t)
    return float(t[0]) if scalar else t


def _invert(F: SurvivalFunction, u: np.ndarray, cfg: SamplerConfig) -> np.ndarray:
    sf = F.eval_fn
    limit = BRACKET_LIMIT * F.support_hint
    lo = np.zeros_like(u)
    hi = np.full_like(u, F.support_hint / 64.0)
    open_ = sf(hi) > u
    while open_.any():
        lo = np.where(open_, hi, lo)
        hi = np.where(open_, hi * cfg.bracket_growth, hi)
        if np.any(hi[open_] > limit):
            raise SamplerError(f"{F.label}: bracket exceeded {limit:g} without enclosing the root")
        open_ = open_ & (sf(hi) > u)

    # invariant from here on: sf(lo) >= u >= sf(hi); loops work on the unresolved subset only
    idx = np.flatnonzero((hi - lo) > BISECTION_WIDTH)
    while idx.size:
        a, b, target = lo[idx], hi[idx], u[idx]
        mid = 0.5 * (a + b)
        above = sf(mid) > target
        lo[idx] = np.where(above, mid, a)
        hi[idx] = np.where(above, b, mid)
        idx = idx[(hi[idx] - lo[idx]) > BISECTION_WIDTH]

    t = 0.5 * (lo + hi)
    idx = np.arange(u.size)
    for _ in range(MAX_NEWTON_STEPS):
        a, b, tt, target = lo[idx], hi[idx], t[idx], u[idx]
        s = sf(tt)
        above = s > target
        a = np.where(above, tt, a)
        b = np.where(above, b, tt)
        with np.errstate(divide="ignore", invalid="ignore"):
            proposal = tt + (s - target) / F.density(tt)
        inside = np.isfinite(proposal) & (proposal > a) & (proposal < b)
        new_t = np.where(inside, proposal, 0.5 * (a + b))
        tol = cfg.tol_time * np.maximum(1.0, tt)
        done = (np.abs(new_t - tt) <= tol) | ((b - a) <= tol)
        lo[idx], hi[idx], t[idx] = a, b, new_t
        idx = idx[~done]
        if not idx.size:
            break
    return t


def sample(F: SurvivalFunction, cfg: SamplerConfig, n: int, stream: int = 0) -> np.ndarray:
    """``n`` lifetimes from ``F``; deterministic in ``(cfg.seed, stream)``."""
    if n < 1:
        raise ParameterError(f"sample size must be at least 1, got {n!r}")
    rng = rng_for(cfg.seed, stream)
    return quantile(F, uniforms(rng, n), cfg)
