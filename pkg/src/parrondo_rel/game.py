"""The lifetime game: the player receives (first system lifetime) - (second system lifetime).

With a fixed allocation the first system is ``min(X1, X2)`` and loses on
average. When each of its two units is independently drawn from one of the
two unit stocks with probability 1/2, the expected gain can turn positive.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ParameterError, ParrondoError, SamplerError
from .paper_models import build
from .quadrature import mean_lifetime
from .sampling import SamplerConfig, quantile, rng_for, uniforms
from .survival import MixtureSystem, SurvivalFunction, series

BLOCK_SIZE = 1 << 17
THREADS_ENV = "PARRONDO_REL_THREADS"


class Allocation(str, enum.Enum):
    DETERMINISTIC = "deterministic"
    RANDOMIZED = "randomized"


@dataclass(frozen=True)
class GameSpec:
    F1: SurvivalFunction
    F2: SurvivalFunction
    G1: SurvivalFunction
    G2: SurvivalFunction
    allocation: Allocation = Allocation.RANDOMIZED
    replications: int = 100_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "allocation", Allocation(self.allocation))
        if int(self.replications) < 1:
            raise ParameterError(f"replications must be at least 1, got {self.replications!r}")
        SamplerConfig(seed=self.seed)  # validates the seed range


@dataclass(frozen=True)
class GameResult:
    allocation: Allocation
    analytic_gain: float
    mc_gain: float
    mc_stderr: float
    n: int
    seed: int

    @property
    def ci95(self) -> tuple[float, float]:
        half = 1.96 * self.mc_stderr
        return self.mc_gain - half, self.mc_gain + half

    def to_dict(self) -> dict:
        lo, hi = self.ci95
        return {
            "allocation": self.allocation.value,
            "analytic_gain": self.analytic_gain,
            "mc_gain": self.mc_gain,
            "mc_stderr": self.mc_stderr,
            "ci95_low": lo,
            "ci95_high": hi,
            "n": self.n,
            "seed": self.seed,
        }


def first_system(spec: GameSpec) -> SurvivalFunction:
    if spec.allocation is Allocation.DETERMINISTIC:
        return series(spec.F1, spec.F2, label="X")
    return MixtureSystem(spec.F1, spec.F2).survival()


def analytic_gain(spec: GameSpec, rel_tol: float = 1e-12) -> float:
    """E(first) - E(second); independence makes the mean of the difference the difference of means."""
    return mean_lifetime(first_system(spec), rel_tol) - mean_lifetime(series(spec.G1, spec.G2), rel_tol)


def thread_count() -> int:
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            return max(1, int(cap))
        except ValueError:
            raise ParameterError(f"{THREADS_ENV} must be an integer, got {cap!r}") from None
    return os.cpu_count() or 1


def _draw(F: SurvivalFunction, rng: np.random.Generator, m: int, cfg: SamplerConfig) -> np.ndarray:
    return quantile(F, uniforms(rng, m), cfg)


def _mixed_unit(F1, F2, rng, m, cfg) -> np.ndarray:
    # pick the stock first, then a lifetime from it: realises (F1 + F2)/2 per unit
    pick_first = rng.random(m) < 0.5
    u = uniforms(rng, m)
    out = np.empty(m)
    if pick_first.any():
        out[pick_first] = quantile(F1, u[pick_first], cfg)
    if (~pick_first).any():
        out[~pick_first] = quantile(F2, u[~pick_first], cfg)
    return out


def first_system_draws(spec: GameSpec, rng: np.random.Generator, m: int,
                       cfg: SamplerConfig) -> np.ndarray:
    """``m`` lifetimes of the first system under the spec's allocation."""
    if spec.allocation is Allocation.DETERMINISTIC:
        return np.minimum(_draw(spec.F1, rng, m, cfg), _draw(spec.F2, rng, m, cfg))
    return np.minimum(_mixed_unit(spec.F1, spec.F2, rng, m, cfg), _mixed_unit(spec.F1, spec.F2, rng, m, cfg))


def _block(spec: GameSpec, block: int, m: int, crn: bool) -> tuple[float, float]:
    cfg = SamplerConfig(seed=spec.seed)
    arm = 0 if spec.allocation is Allocation.DETERMINISTIC else 1
    # common random numbers share the second-system stream between arms
    y_rng = rng_for(spec.seed, block, 0) if crn else rng_for(spec.seed, block, 0, arm)
    x_rng = rng_for(spec.seed, block, 1, arm)
    try:
        x = first_system_draws(spec, x_rng, m, cfg)
        y = np.minimum(_draw(spec.G1, y_rng, m, cfg), _draw(spec.G2, y_rng, m, cfg))
    except SamplerError as exc:
        raise SamplerError(f"{exc} (replication block starting at {block * BLOCK_SIZE})",
                           replication=block * BLOCK_SIZE) from exc
    gain = x - y
    centre = float(np.mean(gain))
    return centre, float(np.sum((gain - centre) ** 2))


def simulate(spec: GameSpec, common_random_numbers: bool = False,
             threads: Optional[int] = None) -> GameResult:
    """Monte Carlo estimate of the expected gain.

    Replications are cut into fixed blocks, each with its own random stream
    keyed by block index, so the result does not depend on ``threads``.
    """
    n = int(spec.replications)
    sizes = [min(BLOCK_SIZE, n - start) for start in range(0, n, BLOCK_SIZE)]
    workers = min(threads or thread_count(), len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda bm: _block(spec, bm[0], bm[1], common_random_numbers),
                                  enumerate(sizes)))
    else:
        parts = [_block(spec, b, m, common_random_numbers) for b, m in enumerate(sizes)]

    # merge block means and squared deviations in block order
    total, mean, m2 = 0, 0.0, 0.0
    for m, (block_mean, block_m2) in zip(sizes, parts):
        delta = block_mean - mean
        new_total = total + m
        mean += delta * m / new_total
        m2 += block_m2 + delta**2 * total * m / new_total
        total = new_total
    stderr = math.sqrt(m2 / (n - 1) / n) if n > 1 else 0.0
    return GameResult(spec.allocation, analytic_gain(spec), mean, stderr, n, int(spec.seed))


@dataclass(frozen=True)
class SweepRow:
    model: str
    lam: float
    nu: float
    allocation: Allocation
    result: Optional[GameResult] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        row = {"model": self.model, "lambda": self.lam, "nu": self.nu, "allocation": self.allocation.value}
        if self.result is not None:
            row.update({k: v for k, v in self.result.to_dict().items() if k != "allocation"})
        row["error"] = self.error
        return row


def sweep(model: str, param_grid: Iterable[tuple[float, float]], replications: int = 100_000,
          seed: int = 0, allocations: Sequence[Allocation] = tuple(Allocation)) -> list[SweepRow]:
    """One row per ``(lam, nu)`` and allocation, in input order; failures are recorded, not raised."""
    rows = []
    for lam, nu in param_grid:
        for allocation in allocations:
            allocation = Allocation(allocation)
            try:
                quad = build(model, lam, nu)
                spec = GameSpec(*quad, allocation=allocation, replications=replications, seed=seed)
                rows.append(SweepRow(model, lam, nu, allocation, result=simulate(spec)))
            except ParrondoError as exc:
                rows.append(SweepRow(model, lam, nu, allocation, error=str(exc)))
    return rows
