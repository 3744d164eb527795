"""Time grids on which "for all t >= 0" statements are checked."""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

DEFAULT_POINTS = 2000
LOG_GRID_START = 1e-6
SPACINGS = ("linear", "log", "mixed")


def make_grid(t_max: float, points: int = DEFAULT_POINTS, spacing: str = "mixed") -> np.ndarray:
    """Sorted grid on ``[0, t_max]``.

    ``mixed`` is the union of a linear grid on ``[0, t_max]`` and a log grid on
    ``[1e-6, t_max)``, half the points each; the log half resolves behaviour
    near the origin.
    """
    if not (t_max > LOG_GRID_START):
        raise ParameterError(f"t_max must exceed {LOG_GRID_START}, got {t_max!r}")
    if points < 2:
        raise ParameterError(f"grid needs at least 2 points, got {points!r}")
    if spacing == "linear":
        return np.linspace(0.0, t_max, points)
    if spacing == "log":
        return np.concatenate(([0.0], np.geomspace(LOG_GRID_START, t_max, points - 1)))
    if spacing == "mixed":
        n_lin = points // 2
        lin = np.linspace(0.0, t_max, n_lin)
        log = np.geomspace(LOG_GRID_START, t_max, points - n_lin, endpoint=False)
        return np.unique(np.concatenate((lin, log)))
    raise ParameterError(f"unknown spacing {spacing!r}; expected one of {SPACINGS}")


def default_grid(*functions, points: int = DEFAULT_POINTS, spacing: str = "mixed",
                 t_max: float | None = None) -> np.ndarray:
    """Grid reaching the largest support hint among ``functions`` unless ``t_max`` is given."""
    if t_max is None:
        t_max = max(F.support_hint for F in functions)
    return make_grid(t_max, points, spacing)
