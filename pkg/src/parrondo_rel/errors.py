"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ParrondoError(Exception):
    """Base class for all package errors."""


class ParameterError(ParrondoError, ValueError):
    """A parameter is outside its admissible domain."""


class InvalidSurvivalError(ParameterError):
    """A callable does not behave like a survival function."""


class ConstructionError(ParrondoError):
    """A model could not be built; ``witness_t`` locates the offending time."""

    def __init__(self, message: str, witness_t: float | None = None):
        super().__init__(message)
        self.witness_t = witness_t


class QuadratureError(ParrondoError):
    """Adaptive integration did not reach the requested accuracy."""

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class SamplerError(ParrondoError):
    """Inverse-transform sampling failed to bracket a root."""

    def __init__(self, message: str, replication: int | None = None):
        super().__init__(message)
        self.replication = replication


class UnderflowError(ParrondoError, ArithmeticError):
    """A survival probability is too small to take logarithms of safely."""
