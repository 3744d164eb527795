import math

import numpy as np
import pytest

_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    """Collects one (criterion, passed, detail) line per acceptance check."""

    def record(criterion: str, passed: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((criterion, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {criterion}  {detail}")


def polyexp_mean(coeffs, lam):
    """Integral of sum_k c_k t^k exp(-lam t) over [0, inf): sum_k c_k k! / lam^(k+1)."""
    return sum(c * math.factorial(k) / lam ** (k + 1) for k, c in enumerate(coeffs))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def _pool_member(rng):
    from parrondo_rel.paper_models import Example1Params, Example2Params, example1, example2
    from parrondo_rel.survival import erlang2, exponential

    lam = float(rng.uniform(0.3, 3.0))
    nu = float(rng.uniform(0.0, lam))
    kind = int(rng.integers(6))
    if kind == 0:
        return exponential(lam)
    if kind == 1:
        return erlang2(lam)
    if kind == 2:
        return example1(Example1Params(lam, nu)).G2
    q = example2(Example2Params(lam, nu))
    return (q.F1, q.G1, q.G2)[kind - 3]


def random_quadruple(rng):
    """Quadruples from the built-in families: either a whole example or four independent picks."""
    from parrondo_rel.paper_models import Example1Params, Example2Params, example1, example2

    mode = int(rng.integers(3))
    lam = float(rng.uniform(0.3, 3.0))
    nu = float(rng.uniform(0.0, lam))
    if mode == 0:
        return tuple(example1(Example1Params(lam, nu)))
    if mode == 1:
        return tuple(example2(Example2Params(lam, nu)))
    return tuple(_pool_member(rng) for _ in range(4))
