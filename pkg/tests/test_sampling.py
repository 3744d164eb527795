import numpy as np
import pytest
from scipy.optimize import brentq

from parrondo_rel.errors import ParameterError, SamplerError
from parrondo_rel.paper_models import Example2Params, example2
from parrondo_rel.sampling import SamplerConfig, quantile, sample
from parrondo_rel.survival import SurvivalFunction, erlang2, exponential, mixture_unit


def test_exponential_law_of_large_numbers():
    x = sample(exponential(1.0), SamplerConfig(seed=42), 10**6)
    assert abs(x.mean() - 1.0) < 4 * x.std() / np.sqrt(x.size)


def test_erlang_law_of_large_numbers():
    x = sample(erlang2(1.0), SamplerConfig(seed=42), 10**6)
    assert abs(x.mean() - 2.0) < 4 * x.std() / np.sqrt(x.size)


@pytest.mark.parametrize("F", [erlang2(1.0), example2(Example2Params(1.0, 0.5)).G2,
                               mixture_unit(exponential(1.0), erlang2(3.0))], ids=lambda F: F.label)
@pytest.mark.parametrize("t0", [0.05, 0.7, 3.0, 12.0])
def test_round_trip(F, t0):
    cfg = SamplerConfig()
    t = quantile(F, F.eval(t0), cfg)
    assert abs(t - t0) <= 1e-9 * max(1.0, t0)


@pytest.mark.parametrize("p", [0.999, 0.5, 1e-3, 1e-9])
def test_numeric_quantile_against_brent(p):
    F = erlang2(1.4)
    oracle = brentq(lambda t: F.eval(t) - p, 0.0, 100.0, xtol=1e-15, rtol=1e-15)
    assert quantile(F, p) == pytest.approx(oracle, rel=1e-11, abs=1e-12)


def test_unit_level_gives_zero():
    assert quantile(erlang2(1.0), 1.0) == 0.0


def test_deterministic_streams():
    F = erlang2(1.0)
    a = sample(F, SamplerConfig(seed=7), 1000)
    b = sample(F, SamplerConfig(seed=7), 1000)
    c = sample(F, SamplerConfig(seed=7), 1000, stream=1)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_bracket_failure():
    plateau = SurvivalFunction(lambda t: 0.5 + 0.5 * np.exp(-t), support_hint=10.0)
    with pytest.raises(SamplerError):
        quantile(plateau, 0.25)


@pytest.mark.parametrize("kwargs", [{"seed": -1}, {"seed": 2**64}, {"bracket_growth": 1.0}, {"tol_time": 0.0}])
def test_config_validation(kwargs):
    with pytest.raises(ParameterError):
        SamplerConfig(**kwargs)


def test_sample_size():
    with pytest.raises(ParameterError):
        sample(exponential(1.0), SamplerConfig(), 0)


def test_gentler_bracket_growth_agrees():
    F = erlang2(0.5)
    u = np.linspace(0.01, 0.99, 50)
    np.testing.assert_allclose(quantile(F, u, SamplerConfig(bracket_growth=1.3)), quantile(F, u), rtol=1e-11)
