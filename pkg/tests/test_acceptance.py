"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

import time

import numpy as np
import pytest
from scipy.optimize import brentq

from conftest import random_quadruple
from parrondo_rel.game import GameSpec, analytic_gain, simulate
from parrondo_rel.grids import default_grid
from parrondo_rel.ordering import (Verdict, check_paradox_conditions, direct_conditions, feasibility_point,
                                   hazard_identity_check, necessary_conditions)
from parrondo_rel.paper_models import Example1Params, Example2Params, example1, example2, systems
from parrondo_rel.quadrature import mean_lifetime
from parrondo_rel.sampling import SamplerConfig, sample
from parrondo_rel.survival import MixtureSystem, erlang2, exponential, series

LAMBDAS = (0.5, 1.0, 3.0)


def test_c1_system_means(acceptance_log):
    start = time.perf_counter()
    worst = 0.0
    for nu in (0.0, 0.25, 0.5, 0.75, 1.0):
        sys_ = systems(example1(Example1Params(1.0, nu)))
        for key, expected in (("X", 0.75), ("Xstar", 0.8125), ("Y", 13 / 16 - nu**2 / 16)):
            worst = max(worst, abs(mean_lifetime(sys_[key]) - expected) / expected)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 1.0
    acceptance_log("C1 expected lifetimes E(X), E(Y), E(X*)", ok, f"max rel err {worst:.2e}, {elapsed:.3f}s")
    assert worst <= 1e-8
    assert elapsed < 1.0


def test_c2_game_gains(acceptance_log):
    start = time.perf_counter()
    quad = example1(Example1Params(1.0, 0.5))
    lines, ok = [], True
    for allocation, target in (("deterministic", -3 / 64), ("randomized", 1 / 64)):
        spec = GameSpec(*quad, allocation=allocation, replications=4_000_000, seed=20240601)
        exact = analytic_gain(spec)
        r = simulate(spec)
        z = (r.mc_gain - target) / r.mc_stderr
        ok &= abs(exact - target) <= 1e-8 and abs(z) <= 4
        lines.append(f"{allocation}: analytic {exact:+.10f}, mc {r.mc_gain:+.5f} (z={z:+.2f})")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30
    acceptance_log("C2 game gains -3/64 and +1/64", ok, "; ".join(lines) + f"; {elapsed:.1f}s")
    assert ok


def test_c3_paradox_certification(acceptance_log):
    start = time.perf_counter()
    worst, failures = 0.0, []
    for lam in LAMBDAS:
        for nu in (0.0, lam / 2, lam):
            for name, quad in (("ex1", example1(Example1Params(lam, nu))), ("ex2", example2(Example2Params(lam, nu)))):
                ci, cii = check_paradox_conditions(*quad)
                assert ci.grid_size == 2000 and cii.grid_size == 2000
                worst = min(worst, ci.margin, cii.margin)
                if not (ci.holds and cii.holds and min(ci.margin, cii.margin) >= -1e-12):
                    failures.append((name, lam, nu))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 5
    acceptance_log("C3 paradox conditions certified on default grid", ok,
                   f"worst margin {worst:.2e}, {elapsed:.2f}s, failures {failures}")
    assert ok


def test_c4_feasibility_equivalence(acceptance_log):
    rng = np.random.default_rng(4)
    disagreements = checked = 0
    for _ in range(200):
        quad = random_quadruple(rng)
        for t in default_grid(*quad, points=100):
            checked += 1
            disagreements += feasibility_point(*quad, float(t)).feasible(1e-12) != direct_conditions(*quad, float(t), 1e-12)
    acceptance_log("C4 ratio-region predicate matches direct conditions", disagreements == 0,
                   f"{disagreements} disagreements over {checked} points")
    assert disagreements == 0


def test_c5_mixture_identity(acceptance_log):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(50):
        F1, F2, _, _ = random_quadruple(rng)
        t = default_grid(F1, F2)
        a, b = F1.eval(t), F2.eval(t)
        gap = MixtureSystem(F1, F2).survival().eval(t) - a * b
        worst = max(worst, float(np.max(np.abs(gap - ((a - b) / 2) ** 2))))
    acceptance_log("C5 mixture gain identity", worst <= 1e-12, f"max abs deviation {worst:.2e}")
    assert worst <= 1e-12


def test_c6_densities_at_origin(acceptance_log):
    lines, ok = [], True
    for lam in LAMBDAS:
        nu = lam / 2
        r1 = necessary_conditions(*example1(Example1Params(lam, nu)))
        d = r1.details
        ok &= r1.holds and abs(d["f1_0"] - lam) <= 1e-6 and abs(d["g1_0"] - lam) <= 1e-6
        ok &= abs(d["f2_0"]) <= 1e-6 and abs(d["g2_0"]) <= 1e-6
        r2 = necessary_conditions(*example2(Example2Params(lam, nu)))
        d = r2.details
        ok &= r2.holds and abs(d["f1_0"]) <= 1e-6 and abs(d["g1_0"]) <= 1e-6
        ok &= abs(d["f2_0"] - lam) <= 1e-6 and abs(d["g2_0"] - lam) <= 1e-6
        lines.append(f"lambda={lam}: ok")
    acceptance_log("C6 densities at t=0 match", ok, ", ".join(lines))
    assert ok


def test_c7_hazard_identity(acceptance_log):
    worst = 0.0
    ok = True
    for lam in LAMBDAS:
        for nu in (0.0, lam / 2, lam):
            r = hazard_identity_check(*example2(Example2Params(lam, nu)))
            ok &= r.holds and r.margin >= -1e-6
            worst = min(worst, r.margin)
    F1, F2 = exponential(1.0), erlang2(1.0)
    bad = hazard_identity_check(F1, F2, series(F1, exponential(0.1)), F2)
    ok &= bad.verdict is Verdict.FAILS and bad.witness_t is not None
    acceptance_log("C7 hazard-gap identity and counterexample", ok,
                   f"worst relative margin {worst:.2e}; counterexample witness t={bad.witness_t}")
    assert ok


def test_c8_endpoint_degeneracies(acceptance_log):
    errs = []
    for nu, allocation in ((0.0, "randomized"), (1.0, "deterministic")):
        quad = example1(Example1Params(1.0, nu))
        sys_ = systems(quad)
        ex, ey, exs = (mean_lifetime(sys_[k]) for k in ("X", "Y", "Xstar"))
        errs.append(abs(ey - exs) if nu == 0.0 else abs(ex - ey))
        errs.append(abs(analytic_gain(GameSpec(*quad, allocation=allocation, replications=1))))
    worst = max(errs)
    acceptance_log("C8 endpoint ties at nu=0 and nu=lambda", worst <= 1e-8, f"max deviation {worst:.2e}")
    assert worst <= 1e-8


def _families():
    q1 = example1(Example1Params(1.0, 0.5))
    q2 = example2(Example2Params(1.0, 0.5))
    return {"exponential": exponential(1.0), "erlang2": erlang2(1.0), "ex1_G2": q1.G2,
            "ex2_F1": q2.F1, "ex2_G1": q2.G1, "ex2_G2": q2.G2}


def test_c9_sampler_deciles(acceptance_log):
    n = 1_000_000
    summary, ok = [], True
    for i, (name, F) in enumerate(_families().items()):
        x = np.sort(sample(F, SamplerConfig(seed=9), n, stream=i))
        good = 0
        for p in np.arange(0.1, 1.0, 0.1):
            t_p = brentq(lambda t: F.eval(t) - p, 0.0, 10 * F.support_hint, xtol=1e-14)
            empirical = 1.0 - np.searchsorted(x, t_p, side="right") / n
            good += abs(empirical - p) < 4 * np.sqrt(p * (1 - p) / n)
        ok &= good >= 8
        summary.append(f"{name} {good}/9")
    acceptance_log("C9 sampler deciles", ok, ", ".join(summary))
    assert ok
