import math

import numpy as np
import pytest

from conftest import pairs_to_complex
from hardyapprox.approx import ApproxConfig, best_approx, best_approx_p2, default_budget, irls_solve
from hardyapprox.circle_fn import (
    AnalyticPolynomial,
    FiniteBlaschke,
    RationalDiskFunction,
    TrigPolynomial,
    circle_grid,
    sample,
)

FIXTURE = TrigPolynomial({0: -0.4, -1: 1.0, -2: -0.4})


def trig_from_json(d):
    return TrigPolynomial({int(k): complex(*v) for k, v in d.items()})


def test_p2_parseval_example():
    g = TrigPolynomial({-1: 1, 0: 3, 1: 1})
    for M in (1, 3):
        r = best_approx(g, ApproxConfig(p=2, budget=M))
        assert np.allclose(r.p_g.coeffs[:2], [3, 1], atol=1e-13)
        assert abs(r.distance - 1) < 1e-13


def test_p2_analytic_input_is_fixed_point():
    g = AnalyticPolynomial([1, -1j, 2])
    r = best_approx_p2(g, 4)
    assert np.allclose(r.p_g.coeffs[:3], g.coeffs, atol=1e-13) and np.max(np.abs(r.p_g.coeffs[3:])) < 1e-13
    assert r.distance < 1e-13


def test_p2_rational_example():
    g = RationalDiskFunction(AnalyticPolynomial([1.0]), FiniteBlaschke([0.5]), AnalyticPolynomial([1, -0.5]))
    r = best_approx_p2(g)
    assert np.max(np.abs(r.p_g.coeffs)) < 1e-12
    assert abs(r.distance - 2 / math.sqrt(3)) < 1e-12


def test_conj_z_is_badly_approximable_in_l1():
    for M in (0, 3):
        r = best_approx(TrigPolynomial({-1: 1}), ApproxConfig(p=1, budget=M))
        assert abs(r.distance - 1) < 1e-12 and np.max(np.abs(r.p_g.coeffs)) < 1e-10 and r.converged


def test_fixture_against_convex_oracle(oracles):
    o = oracles["fixture_l1"]
    r = best_approx(FIXTURE, ApproxConfig(p=1, budget=2))
    assert r.converged
    assert abs(r.distance - o["value"]) < 1e-6
    assert np.max(np.abs(r.p_g.coeffs)) < 1e-6 and o["argmin_max_abs"] < 1e-4
    # the crude subgradient route lands on the same minimum value
    assert abs(o["subgradient_best"] - o["value"]) < 1e-4


@pytest.mark.parametrize("case", range(5))
def test_random_degree3_against_convex_oracle(oracles, case):
    o = oracles["random_l1"][case]
    g = trig_from_json(o["g"])
    r = best_approx(g, ApproxConfig(p=1, budget=3))
    assert r.converged
    assert abs(r.distance - o["value"]) < 1e-6
    # the oracle searched degree 12; its optimum is itself of degree <= 3
    a = pairs_to_complex(o["argmin"])
    assert np.max(np.abs(a[4:])) < 1e-5 * max(abs(v) for v in g.coeffs.values())
    pg = np.zeros(4, dtype=complex)
    pg[: min(4, len(r.p_g.coeffs))] = r.p_g.coeffs[:4]
    assert np.max(np.abs(a[:4] - pg)) < 1e-4
    assert abs(o["subgradient_best"] - o["value"]) < 1e-4


def test_irls_analytic_input_one_iteration():
    g = sample(AnalyticPolynomial([1, 2, 3]), 256)
    a, info = irls_solve(g, 1.3, 4, full_output=True)
    assert np.allclose(a[:3], [1, 2, 3]) and info["iterations"] == 1


def test_irls_rotation_symmetry():
    g = sample(TrigPolynomial({-1: 1}), 256)
    a = irls_solve(g, 1.5, 0, ApproxConfig(p=1.5, grid=256))
    assert abs(a[0]) < 1e-10


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0, 4.0])
def test_first_order_optimality(p, rng):
    g = TrigPolynomial({k: complex(*rng.standard_normal(2)) for k in range(-3, 4)})
    M = 3 if p <= 2 else 48
    r = best_approx(g, ApproxConfig(p=p, budget=M))
    assert r.converged
    res = r.residual.values
    zeta = circle_grid(len(res))
    if p == 1:
        return  # nonsmooth; covered by the oracle and certificate tests
    w = np.abs(res) ** (p - 2) * np.conj(res)
    grad = np.array([np.mean(w * zeta ** k) for k in range(M + 1)])
    assert np.max(np.abs(grad)) < 1e-9 * np.mean(np.abs(res) ** (p - 1))


def test_monotone_in_budget(rng):
    g = TrigPolynomial({k: complex(*rng.standard_normal(2)) for k in range(-4, 5)})
    d = [best_approx(g, ApproxConfig(p=1, budget=M)).distance for M in range(0, 9)]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(d, d[1:]))


def test_scale_equivariance(rng):
    g = TrigPolynomial({k: complex(*rng.standard_normal(2)) for k in range(-3, 3)})
    a = 2.5 * np.exp(1.1j)
    r1 = best_approx(g, ApproxConfig(p=1, budget=6))
    r2 = best_approx(g.scale(a), ApproxConfig(p=1, budget=6))
    assert abs(r2.distance - abs(a) * r1.distance) < 1e-10 * r2.distance
    assert np.max(np.abs(r2.p_g.coeffs - a * r1.p_g.coeffs)) < 1e-7


def test_seeds_reach_the_unique_minimizer(rng):
    g = TrigPolynomial({k: complex(*rng.standard_normal(2)) for k in range(-3, 4)})
    base = best_approx(g, ApproxConfig(p=1, budget=12))
    for seed in (1, 2, 3):
        r = best_approx(g, ApproxConfig(p=1, budget=12, seed=seed))
        assert r.converged
        assert np.max(np.abs(r.p_g.coeffs[:4] - base.p_g.coeffs[:4])) < 1e-7


def test_grid_doubling_stability(rng):
    g = TrigPolynomial({k: complex(*rng.standard_normal(2)) for k in range(-3, 4)})
    r1 = best_approx(g, ApproxConfig(p=1, budget=12, grid=4096))
    r2 = best_approx(g, ApproxConfig(p=1, budget=12, grid=8192))
    assert abs(r1.distance - r2.distance) < 1e-10
    assert np.max(np.abs(r1.p_g.coeffs[:4] - r2.p_g.coeffs[:4])) < 1e-7


def test_nonzero_best_approximation():
    g = TrigPolynomial({-2: 1, -1: 1})
    r = best_approx(g, ApproxConfig(p=1, budget=4))
    assert abs(r.distance - 1.25) < 1e-10
    assert abs(r.p_g.coeffs[0] + 0.25) < 1e-8


def test_default_budget():
    assert default_budget(TrigPolynomial({-2: 1, 3: 1})) == 12
    assert default_budget(TrigPolynomial({-5: 1})) == 20


@pytest.mark.parametrize("kwargs", [{"p": 0.5}, {"p": math.inf}, {"budget": -1}, {"tol": 0}, {"max_iters": 0}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ApproxConfig(**kwargs)


def test_grid_guard():
    with pytest.raises(ValueError):
        best_approx(TrigPolynomial({-20: 1}), ApproxConfig(p=1, budget=80, grid=128))
