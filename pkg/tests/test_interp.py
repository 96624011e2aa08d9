import math

import numpy as np
import pytest

from hardyapprox.approx import ApproxConfig
from hardyapprox.circle_fn import AnalyticPolynomial, FiniteBlaschke, circle_grid, sample
from hardyapprox.interp import (
    PickProblem,
    SchurProblem,
    extremal_functional,
    interpolate_etheta,
    nehari_sigma,
    pick_minimal,
    pick_sigma,
    schur_minimal,
)

Z2 = FiniteBlaschke.monomial(2)


def test_etheta_quarter_square():
    r = interpolate_etheta(AnalyticPolynomial([1, 1]), Z2, 1.0)
    assert isinstance(r.f, AnalyticPolynomial)
    assert np.allclose(r.taylor(3), [1, 1, 0.25], atol=1e-10)
    assert abs(r.sigma - 1.25) < 1e-10 and r.certificate.valid


def test_etheta_fixed_point():
    r = interpolate_etheta(AnalyticPolynomial([1, 1, 0.25]), Z2, 1.0)
    assert np.allclose(r.taylor(3), [1, 1, 0.25], atol=1e-10)


@pytest.mark.parametrize("a", [2.0, -1 + 1j])
def test_etheta_constant(a):
    r = interpolate_etheta(AnalyticPolynomial([a]), FiniteBlaschke.monomial(3), 1.0)
    assert np.allclose(r.taylor(3), [a, 0, 0], atol=1e-10)
    assert abs(r.sigma - abs(a)) < 1e-10


def test_etheta_blaschke_interpolates():
    theta = FiniteBlaschke([0.5, -0.3j])
    r = interpolate_etheta(AnalyticPolynomial([1, 1]), theta, 1.0)
    assert r.certificate.valid
    vals = np.polynomial.polynomial.polyval(theta.zeros, r.taylor(2048))
    assert np.max(np.abs(vals - (1 + theta.zeros))) < 1e-9


def test_etheta_p2_is_model_space_projection():
    # at p = 2 the interpolant is the K_theta part of f1: for theta = z^2 the truncation
    r = interpolate_etheta(AnalyticPolynomial([1, 2, 3, 4]), Z2, 2.0)
    assert np.allclose(r.taylor(4), [1, 2, 0, 0], atol=1e-12)
    assert abs(r.sigma - math.sqrt(5)) < 1e-12


def test_schur_examples(oracles):
    r = schur_minimal([0.3 - 0.4j])
    assert r.sigma == 0.5 and np.allclose(r.f.values, 0.3 - 0.4j)
    r = schur_minimal([0, 1])
    assert abs(r.sigma - 1) < 1e-12 and np.max(np.abs(r.f.values - circle_grid(r.f.n_points))) < 1e-12
    assert np.allclose(r.blaschke_zeros, [0])
    r = schur_minimal(SchurProblem([1, 1]))
    assert abs(r.sigma - oracles["schur_11_sigma"]) < 1e-12
    assert abs(r.blaschke_zeros[0] - (1 - math.sqrt(5)) / 2) < 1e-10
    assert r.allpass_deviation < 1e-12


def test_schur_random_interpolates(rng):
    for n in range(2, 7):
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        r = schur_minimal(a)
        assert r.diagnostics["interpolation_error"] < 1e-12 * r.sigma
        assert r.allpass_deviation < 1e-10 * r.sigma
        assert len(r.blaschke_zeros) <= n - 1
        assert r.diagnostics["blaschke_form_error"] < 1e-10 * r.sigma
        # no smaller norm is possible: sigma dominates every Hankel section
        assert r.sigma >= np.max(np.abs(a)) - 1e-12


def test_pick_examples():
    r = pick_minimal(PickProblem([0], [0.7j]))
    assert abs(r.sigma - 0.7) < 1e-12 and np.allclose(r.f.values, 0.7j)
    r = pick_minimal(PickProblem([0, 0.5], [0, 0.3]))
    zeta = circle_grid(r.f.n_points)
    assert abs(r.sigma - 0.6) < 1e-9 and np.max(np.abs(r.f.values - 0.6 * zeta)) < 1e-9
    r = pick_minimal(PickProblem([0, 0.5], [0.3, 0.3]))
    assert abs(r.sigma - 0.3) < 1e-9 and np.max(np.abs(r.f.values - 0.3)) < 1e-9


def test_pick_matches_schur_at_origin():
    # nodes clustered at the origin approximate Taylor data (1, 1)
    h = 1e-4
    prob = PickProblem([0, h], [1, 1 + h])
    assert abs(pick_sigma(prob) - (1 + math.sqrt(5)) / 2) < 1e-3


def test_pick_monotone_in_data(rng):
    z = np.array([0.1, -0.4j, 0.5 + 0.2j])
    w = np.array([0.2, 0.4j, -0.3])
    prev = 0
    for t in (0.5, 1.0, 1.5, 2.0):
        s = pick_sigma(PickProblem(z, t * w))
        assert abs(s - t * pick_sigma(PickProblem(z, w))) < 1e-8
        assert s >= prev
        prev = s
    # adding a node never lowers the minimal norm
    s2 = pick_sigma(PickProblem(z[:2], w[:2]))
    assert s2 <= pick_sigma(PickProblem(z, w)) + 1e-10


def test_pick_random_agreement(rng):
    for _ in range(10):
        k = int(rng.integers(2, 4))
        z = 0.8 * np.sqrt(rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k))
        w = rng.uniform(size=k) * np.exp(2j * np.pi * rng.uniform(size=k))
        r = pick_minimal(PickProblem(z, w))
        assert r.diagnostics["sigma_relative_gap"] < 1e-6
        assert r.diagnostics["interpolation_error"] < 1e-8
        assert r.allpass_deviation < 1e-6 * r.sigma
        assert r.diagnostics["blaschke_count_ok"]


def test_nehari_section_converges():
    sym = sample(lambda z: 1 / (z - 0.5) + 0.3 / (z + 0.2j), 4096)
    s1 = nehari_sigma(sym, 64)[0]
    s2 = nehari_sigma(sym, 256)[0]
    assert abs(s1 - s2) < 1e-12


@pytest.mark.parametrize("nodes, values", [([0.5, 0.5], [0, 0]), ([1.0], [0]), ([0.1], [0.1, 0.2])])
def test_pick_validation(nodes, values):
    with pytest.raises(ValueError):
        PickProblem(nodes, values)


@pytest.mark.parametrize("a0, a1, value", [(1, 1, 1.25), (1, 0, 1.0), (0, 1, 1.0)])
def test_extremal_functional(a0, a1, value):
    r = extremal_functional(a0, a1)
    assert abs(r["value"] - value) < 1e-9
    assert abs(r["attained"][0] - value) < 1e-9 and abs(r["attained"][1]) < 1e-9


def test_extremal_h1_sphere_supremum(oracles):
    r = extremal_functional(1, 1)
    assert abs(r["h1_sphere_sup"] - oracles["h1_sphere_sup_11"]) < 1e-9
    # f = (1 + c z)^2 / (1 + c^2) has unit H^1 norm and reaches the golden ratio at c = 0.618
    c = (math.sqrt(5) - 1) / 2
    assert abs((1 + 2 * c) / (1 + c * c) - r["h1_sphere_sup"]) < 1e-12


def test_extremal_functional_bound_by_sampling(rng):
    # every f with sup|f| <= 1 stays below the value; random Blaschke products probe the bound
    r = extremal_functional(1, 2)
    best = 0.0
    for _ in range(300):
        z = 0.95 * np.sqrt(rng.uniform(size=2)) * np.exp(2j * np.pi * rng.uniform(size=2))
        B = FiniteBlaschke(z, np.exp(2j * np.pi * rng.uniform()))
        c = np.fft.fft(B(circle_grid(256))) / 256
        best = max(best, abs(c[0] + 2 * c[1]))
    assert best <= r["value"] + 1e-12
    assert best > 0.9 * r["value"]
