import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyapprox.circle_fn import (
    AnalyticPolynomial,
    FiniteBlaschke,
    RationalDiskFunction,
    SampledCircleFunction,
    TrigPolynomial,
    blaschke_from_samples,
    check_grid,
    circle_grid,
    fourier_coeffs,
    from_coeffs,
    lp_norm,
    outer_from_modulus,
    outer_power,
    poly_roots,
    riesz_projection,
    sample,
)

N = 256
zeta = circle_grid(N)

small = st.floats(-3, 3, allow_nan=False)
cplx = st.builds(complex, small, small)
trig_st = st.dictionaries(st.integers(-8, 8), cplx, min_size=1, max_size=8).map(TrigPolynomial)


def test_sample_identity_and_constant_blaschke():
    s = sample(TrigPolynomial({1: 1}), 8)
    assert np.allclose(s.values, np.exp(2j * np.pi * np.arange(8) / 8), atol=1e-15)
    assert np.allclose(sample(FiniteBlaschke([], 1.0), 8).values, 1.0)


def test_sample_rational_matches_pointwise():
    g = RationalDiskFunction(AnalyticPolynomial([1.0]), FiniteBlaschke([0.5]), AnalyticPolynomial([1, -0.5]))
    # conj(B) / (1 - z/2) = 1/(z - 0.5) on the circle
    assert np.max(np.abs(sample(g, N).values - 1 / (zeta - 0.5))) < 1e-12


def test_fourier_coeffs_examples():
    c = fourier_coeffs(sample(TrigPolynomial({-1: 1}), 8))
    assert abs(c[-1] - 1) < 1e-14 and np.max(np.abs(np.delete(c, 7))) < 1e-14
    assert abs(fourier_coeffs(SampledCircleFunction(np.full(8, 5.0)))[0] - 5) < 1e-14
    c = fourier_coeffs(sample(AnalyticPolynomial([1, 1, 0.25]), 16))
    assert np.allclose(c[:3], [1, 1, 0.25], atol=1e-14)


def test_lp_norm_examples():
    assert abs(lp_norm(sample(AnalyticPolynomial([2, 1]), N), 2) - math.sqrt(5)) < 1e-13
    assert abs(lp_norm(sample(AnalyticPolynomial([1, 1, 0.25]), N), 1) - 1.25) < 1e-13
    one = SampledCircleFunction(np.ones(N))
    for p in (1, 1.5, 2, 7, math.inf):
        assert abs(lp_norm(one, p) - 1) < 1e-14


def test_riesz_projection_examples():
    r = riesz_projection(sample(TrigPolynomial({-1: 1, 0: 3, 1: 1}), N))
    assert np.max(np.abs(r.values - (3 + zeta))) < 1e-13
    a = sample(AnalyticPolynomial([1, -2j, 0.5]), N)
    assert np.max(np.abs(riesz_projection(a).values - a.values)) < 1e-13
    neg = SampledCircleFunction(1 / (zeta - 0.5))
    assert np.max(np.abs(riesz_projection(neg).values)) < 1e-10


@pytest.mark.parametrize("phi, F", [
    (lambda z: np.ones_like(z), lambda z: np.ones_like(z)),
    (lambda z: np.abs(2 + z) ** 2, lambda z: 2 + z),
    (lambda z: np.abs(2 - z) ** 2 / 5, lambda z: (2 - z) / math.sqrt(5)),
])
def test_outer_from_modulus_examples(phi, F):
    O = outer_from_modulus(SampledCircleFunction(phi(zeta).real))
    assert np.max(np.abs(O.values - F(zeta))) < 1e-12


def test_outer_from_modulus_warns_on_floor():
    phi = np.abs(1 - zeta) ** 2
    with pytest.warns(RuntimeWarning):
        outer_from_modulus(SampledCircleFunction(phi))


def test_outer_power_examples():
    one = SampledCircleFunction(np.ones(N))
    assert np.allclose(outer_power(one, 0.37).values, 1)
    F = sample(AnalyticPolynomial([2, 1]), N)
    assert np.max(np.abs(outer_power(F, 2).values - (2 + zeta) ** 2)) < 1e-12
    Fn = F / math.sqrt(5)
    sq = outer_power(Fn, 2.0)
    assert abs(lp_norm(sq, 1) - 1) < 1e-13
    # non-integer path agrees with the integer one
    assert np.max(np.abs(outer_power(F, 0.5).values ** 2 - F.values)) < 1e-12


@pytest.mark.parametrize("coeffs, roots", [
    ([1, -2.5, 1], [0.5, 2.0]),
    ([4, 4, 1], [-2, -2]),
    ([0, 0, 0, 1], [0, 0, 0]),
])
def test_poly_roots_examples(coeffs, roots):
    r = np.sort_complex(poly_roots(AnalyticPolynomial(coeffs)))
    assert np.allclose(r, np.sort_complex(np.array(roots, dtype=complex)), atol=1e-7)


def test_check_grid_rejects_aliasing():
    with pytest.raises(ValueError):
        check_grid(10, 32)
    check_grid(7, 32)


def test_blaschke_from_samples_recovers_zeros():
    B = FiniteBlaschke([0.3 + 0.2j, -0.5, 0.0], np.exp(0.7j))
    fit, scale = blaschke_from_samples(2.5 * B(zeta))
    assert abs(scale - 2.5) < 1e-12
    assert np.max(np.abs(fit(zeta) - B(zeta))) < 1e-10


def test_json_round_trips():
    g = TrigPolynomial({-2: 1 - 1j, 0: 0.5, 3: 2j})
    assert TrigPolynomial.from_json(g.to_json()) == g
    B = FiniteBlaschke([0.1, -0.2j], 1j)
    B2 = FiniteBlaschke.from_json(B.to_json())
    assert np.allclose(B2.zeros, B.zeros) and B2.unimodular_const == B.unimodular_const
    R = RationalDiskFunction(AnalyticPolynomial([1, 2]), B, AnalyticPolynomial([1, 0.25]))
    R2 = RationalDiskFunction.from_json(R.to_json())
    assert np.allclose(sample(R2, 256).values, sample(R, 256).values)


# ---------------------------------------------------------------- properties


@settings(max_examples=60, deadline=None)
@given(trig_st)
def test_sample_coeff_round_trip(g):
    s = sample(g, 64)
    c = fourier_coeffs(s)
    for k in range(-8, 9):
        assert abs(c[k] - g.coeffs.get(k, 0)) < 1e-12
    back = from_coeffs(fourier_coeffs(s))
    assert np.max(np.abs(back.values - s.values)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(trig_st)
def test_parseval(g):
    s = sample(g, 64)
    energy = sum(abs(c) ** 2 for c in g.coeffs.values())
    assert abs(lp_norm(s, 2) ** 2 - energy) < 1e-10 * max(1, energy)


@settings(max_examples=60, deadline=None)
@given(trig_st)
def test_riesz_idempotent_and_analytic(g):
    s = sample(g, 64)
    r = riesz_projection(s)
    assert np.max(np.abs(riesz_projection(r).values - r.values)) < 1e-12
    want = {k: v for k, v in g.coeffs.items() if k >= 0}
    assert np.max(np.abs(r.values - sample(TrigPolynomial(want), 64).values)) < 1e-12 if want else True


@settings(max_examples=40, deadline=None)
@given(st.lists(st.builds(lambda r, ph: r * np.exp(2j * np.pi * ph), st.floats(0, 0.95), st.floats(0, 1)),
                min_size=0, max_size=5),
       st.floats(0.1, 3), st.floats(0.1, 3))
def test_outer_power_additive(zs, s, t):
    # F = prod (1 - a z) with |a| < 1 is outer and nonvanishing on the closed disk;
    # log|F| decays like |a|^k, so the grid must be fine enough that it does not alias
    z = circle_grid(4096)
    F = np.ones(4096, dtype=complex)
    for a in zs:
        F = F * (1 - a * z)
    F = SampledCircleFunction(F)
    lhs = outer_power(F, s).values * outer_power(F, t).values
    assert np.max(np.abs(lhs - outer_power(F, s + t).values)) < 1e-9 * np.max(np.abs(lhs))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.builds(complex, small, small), min_size=1, max_size=7))
def test_poly_roots_multiset(roots):
    roots = np.array(roots)
    # well-separated roots only: clustered roots are ill-conditioned by nature
    d = np.abs(roots[:, None] - roots[None, :]) + np.eye(len(roots)) * 10
    if d.min() < 0.2:
        return
    P = AnalyticPolynomial.from_roots(roots)
    r = poly_roots(P)
    assert len(r) == len(roots)
    for z in roots:
        assert np.min(np.abs(r - z)) < 1e-7 * (1 + abs(z))
