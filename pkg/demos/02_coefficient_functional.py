"""How large can f(0) + f'(0) be?

Over the unit ball of H^inf the answer is the L^1 distance from 1 + z to
z^2 H^1, i.e. the norm of the unique interpolant (2 + z)^2 / 4. The extremal
f is an inner function read off the dual certificate. Over the unit sphere
of H^1 the question is a Schur problem with a different answer.
"""

import numpy as np

from hardyapprox import AnalyticPolynomial, FiniteBlaschke, extremal_functional, interpolate_etheta

r = interpolate_etheta(AnalyticPolynomial([1, 1]), FiniteBlaschke.monomial(2), p=1)
print("interpolant coefficients:", np.round(r.taylor(3).real, 12))
print("its L^1 norm            :", r.sigma)
print("inner factor zeros      :", r.certificate.inner_I.zeros, "(none: the interpolant is outer)")

ext = extremal_functional(1, 1)
J = ext["extremal_f"]
print("\nsup over |f| <= 1       :", ext["value"])
print("extremal inner function : zero at", np.round(J["zeros"], 12), "const", np.round(J["const"], 12))
print("value it attains        :", ext["attained"][0])
print("sup over ||f||_1 = 1    :", ext["h1_sphere_sup"], "(golden ratio)")

# probe with random Blaschke products: none beats the supremum
rng = np.random.default_rng(0)
zeta = np.exp(2j * np.pi * np.arange(512) / 512)
best = 0.0
for _ in range(2000):
    B = FiniteBlaschke(0.9 * rng.uniform(size=2) * np.exp(2j * np.pi * rng.uniform(size=2)))
    c = np.fft.fft(B(zeta)) / 512
    best = max(best, abs(c[0] + c[1]))
print("best of 2000 random Blaschke products:", round(best, 6))
