"""A best L^1 approximation never needs more degree than the input has.

We hand the solver a generous budget (4n) for random degree-n trig
polynomials and look at how much of it the optimum actually uses.
"""

import numpy as np

from hardyapprox import ApproxConfig, TrigPolynomial, best_approx

rng = np.random.default_rng(3)
print(f"{'n':>3} {'budget':>7} {'distance':>12} {'max |coef| above n':>20}")
for n in range(1, 9):
    c = rng.standard_normal(2 * n + 1) + 1j * rng.standard_normal(2 * n + 1)
    g = TrigPolynomial({k: c[k + n] for k in range(-n, n + 1)})
    r = best_approx(g, ApproxConfig(p=1, budget=4 * n))
    tail = np.max(np.abs(r.p_g.coeffs[n + 1:])) if len(r.p_g.coeffs) > n + 1 else 0.0
    print(f"{n:>3} {4 * n:>7} {r.distance:>12.8f} {tail:>20.2e}")

# p = 2 for comparison: plain truncation, same conclusion for a different reason
g = TrigPolynomial({-2: 1, 0: 2, 1: -1j, 3: 0.5})
r = best_approx(g, ApproxConfig(p=2, budget=12))
print("\np = 2 keeps exactly the analytic part:", np.round(r.p_g.coeffs[:5], 12))
