"""The same input approximated in L^p for several p.

The residual modulus is c |F|^(2/p) for a unit-norm outer F; for p = 1 the
best approximation is a polynomial of the input's degree, for other p it
is not, so larger budgets are needed to see the structure. The p = 3 row
at budget 128 shows what truncation does: the residual no longer factors.
"""

import numpy as np

from hardyapprox import (
    ApproxConfig,
    FiniteBlaschke,
    TrigPolynomial,
    best_approx,
    dual_extremal,
    extract_certificate,
    holder_equality_check,
)

g = TrigPolynomial({-2: 1, -1: 0.5 - 0.5j, 0: 0.3, 1: -0.2j})
theta = FiniteBlaschke.monomial(2)
for p, budget in ((1.0, 8), (1.5, 128), (2.0, 8), (3.0, 128), (3.0, 512), (6.0, 256)):
    r = best_approx(g, ApproxConfig(p=p, budget=budget, grid=8192 if budget > 256 else 4096))
    cert = extract_certificate(r.residual, theta, p, c_hint=r.distance)
    dual = dual_extremal(cert)
    holder = holder_equality_check(cert.residual, dual.h_g, cert.c, p)
    tail = np.max(np.abs(r.p_g.coeffs[2:])) if len(r.p_g.coeffs) > 2 else 0.0
    print(f"p={p:<4} M={budget:<4} distance={r.distance:.10f}  |p_g coef >= 2| max={tail:.1e}  "
          f"certificate ok={cert.valid!s:5}  dual ok={dual.valid!s:5}  Holder defect={holder:.1e}")
