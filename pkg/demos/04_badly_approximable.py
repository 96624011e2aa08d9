"""Recognizing functions whose best analytic approximation is zero.

g is badly approximable in L^1 exactly when theta g factors as c I F^2 with
I inner, F outer and I F in the model space of theta. The certificate shows
the factors; the solver confirms independently.
"""

import numpy as np

from hardyapprox import FiniteBlaschke, TrigPolynomial, dual_extremal, is_badly_approximable

cases = [
    ("conj(z)^3", TrigPolynomial({-3: 1}), FiniteBlaschke.monomial(3)),
    ("-2/5 + conj(z) - 2/5 conj(z)^2", TrigPolynomial({0: -0.4, -1: 1, -2: -0.4}), FiniteBlaschke.monomial(2)),
    ("conj(z)^2 (2 + z)^2 / 4", TrigPolynomial({-2: 1, -1: 1, 0: 0.25}), FiniteBlaschke.monomial(2)),
    ("conj(z)^2 (1 + z)", TrigPolynomial({-2: 1, -1: 1}), FiniteBlaschke.monomial(2)),
]
for label, g, theta in cases:
    flag, cert = is_badly_approximable(g, theta, p=1, cross_check=True)
    cc = cert.diagnostics["cross_check"]
    print(f"{label:32s} badly approximable: {flag!s:5}  solver p_g max {cc['p_g_max']:.1e}  "
          f"c = {cert.c:.6f}")
    if flag:
        d = dual_extremal(cert)
        print(f"{'':32s} I zeros {np.round(cert.inner_I.zeros, 8)}  F numerator {np.round(cert.P_F.coeffs, 8)}"
              f"  pairing {d.pairing_value.real:.10f}")
