"""Best analytic approximation in L^p on the unit circle, with structural certificates."""

from .approx import ApproxConfig, ApproxResult, best_approx, best_approx_p2, default_budget, irls_solve
from .circle_fn import (
    AnalyticPolynomial,
    FiniteBlaschke,
    RationalDiskFunction,
    SampledCircleFunction,
    TrigPolynomial,
    blaschke_from_samples,
    fourier_coeffs,
    lp_norm,
    outer_from_modulus,
    outer_power,
    poly_roots,
    riesz_projection,
    sample,
)
from .interp import (
    InterpolationResult,
    PickProblem,
    SchurProblem,
    extremal_functional,
    interpolate_etheta,
    pick_minimal,
    pick_sigma,
    schur_minimal,
)
from .structure import (
    DualCertificate,
    StructuralCertificate,
    dual_extremal,
    extract_certificate,
    holder_equality_check,
    is_badly_approximable,
    k_theta_membership,
    pair_roots,
    alpha_parametrization,
)

__version__ = "0.1.0"
