"""Structural certificates for best analytic approximation.

A residual ``f = g - p_g`` of a function ``g`` in ``conj(theta) H^p`` factors as
``f = c conj(theta) I F**(2/p)`` with ``c = ||f||_p``, ``F`` outer of unit
``L^2`` norm with ``F(0) > 0`` and ``I`` inner such that ``I F`` lies in the
model space ``K_theta = H^2 ∩ conj(z) theta conj(H^2)``. This module extracts
that factorization from samples, checks it, and builds the dual extremal
function ``h = z J F**(2/p')``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .approx import ApproxConfig, best_approx
from .circle_fn import (
    AnalyticPolynomial,
    FiniteBlaschke,
    SampledCircleFunction,
    analytic_part,
    circle_grid,
    fourier_coeffs,
    lp_norm,
    negative_mass,
    outer_from_modulus,
    outer_power,
    poly_roots,
    sample,
)

PAIR_TOL = 1e-5
ZERO_ROOT = 1e-3
TRIM = 1e-10


# --------------------------------------------------------------------------
# Model space membership
# --------------------------------------------------------------------------


def k_theta_membership(f: SampledCircleFunction, theta: FiniteBlaschke, tol: float = 1e-8):
    """Test ``f`` in ``K_theta``: both ``f`` and ``conj(z) theta conj(f)`` analytic.

    Returns ``(ok, diagnostics)``; the analyticity defects are the largest
    negative-frequency coefficients relative to ``max |f|``.
    """
    scale = float(np.max(np.abs(f.values)))
    if scale == 0:
        return True, {"analytic_defect": 0.0, "coanalytic_defect": 0.0}
    zeta = f.grid
    mirror = SampledCircleFunction(np.conj(f.values) * theta(zeta) / zeta)
    d1 = negative_mass(f) / scale
    d2 = negative_mass(mirror) / scale
    return bool(d1 <= tol and d2 <= tol), {"analytic_defect": d1, "coanalytic_defect": d2}


# --------------------------------------------------------------------------
# Root pairing for p = 1 residuals
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RootPairing:
    """Roots of ``z**n f`` sorted into ``(1 - conj(l) z)(z - l)`` pairs and ``(1 - conj(mu) z)**2`` doubles."""

    lambda_pairs: list
    mu_doubles: list
    leftover: list
    n_infinite: int = 0
    boundary: list = field(default_factory=list)

    @property
    def K(self) -> int:
        return len(self.lambda_pairs)

    @property
    def M(self) -> int:
        return len(self.mu_doubles)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.lambda_pairs], dtype=complex)

    def ok(self, n: int | None = None) -> bool:
        if self.leftover:
            return False
        return n is None or self.K + self.M <= n - 1

    def polynomial(self, lead: complex = 1.0) -> AnalyticPolynomial:
        """``lead * prod (1 - conj(l) z)(z - l) * prod (1 - conj(mu) z)**2``."""
        P = AnalyticPolynomial([lead])
        for lam in self.lambdas:
            P = P * AnalyticPolynomial([-lam, 1.0]) * AnalyticPolynomial([1.0, -np.conj(lam)])
        for mu in self.mu_doubles:
            f = AnalyticPolynomial([1.0, -np.conj(mu)])
            P = P * f * f
        return P


def _trim(P: AnalyticPolynomial, rel: float) -> AnalyticPolynomial:
    c = np.array(P.coeffs)
    scale = np.max(np.abs(c))
    c[np.abs(c) < rel * scale] = 0
    return AnalyticPolynomial(c)


def _polish_double(P: AnalyticPolynomial, z: complex) -> complex:
    """Newton on ``P'``: a double root of ``P`` is a simple root of ``P'``."""
    d1 = P.derivative()
    d2 = d1.derivative()
    if d2.is_zero():
        return z
    for _ in range(3):
        den = d2(z)
        if den == 0:
            break
        cand = z - d1(z) / den
        if abs(d1(cand)) >= abs(d1(z)):
            break
        z = cand
    return complex(z)


def pair_roots(P: AnalyticPolynomial, tol: float = PAIR_TOL, n: int | None = None) -> RootPairing:
    """Classify the roots of ``P = z**n (g - p_g)`` for a ``p = 1``, ``theta = z**n`` residual.

    A root ``r`` inside the disk pairs with the nearest root within
    ``tol (1 + |1/r|^2)`` of ``1/conj(r)``; roots on or outside the circle are
    matched into double roots and reported as ``mu = 1/conj(root)``. When the
    nominal degree ``2n - 2`` exceeds ``deg P`` the missing roots sit at
    infinity, and a root near the origin may pair with one of them.
    """
    P = _trim(P, 1e-12)
    roots = poly_roots(P) if P.degree >= 1 else np.zeros(0, dtype=complex)
    n_inf = max(0, (2 * n - 2) - P.degree) if n is not None else 0
    order = np.lexsort((np.angle(roots), np.round(np.abs(roots), 12)))
    roots = list(roots[order])
    used = [False] * len(roots)
    pairs, mus, leftover, boundary = [], [], [], []

    for i, r in enumerate(roots):
        if used[i] or abs(r) >= 1 - tol:
            continue
        used[i] = True
        if r != 0:
            target = 1 / np.conj(r)
            cand = [(abs(roots[j] - target), j) for j in range(len(roots))
                    if not used[j] and abs(roots[j]) >= 1 - tol]
            if cand:
                d, j = min(cand)
                if d <= tol * (1 + abs(target) ** 2):
                    used[j] = True
                    pairs.append((complex(r), complex(roots[j])))
                    continue
        if abs(r) < ZERO_ROOT and n_inf > 0:
            n_inf -= 1
            pairs.append((complex(r), complex(np.inf)))
            continue
        leftover.append(complex(r))

    for i, r in enumerate(roots):
        if used[i]:
            continue
        used[i] = True
        cand = [(abs(roots[j] - r), j) for j in range(len(roots)) if not used[j]]
        if cand:
            d, j = min(cand)
            if d <= tol * (1 + abs(r) ** 2):
                used[j] = True
                centre = _polish_double(P, 0.5 * (r + roots[j]))
                mu = 1 / np.conj(centre)
                if abs(mu) > 1:
                    mu = mu / abs(mu)
                if abs(abs(centre) - 1) <= tol:
                    boundary.append(complex(mu))
                mus.append(complex(mu))
                continue
        leftover.append(complex(r))

    return RootPairing(pairs, mus, leftover, n_inf, boundary)


# --------------------------------------------------------------------------
# Certificates
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StructuralCertificate:
    c: float
    inner_I: FiniteBlaschke
    outer_F: SampledCircleFunction
    P_F: AnalyticPolynomial
    theta: FiniteBlaschke
    p: float
    reconstruction_error: float
    alphas: np.ndarray
    residual: SampledCircleFunction
    pairing: RootPairing | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.diagnostics.get("failures")

    def outer_rational(self):
        """``(P_F, Q_B)`` with ``F = P_F / Q_B``."""
        return self.P_F, self.theta.denominator()

    def to_json(self) -> dict:
        F = {"numerator": [[z.real, z.imag] for z in self.P_F.coeffs],
             "denominator": [[z.real, z.imag] for z in self.theta.denominator().coeffs]}
        d = dict(self.diagnostics)
        return {"c": self.c, "p": self.p, "I": self.inner_I.to_json(), "F": F,
                "theta": self.theta.to_json(),
                "alphas": [[a.real, a.imag] for a in self.alphas],
                "diagnostics": {"reconstruction_error": self.reconstruction_error, **d}}


def _f_from_pairing(pairing: RootPairing, theta: FiniteBlaschke, n_points: int):
    """Unit-norm ``F = P_F / Q_B`` with ``P_F = prod (1 - conj(l) z) prod (1 - conj(mu) z)``."""
    P = AnalyticPolynomial([1.0])
    for lam in pairing.lambdas:
        P = P * AnalyticPolynomial([1.0, -np.conj(lam)])
    for mu in pairing.mu_doubles:
        P = P * AnalyticPolynomial([1.0, -np.conj(mu)])
    zeta = circle_grid(n_points)
    vals = P(zeta) / theta.denominator()(zeta)
    scale = 1.0 / math.sqrt(np.mean(np.abs(vals) ** 2))
    return AnalyticPolynomial(P.coeffs * scale), SampledCircleFunction(vals * scale)


def _fit_inner(I_grid: np.ndarray, zeros) -> FiniteBlaschke:
    zeta = circle_grid(len(I_grid))
    B = FiniteBlaschke(zeros)
    ratio = np.mean(I_grid / B(zeta))
    if ratio == 0:
        ratio = 1.0
    return FiniteBlaschke(B.zeros, ratio / abs(ratio))


def _reflect(roots, inside_tol: float = 1e-9):
    out = []
    for r in roots:
        if np.isfinite(r) and r != 0:
            out.append(1 / np.conj(r))
    return np.array(out, dtype=complex)


def extract_certificate(residual: SampledCircleFunction, theta: FiniteBlaschke, p: float,
                        c_hint: float | None = None, tol: float = PAIR_TOL) -> StructuralCertificate:
    """Factor ``residual = c conj(theta) I F**(2/p)`` on the grid.

    ``F`` comes from the logarithmic outer construction applied to
    ``(|residual| / c)**p``. For ``p = 1`` the residual is rational and ``F`` is
    rebuilt exactly from the root pairing of ``theta residual Q**2``; the
    spectral ``F`` is kept as a fallback when pairing fails. ``I`` is read off
    as a finite Blaschke product from the zeros of the polynomial part of
    ``I F Q`` inside the disk. ``c_hint`` only scales tolerances.
    """
    N = residual.n_points
    zeta = circle_grid(N)
    n = theta.degree
    th = theta(zeta)
    f = residual.values
    c = lp_norm(residual, p)
    if c == 0:
        raise ValueError("zero residual has no certificate")
    scale = c_hint if c_hint else c
    shifted = SampledCircleFunction(th * f)
    defect = negative_mass(shifted) / max(np.max(np.abs(f)), 1e-300)
    if defect > 1e-5:
        raise ValueError(f"residual is not in conj(theta) H^p (defect {defect:.2e})")

    diag = {"theta_defect": defect, "route": "spectral"}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        F_spec, info = outer_from_modulus((np.abs(f) / c) ** p, full_output=True)
    diag["floored_points"] = info["floored"]
    Q = theta.denominator()(zeta)

    pairing = None
    F = F_spec
    P_F = None
    zeros_I = None
    if p == 1 and n >= 1:
        P = _trim(analytic_part(SampledCircleFunction(th * f * Q * Q), 2 * n - 2), TRIM)
        tail = np.abs(fourier_coeffs(SampledCircleFunction(th * f * Q * Q))[2 * n - 1: N // 2])
        diag["rational_tail"] = float(tail.max() / np.max(np.abs(P.coeffs))) if tail.size else 0.0
        pairing = pair_roots(P, tol, n)
        if pairing.ok(n):
            P_F, F = _f_from_pairing(pairing, theta, N)
            zeros_I = pairing.lambdas
            diag["route"] = "rational"
            diag["spectral_F_error"] = float(np.max(np.abs(F.values - F_spec.values)))
    elif p == 1 and n == 0:
        raise ValueError("theta must have degree >= 1")

    Fpow = outer_power(F, 2.0 / p)
    I_grid = th * f / (c * Fpow.values)
    if P_F is None:
        P_F = analytic_part(F * Q, max(n - 1, 0))
        P_IF = analytic_part(SampledCircleFunction(I_grid * F.values * Q), max(n - 1, 0))
        if P_IF.degree >= 1 and np.any(P_IF.coeffs):
            r = poly_roots(P_IF)
            zeros_I = r[np.abs(r) < 1 - 1e-6]
        else:
            zeros_I = np.zeros(0, dtype=complex)
    inner_I = _fit_inner(I_grid, zeros_I)

    recon = np.max(np.abs(f - c * np.conj(th) * inner_I(zeta) * Fpow.values))
    # weighted by |F|^(2/p): near-boundary zeros of F would otherwise turn roundoff in f into O(1) defects
    unimod = float(np.max(np.abs(np.abs(I_grid) - 1) * np.abs(Fpow.values)))
    F_norm = lp_norm(F, 2)
    F0 = complex(np.mean(F.values))
    member, mdiag = k_theta_membership(F * inner_I(zeta), theta, 1e-6)
    inner_defect = negative_mass(SampledCircleFunction(I_grid))

    roots_F = poly_roots(P_F) if P_F.degree >= 1 else np.zeros(0, dtype=complex)
    alphas = _reflect(roots_F)
    alphas = np.concatenate([alphas, np.zeros(max(n - 1 - len(alphas), 0), dtype=complex)])

    failures = []
    if recon > 1e-6 * scale:
        failures.append("reconstruction")
    if unimod > 1e-5:
        failures.append("unimodularity")
    if abs(F_norm - 1) > 1e-8:
        failures.append("F_norm")
    if not (F0.real > 0 and abs(F0.imag) <= 1e-8 * abs(F0)):
        failures.append("F0")
    if not member:
        failures.append("membership")
    if inner_defect > 1e-6:
        failures.append("inner_analytic")
    if pairing is not None and not pairing.ok(n):
        failures.append("pairing")
    diag.update(unimodularity=unimod, F_norm=F_norm, F0=F0.real, membership=member,
                inner_defect=float(inner_defect), failures=failures, **mdiag)
    for w in caught:
        diag.setdefault("warnings", []).append(str(w.message))
    return StructuralCertificate(c, inner_I, F, P_F, theta, p, float(recon), alphas, residual, pairing, diag)


# --------------------------------------------------------------------------
# Dual extremal function
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualCertificate:
    inner_J: FiniteBlaschke
    h_g: SampledCircleFunction
    pairing_value: complex
    p_conj: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.diagnostics.get("failures")

    def to_json(self) -> dict:
        return {"J": self.inner_J.to_json(), "p_conj": None if math.isinf(self.p_conj) else self.p_conj,
                "pairing": [self.pairing_value.real, self.pairing_value.imag], "diagnostics": self.diagnostics}


def dual_extremal(cert: StructuralCertificate) -> DualCertificate:
    """``h = z J F**(2/p')`` with ``J = conj(z) theta conj(F) / (I F)`` on the grid."""
    F = cert.outer_F.values
    if np.any(np.abs(F) == 0):
        raise ValueError("outer factor vanishes on the grid")
    N = len(F)
    zeta = circle_grid(N)
    th = cert.theta(zeta)
    J_grid = np.conj(zeta) * th * np.conj(F) / (cert.inner_I(zeta) * F)
    p = cert.p
    p_conj = math.inf if p == 1 else p / (p - 1)
    if math.isinf(p_conj):
        h = zeta * J_grid
    else:
        h = zeta * J_grid * outer_power(cert.outer_F, 2.0 / p_conj).values
    h_g = SampledCircleFunction(h)

    # zeros of J: reflected zeros of P_F plus padding at the origin, minus the zeros of I
    n = cert.theta.degree
    roots_F = poly_roots(cert.P_F) if cert.P_F.degree >= 1 else np.zeros(0, dtype=complex)
    cand = list(_reflect(roots_F)) + [0j] * max(n - 1 - len(roots_F), 0)
    for lam in cert.inner_I.zeros:
        if cand:
            j = int(np.argmin([abs(x - lam) for x in cand]))
            if abs(cand[j] - lam) <= 1e-5 * (1 + abs(lam)):
                cand.pop(j)
    cand = [x for x in cand if abs(x) < 1 - 1e-9]
    inner_J = _fit_inner(J_grid, cand)

    pairing = complex(np.mean(cert.residual.values * h))
    norm = lp_norm(h_g, p_conj)
    unimod = float(np.max(np.abs(np.abs(J_grid) - 1)))
    j_fit = float(np.max(np.abs(J_grid - inner_J(zeta))))
    if math.isinf(p_conj):
        # h = z J exactly once J matches a Blaschke product; the FFT test would alias
        # when a zero of J sits close to the circle
        freq_defect = j_fit if np.all(np.abs(inner_J.zeros) < 1) else math.inf
    else:
        hc = fourier_coeffs(h_g)
        freq_defect = max(float(np.max(np.abs(hc[N // 2:]))), abs(hc[0]))
    failures = []
    if abs(norm - 1) > 1e-8:
        failures.append("norm")
    if unimod > 1e-6:
        failures.append("J_unimodularity")
    if freq_defect > 1e-6:
        failures.append("frequency_support")
    if abs(pairing - cert.c) > 1e-5 * cert.c:
        failures.append("pairing")
    diag = {"norm": norm, "J_unimodularity": unimod, "J_fit_error": j_fit,
            "frequency_defect": freq_defect, "failures": failures}
    return DualCertificate(inner_J, h_g, pairing, p_conj, diag)


def holder_equality_check(residual, h_g, c: float, p: float) -> float:
    """``sup |f h - c**(1-p) |f|**p|`` on the grid."""
    f = residual.values if isinstance(residual, SampledCircleFunction) else np.asarray(residual)
    h = h_g.values if isinstance(h_g, SampledCircleFunction) else np.asarray(h_g)
    return float(np.max(np.abs(f * h - c ** (1 - p) * np.abs(f) ** p)))


# --------------------------------------------------------------------------
# Badly approximable functions and the alpha/beta form
# --------------------------------------------------------------------------


def is_badly_approximable(g, theta: FiniteBlaschke, p: float, cfg: ApproxConfig | None = None,
                          cross_check: bool = False):
    """Decide whether 0 is the best ``H^p`` approximation of ``g`` in ``conj(theta) H^p``.

    ``g`` is badly approximable exactly when ``theta g`` has the form
    ``c I F**(2/p)`` with ``I F`` in ``K_theta``; this tries to certify that
    form directly. Returns ``(flag, certificate)``; with ``cross_check`` the
    solver is also run and its verdict stored in the certificate diagnostics.
    """
    N = cfg.grid if cfg else 4096
    s = sample(g, N)
    cert = extract_certificate(s, theta, p)
    flag = cert.valid
    if cross_check:
        cfg = cfg or ApproxConfig(p=p, grid=N)
        res = best_approx(g, cfg)
        pg = float(np.max(np.abs(res.p_g.coeffs)))
        cert.diagnostics["cross_check"] = {
            "distance": res.distance, "norm_g": lp_norm(s, p), "p_g_max": pg,
            "agrees": bool((pg < 1e-6 * max(cert.c, 1.0)) == flag)}
    return flag, cert


@dataclass(frozen=True)
class AlphaForm:
    alphas: np.ndarray
    mask: np.ndarray
    unmatched_I_zeros: list
    residual_error: float
    dual_error: float | None = None

    @property
    def ok(self) -> bool:
        return not self.unmatched_I_zeros


def _principal_power(x, s):
    return np.exp(s * np.log(x))


def alpha_form_residual(const, alphas, mask, betas, p, zeta):
    """Residual rebuilt from its ``alpha`` and ``beta`` parameters on ``zeta``.

    Evaluates ``const * prod_{mask} (z - a)/(1 - conj(a) z) * prod (1 - conj(a) z)**(2/p)
    * prod (1 - conj(b) z)/(z - b) * (1 - conj(b) z)**(-2/p)``.
    """
    out = np.full(zeta.shape, const, dtype=complex)
    for a, sel in zip(alphas, mask):
        if sel:
            out *= (zeta - a) / (1 - np.conj(a) * zeta)
        out *= _principal_power(1 - np.conj(a) * zeta, 2.0 / p)
    for b in betas:
        out *= (1 - np.conj(b) * zeta) / (zeta - b) * _principal_power(1 - np.conj(b) * zeta, -2.0 / p)
    return out


def alpha_parametrization(cert: StructuralCertificate, B: FiniteBlaschke | None = None,
                  dual: DualCertificate | None = None, tol: float = 1e-5) -> AlphaForm:
    """Express the residual through ``n - 1`` parameters ``alpha`` and the poles ``beta``.

    ``alpha`` are the reflected roots of ``P_F`` padded with zeros; ``mask``
    marks which of them (inside the disk) are zeros of ``I``. The residual is
    then rebuilt from ``(alpha, mask, beta)`` alone and compared on the grid.
    With ``dual`` given, the zeros of ``J`` are checked against the unselected
    alphas.
    """
    B = B or cert.theta
    alphas = np.array(cert.alphas, dtype=complex)
    mask = np.zeros(len(alphas), dtype=bool)
    unmatched = []
    for lam in cert.inner_I.zeros:
        cand = [(abs(a - lam), i) for i, a in enumerate(alphas) if not mask[i] and abs(a) < 1]
        if cand:
            d, i = min(cand)
            if d <= tol * (1 + abs(lam)):
                mask[i] = True
                continue
        unmatched.append(complex(lam))
    zeta = cert.residual.grid
    shape = alpha_form_residual(1.0, alphas, mask, B.zeros, cert.p, zeta)
    f = cert.residual.values
    const = np.vdot(shape, f) / np.vdot(shape, shape)
    err = float(np.max(np.abs(f - const * shape)))
    dual_err = None
    if dual is not None:
        comp = sorted((a for a, s in zip(alphas, mask) if not s and abs(a) < 1 - 1e-9),
                      key=lambda z: (round(abs(z), 9), np.angle(z)))
        jz = sorted(dual.inner_J.zeros, key=lambda z: (round(abs(z), 9), np.angle(z)))
        if len(comp) != len(jz):
            dual_err = math.inf
        else:
            dual_err = float(max((abs(a - b) for a, b in zip(comp, jz)), default=0.0))
    return AlphaForm(alphas, mask, unmatched, err, dual_err)
