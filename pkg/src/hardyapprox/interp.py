"""Constrained interpolation: minimal-norm interpolants modulo ``theta H^p``.

``interpolate_etheta`` handles ``1 <= p < inf`` through best approximation
of ``conj(theta) f1``. The ``p = inf`` problems (Schur, Nevanlinna-Pick) go
through the Hankel operator of the symbol: its top singular value is the
minimal norm and its top Schmidt pair gives an all-pass residual.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .approx import ApproxConfig, ApproxResult, best_approx
from .circle_fn import (
    DEFAULT_GRID,
    AnalyticPolynomial,
    FiniteBlaschke,
    RationalDiskFunction,
    SampledCircleFunction,
    TrigPolynomial,
    blaschke_from_samples,
    circle_grid,
    fourier_coeffs,
    lp_norm,
    negative_mass,
    poly_roots,
    sample,
)
from .structure import StructuralCertificate, dual_extremal, extract_certificate

NEHARI_SIZE = 256


@dataclass(frozen=True)
class SchurProblem:
    """Target Taylor coefficients ``a_0 .. a_{n-1}``."""

    a: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=complex)).copy()
        if a.size < 1:
            raise ValueError("need at least one coefficient")
        a.flags.writeable = False
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.a)

    def to_json(self) -> dict:
        return {"a": [[z.real, z.imag] for z in self.a]}


@dataclass(frozen=True)
class PickProblem:
    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.nodes, dtype=complex)).copy()
        w = np.atleast_1d(np.asarray(self.values, dtype=complex)).copy()
        if z.shape != w.shape or z.size == 0:
            raise ValueError("nodes and values must be nonempty and of equal length")
        if np.any(np.abs(z) >= 1):
            raise ValueError("nodes must lie in the open unit disk")
        d = np.abs(z[:, None] - z[None, :]) + np.eye(len(z))
        if np.any(d <= 1e-10):
            raise ValueError("nodes must be pairwise distinct")
        z.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "nodes", z)
        object.__setattr__(self, "values", w)

    def pick_matrix(self, rho: float) -> np.ndarray:
        z, w = self.nodes, self.values
        return (rho ** 2 - np.outer(w, np.conj(w))) / (1 - np.outer(z, np.conj(z)))

    def to_json(self) -> dict:
        return {"nodes": [[z.real, z.imag] for z in self.nodes],
                "values": [[z.real, z.imag] for z in self.values]}


@dataclass(frozen=True, eq=False)
class InterpolationResult:
    f: AnalyticPolynomial | SampledCircleFunction
    sigma: float
    residual: SampledCircleFunction
    allpass_deviation: float | None = None
    blaschke_zeros: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    certificate: StructuralCertificate | None = None
    approx: ApproxResult | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def f_samples(self) -> SampledCircleFunction:
        if isinstance(self.f, SampledCircleFunction):
            return self.f
        return sample(self.f, self.residual.n_points)

    def taylor(self, m: int) -> np.ndarray:
        if isinstance(self.f, AnalyticPolynomial):
            c = np.zeros(m, dtype=complex)
            k = min(m, len(self.f.coeffs))
            c[:k] = self.f.coeffs[:k]
            return c
        return fourier_coeffs(self.f)[:m]

    def to_json(self) -> dict:
        if isinstance(self.f, AnalyticPolynomial):
            f = self.f.to_json()["coeffs"]
        else:
            c = fourier_coeffs(self.f)[: self.f.n_points // 2]
            keep = np.flatnonzero(np.abs(c) > 1e-15 * max(np.max(np.abs(c)), 1e-300))
            f = {str(int(k)): [c[k].real, c[k].imag] for k in keep}
        out = {"sigma": self.sigma, "f_coeffs": f,
               "blaschke_zeros": [[z.real, z.imag] for z in self.blaschke_zeros],
               "allpass_deviation": self.allpass_deviation, "diagnostics": self.diagnostics}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


# --------------------------------------------------------------------------
# Finite p: interpolation by E_{theta,p}
# --------------------------------------------------------------------------


def _as_analytic(f1) -> AnalyticPolynomial:
    if isinstance(f1, AnalyticPolynomial):
        return f1
    if isinstance(f1, TrigPolynomial):
        if not f1.is_analytic():
            raise ValueError("f1 must be analytic (no negative frequencies)")
        d = f1.degree
        return AnalyticPolynomial([f1[k] for k in range(d + 1)])
    return AnalyticPolynomial(np.asarray(f1, dtype=complex))


def interpolate_etheta(f1, theta: FiniteBlaschke, p: float = 1.0,
                       cfg: ApproxConfig | None = None) -> InterpolationResult:
    """Unique ``f2`` in ``E_{theta,p}`` with ``f1 - f2`` in ``theta H^p``.

    Computed as ``f2 = theta (g - p_g)`` for ``g = conj(theta) f1``; the norm
    ``sigma = ||f2||_p`` equals the distance from ``f1`` to ``theta H^p``.
    """
    cfg = cfg or ApproxConfig(p=p)
    if cfg.p != p:
        cfg = dataclasses.replace(cfg, p=p)
    P1 = _as_analytic(f1)
    n = theta.degree
    if n == 0:
        raise ValueError("theta must have degree >= 1")
    if theta.is_monomial():
        g = P1.to_trig().shift(-n).scale(np.conj(theta.unimodular_const))
    else:
        g = RationalDiskFunction(P1, theta)
    res = best_approx(g, cfg)
    N = cfg.grid
    zeta = circle_grid(N)
    th = theta(zeta)
    f2 = SampledCircleFunction(th * res.residual.values)
    f1s = sample(P1, N)
    gap = negative_mass(SampledCircleFunction(np.conj(th) * (f1s.values - f2.values)))
    scale = max(float(np.max(np.abs(f1s.values))), 1e-300)
    cert = extract_certificate(res.residual, theta, p, c_hint=res.distance)
    f_out: AnalyticPolynomial | SampledCircleFunction = f2
    if p == 1 and theta.is_monomial():
        c = fourier_coeffs(f2)
        tail = float(np.max(np.abs(c[2 * n - 1:]))) if N > 2 * n - 1 else 0.0
        if tail <= 1e-9 * scale:
            f_out = AnalyticPolynomial(c[: 2 * n - 1])
    diag = {"interpolation_gap": gap / scale, "converged": res.converged,
            "norm_f2": lp_norm(f2, p), "certificate_valid": cert.valid}
    return InterpolationResult(f_out, res.distance, res.residual, None, cert.inner_I.zeros, cert, res, diag)


# --------------------------------------------------------------------------
# p = inf: Hankel / Nehari route
# --------------------------------------------------------------------------


def _top_schmidt_pair(G: np.ndarray):
    U, S, Vh = scipy.linalg.svd(G)
    return S, U[:, 0], np.conj(Vh[0])


def _allpass_from_pair(sigma, u, v, zeta):
    """``sigma * (sum_j u_j conj(z)^(j+1)) / v(z)``: the extremal residual."""
    num = np.polynomial.polynomial.polyval(np.conj(zeta), np.concatenate([[0], u]))
    den = np.polynomial.polynomial.polyval(zeta, v)
    return sigma * num / den


def schur_minimal(prob: SchurProblem | np.ndarray, N: int = DEFAULT_GRID) -> InterpolationResult:
    """Minimal ``H^inf`` norm function with prescribed Taylor coefficients ``a_0..a_{n-1}``.

    The Hankel matrix ``Gamma[j, k] = a_{n-1-j-k}`` (zero for ``j + k >= n``)
    is the Hankel operator of ``conj(z)^n sum a_k z^k``; its largest singular
    value is the minimal norm. With the top Schmidt pair ``Gamma v = sigma u``
    the interpolant is ``f = sigma u~ / v``, ``u~(z) = sum_j u_j z^(n-1-j)``, a
    constant multiple of a Blaschke product with the zeros of ``u~`` in the disk.
    """
    if not isinstance(prob, SchurProblem):
        prob = SchurProblem(prob)
    a, n = prob.a, prob.n
    zeta = circle_grid(N)
    if not np.any(a):
        zero = SampledCircleFunction(np.zeros(N, dtype=complex))
        return InterpolationResult(AnalyticPolynomial([0.0]), 0.0, zero, 0.0, np.zeros(0, complex),
                                   diagnostics={"degenerate": False})
    idx = np.add.outer(np.arange(n), np.arange(n))
    G = np.where(idx <= n - 1, a[np.clip(n - 1 - idx, 0, n - 1)], 0)
    S, u, v = _top_schmidt_pair(G)
    sigma = float(S[0])
    degenerate = bool(n > 1 and S[1] >= S[0] * (1 - 1e-10))

    u_rev = AnalyticPolynomial(u[::-1]) if np.any(u) else AnalyticPolynomial([0.0])
    f_vals = sigma * u_rev(zeta) / np.polynomial.polynomial.polyval(zeta, v)
    f = SampledCircleFunction(f_vals)
    if u_rev.degree >= 1:
        r = poly_roots(u_rev)
        zeros = r[np.abs(r) < 1 - 1e-12]
    else:
        zeros = np.zeros(0, dtype=complex)
    B = FiniteBlaschke(zeros)
    gam = np.mean(f_vals / (sigma * B(zeta)))
    B = FiniteBlaschke(zeros, gam / abs(gam))
    residual = SampledCircleFunction(np.conj(zeta) ** n * f_vals)
    allpass = float(np.max(np.abs(np.abs(f_vals) - sigma)))
    taylor = fourier_coeffs(f)[:n]
    diag = {"degenerate": degenerate, "singular_values": [float(s) for s in S[: min(n, 4)]],
            "interpolation_error": float(np.max(np.abs(taylor - a))),
            "blaschke_form_error": float(np.max(np.abs(sigma * B(zeta) - f_vals))),
            "blaschke_count_ok": bool(len(zeros) <= n - 1),
            "blaschke": B.to_json()}
    return InterpolationResult(f, sigma, residual, allpass, zeros, diagnostics=diag)


def pick_sigma(prob: PickProblem, rtol: float = 1e-10) -> float:
    """Smallest ``rho`` making the Pick matrix positive semidefinite, by bisection."""
    wmax = float(np.max(np.abs(prob.values)))
    if wmax == 0:
        return 0.0

    def psd(rho):
        P = prob.pick_matrix(rho)
        return np.linalg.eigvalsh(0.5 * (P + P.conj().T))[0] >= 0

    lo = wmax
    if psd(lo):
        return lo
    hi = 2 * wmax
    while not psd(hi):
        lo = hi
        hi *= 2
        if hi > 2 ** 20 * wmax:
            raise RuntimeError("Pick bisection failed to bracket")
    while hi - lo > rtol * wmax:
        mid = 0.5 * (lo + hi)
        if psd(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _lagrange(prob: PickProblem) -> AnalyticPolynomial:
    V = np.vander(prob.nodes, len(prob.nodes), increasing=True)
    return AnalyticPolynomial(np.linalg.solve(V, prob.values))


def nehari_sigma(symbol: SampledCircleFunction, size: int = NEHARI_SIZE):
    """Top singular value and Schmidt pair of the finite-section Hankel matrix of ``symbol``."""
    c = fourier_coeffs(symbol)
    N = symbol.n_points
    if 2 * size > N // 2:
        raise ValueError("grid too small for the requested Hankel section")
    idx = -(np.add.outer(np.arange(size), np.arange(size)) + 1) % N
    S, u, v = _top_schmidt_pair(c[idx])
    return float(S[0]), u, v, S


def pick_minimal(prob: PickProblem, N: int = DEFAULT_GRID, size: int = NEHARI_SIZE) -> InterpolationResult:
    """Minimal-norm ``H^inf`` interpolant of ``f(z_i) = w_i``.

    ``sigma`` comes from Pick-matrix bisection. Independently, with ``B`` the
    Blaschke product on the nodes and ``f1`` the Lagrange interpolant, the
    extremal ``f = B (conj(B) f1 - q)`` is built from the top Schmidt pair of
    the finite-section Hankel matrix of ``conj(B) f1``; the section size is
    doubled once as a convergence check.
    """
    sigma = pick_sigma(prob)
    zeta = circle_grid(N)
    n = len(prob.nodes)
    if sigma == 0:
        zero = SampledCircleFunction(np.zeros(N, dtype=complex))
        return InterpolationResult(AnalyticPolynomial([0.0]), 0.0, zero, 0.0, np.zeros(0, complex),
                                   diagnostics={"sigma_nehari": 0.0})
    B = FiniteBlaschke(prob.nodes)
    f1 = _lagrange(prob)
    symbol = sample(RationalDiskFunction(f1, B), N) if not f1.is_zero() else None
    s_h, u, v, S = nehari_sigma(symbol, size)
    s_h2 = nehari_sigma(symbol, 2 * size)[0] if 4 * size <= N // 2 else s_h
    psi = _allpass_from_pair(s_h, u, v, zeta)
    f_vals = B(zeta) * psi
    f = SampledCircleFunction(f_vals)
    c = fourier_coeffs(f)
    taylor = c[: N // 2]
    at_nodes = np.polynomial.polynomial.polyval(prob.nodes, taylor)
    Bf, scale = blaschke_from_samples(f_vals / s_h)
    if Bf.degree > n - 1:
        Bf, scale = blaschke_from_samples(f_vals / s_h, degree=n - 1)
    diag = {"sigma_nehari": s_h, "sigma_nehari_doubled": s_h2,
            "section_change": abs(s_h2 - s_h) / s_h,
            "sigma_relative_gap": abs(s_h - sigma) / sigma,
            "interpolation_error": float(np.max(np.abs(at_nodes - prob.values) / (1 + np.abs(prob.values)))),
            "analytic_defect": float(np.max(np.abs(c[N // 2:]))) / s_h,
            "blaschke_form_error": float(np.max(np.abs(s_h * Bf(zeta) - f_vals))),
            "blaschke_count_ok": bool(Bf.degree <= n - 1),
            "degenerate": bool(len(S) > 1 and S[1] >= S[0] * (1 - 1e-10)),
            "blaschke": Bf.to_json()}
    residual = SampledCircleFunction(psi)
    allpass = float(np.max(np.abs(np.abs(f_vals) - s_h)))
    return InterpolationResult(f, sigma, residual, allpass, Bf.zeros, diagnostics=diag)


# --------------------------------------------------------------------------
# Coefficient functionals
# --------------------------------------------------------------------------


def extremal_functional(a0: complex, a1: complex, N: int = DEFAULT_GRID) -> dict:
    """``sup |a0 f(0) + a1 f'(0)|`` over the closed unit ball of ``H^inf``.

    By duality the supremum is the ``L^1`` distance from ``a1 + a0 z`` to
    ``z^2 H^1``, i.e. the norm of its ``E_{z^2,1}`` interpolant. The extremal
    function is the inner factor ``J`` of the dual certificate, for which
    ``a0 J(0) + a1 J'(0)`` equals the supremum. The analogous supremum over
    the unit sphere of ``H^1`` is the Schur problem for ``(a1, a0)`` and is
    reported as ``h1_sphere_sup``.
    """
    a0, a1 = complex(a0), complex(a1)
    if a0 == 0 and a1 == 0:
        raise ValueError("functional is zero")
    theta = FiniteBlaschke.monomial(2)
    res = interpolate_etheta(AnalyticPolynomial([a1, a0]), theta, 1.0, ApproxConfig(p=1.0, grid=N))
    dual = dual_extremal(res.certificate)
    J = dual.inner_J
    Jc = fourier_coeffs(sample(J, N))
    attained = a0 * Jc[0] + a1 * Jc[1]
    h1 = schur_minimal(SchurProblem([a1, a0]), N).sigma
    return {"value": res.sigma,
            "interpolant": res.f.to_json()["coeffs"] if isinstance(res.f, AnalyticPolynomial) else None,
            "extremal_f": {"kind": "blaschke", **J.to_json()},
            "attained": [attained.real, attained.imag],
            "h1_sphere_sup": h1,
            "converged": res.diagnostics["converged"]}
