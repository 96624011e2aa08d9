"""Best analytic approximation in L^p on the circle over a polynomial budget.

``p = 2`` is the truncated analytic projection. Other ``p`` run an
iteratively reweighted least-squares (IRLS) phase with epsilon smoothing,
followed by a damped Newton polish of the exact grid objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .circle_fn import (
    DEFAULT_GRID,
    AnalyticPolynomial,
    RationalDiskFunction,
    SampledCircleFunction,
    TrigPolynomial,
    check_grid,
    fourier_coeffs,
    lp_norm,
    sample,
    spectral_width,
)

EPS_DECAY = 0.7
MAX_HALVINGS = 60
NEWTON_ITERS = 100


@dataclass(frozen=True)
class ApproxConfig:
    """Solver settings. ``budget=None`` picks :func:`default_budget`."""

    p: float = 1.0
    budget: int | None = None
    grid: int = DEFAULT_GRID
    tol: float = 1e-13
    max_iters: int = 400
    eps0: float | None = None
    eps_floor: float = 1e-14
    seed: int | None = None

    def __post_init__(self):
        if not self.p >= 1 or math.isinf(self.p):
            raise ValueError("p must lie in [1, inf)")
        if self.budget is not None and self.budget < 0:
            raise ValueError("budget must be >= 0")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")

    @property
    def conjugate_exponent(self) -> float:
        return math.inf if self.p == 1 else self.p / (self.p - 1)


@dataclass(frozen=True, eq=False)
class ApproxResult:
    p_g: AnalyticPolynomial
    residual: SampledCircleFunction
    distance: float
    iterations: int
    converged: bool
    p: float
    budget: int
    info: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        c = self.p_g.coeffs
        cut = 1e-15 * float(np.max(np.abs(c)))
        p_g = {str(k): [v.real, v.imag] for k, v in enumerate(c) if abs(v) > cut}
        return {"p": self.p, "budget": self.budget, "distance": self.distance,
                "iterations": self.iterations, "converged": self.converged, "p_g": p_g, **self.info}


def default_budget(g) -> int:
    """``max(4 deg g, deg theta + deg g)`` with ``theta = z**d``, ``d`` the pole order.

    For rational input the degree is the spectral width, past which the
    analytic part is below double precision.
    """
    if isinstance(g, AnalyticPolynomial):
        g = g.to_trig()
    if isinstance(g, TrigPolynomial):
        n_neg = max((-k for k in g.coeffs if k < 0), default=0)
        return max(4 * g.degree, n_neg + g.degree)
    if isinstance(g, RationalDiskFunction):
        return spectral_width(g)
    raise TypeError(f"unsupported input {type(g).__name__}")


def _poly_on_grid(a: np.ndarray, n: int) -> np.ndarray:
    c = np.zeros(n, dtype=complex)
    c[: len(a)] = a
    return np.fft.ifft(c) * n


def _toeplitz_gram(w: np.ndarray, m: int) -> np.ndarray:
    """``G[k, l] = sum_j w_j zeta_j**(l - k)`` for ``k, l < m``."""
    n = len(w)
    wf = np.fft.fft(w)  # wf[q] = sum_j w_j zeta_j**(-q)
    idx = np.subtract.outer(np.arange(m), np.arange(m)) % n
    return wf[idx]


def _hankel_gram(e: np.ndarray, m: int) -> np.ndarray:
    """``G[k, l] = sum_j e_j zeta_j**(k + l)``."""
    n = len(e)
    ef = np.fft.fft(e)
    idx = (-np.add.outer(np.arange(m), np.arange(m))) % n
    return ef[idx]


def _moments(v: np.ndarray, m: int) -> np.ndarray:
    """``sum_j v_j zeta_j**(-k)`` for ``k < m``."""
    return np.fft.fft(v)[:m]


def _objective(r: np.ndarray, p: float) -> float:
    a = np.abs(r)
    if p == 1:
        return float(a.mean())
    return float(np.mean(a ** p))


def _weighted_projection(g: np.ndarray, w: np.ndarray, m: int) -> np.ndarray:
    G = _toeplitz_gram(w, m)
    b = _moments(w * g, m)
    G = 0.5 * (G + G.conj().T)
    try:
        return scipy.linalg.solve(G, b, assume_a="pos")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        return np.linalg.lstsq(G, b, rcond=None)[0]


def irls_solve(g_samples, p: float, M: int, cfg: ApproxConfig | None = None, full_output: bool = False):
    """Minimize the grid ``L^p`` norm of ``g - h`` over polynomials ``h`` of degree <= M.

    Weights are ``(|r|^2 + eps_k)^((p-2)/2)`` with ``eps_k = max(eps_floor, eps0 0.7^k)``;
    each least-squares step is accepted only after halving it until the true
    objective decreases. The IRLS phase is followed by Newton iterations on the
    exact objective. Returns the coefficient vector (and an info dict with
    ``full_output``).
    """
    cfg = cfg or ApproxConfig(p=p)
    g = g_samples.values if isinstance(g_samples, SampledCircleFunction) else np.asarray(g_samples, complex)
    n = len(g)
    m = M + 1
    gscale = float(np.max(np.abs(g))) if g.size else 0.0

    a = fourier_coeffs(SampledCircleFunction(g))[:m].copy()
    r = g - _poly_on_grid(a, n)
    c0 = lp_norm(SampledCircleFunction(r), p)
    if cfg.seed is not None and c0 > 0:
        rng = np.random.default_rng(cfg.seed)
        a = a + 0.1 * c0 / math.sqrt(m) * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
        r = g - _poly_on_grid(a, n)
    info = {"irls_iterations": 0, "newton_iterations": 0, "halving_failures": 0}

    if np.max(np.abs(r)) <= 1e-14 * max(gscale, 1e-300):
        info.update(iterations=1, converged=True)
        return (a, info) if full_output else a

    J = _objective(r, p)
    eps0 = cfg.eps0 if cfg.eps0 is not None else 1e-2 * c0 * c0
    eps_floor = cfg.eps_floor * c0 * c0
    w = None
    converged = False
    k = 0
    for k in range(cfg.max_iters):
        eps = max(eps_floor, eps0 * EPS_DECAY ** k)
        w_new = (np.abs(r) ** 2 + eps) ** ((p - 2) / 2)
        # damping only where the majorization argument fails (p > 2)
        w = w_new if (w is None or p <= 2) else 0.5 * w + 0.5 * w_new
        step = _weighted_projection(g, w, m) - a
        t = 1.0
        for _ in range(MAX_HALVINGS):
            r_try = g - _poly_on_grid(a + t * step, n)
            J_try = _objective(r_try, p)
            if J_try <= J:
                break
            t *= 0.5
        else:
            info["halving_failures"] += 1
            if eps <= eps_floor:
                break
            continue
        a = a + t * step
        r = r_try
        rel = (J - J_try) / J if J > 0 else 0.0
        J = J_try
        if eps <= eps_floor and rel < cfg.tol:
            converged = True
            break
    info["irls_iterations"] = k + 1

    a, r, J, newton_ok, n_newton = _newton_polish(g, a, p, m)
    info["newton_iterations"] = n_newton
    info["iterations"] = info["irls_iterations"] + n_newton
    info["converged"] = bool(newton_ok or (converged and p != 1))
    return (a, info) if full_output else a


def _newton_polish(g: np.ndarray, a: np.ndarray, p: float, m: int):
    """Damped Newton on ``mean |g - h|^p`` in the real coordinates of ``a``."""
    n = len(g)
    r = g - _poly_on_grid(a, n)
    J = _objective(r, p)
    for it in range(NEWTON_ITERS):
        ar = np.abs(r)
        top = ar.max()
        if top == 0:
            return a, r, J, True, it
        af = np.maximum(ar, 1e-12 * top)
        u = r / af
        d_rad = p * (p - 1) * af ** (p - 2)
        d_tan = p * af ** (p - 2)
        G1 = _toeplitz_gram(0.5 * (d_rad + d_tan), m)
        G2 = _hankel_gram(0.5 * (d_rad - d_tan) * np.conj(u) ** 2, m)
        H = np.block([[G1.real + G2.real, -G1.imag - G2.imag],
                      [G1.imag - G2.imag, G1.real - G2.real]]) / n
        H = 0.5 * (H + H.T)
        gam = np.fft.fft(p * af ** (p - 1) * np.conj(u))[(-np.arange(m)) % n]
        grad = -np.concatenate([gam.real, -gam.imag]) / n
        try:
            delta = scipy.linalg.solve(H, -grad, assume_a="sym")
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
            delta = np.linalg.lstsq(H, -grad, rcond=None)[0]
        slope = float(grad @ delta)
        if slope >= 0:
            delta = -grad
            slope = float(grad @ delta)
        decrement = -slope
        step = delta[:m] + 1j * delta[m:]
        if decrement <= 1e-16 * J:
            # inside the quadratic region; J differences are pure roundoff here
            a = a + step
            r = g - _poly_on_grid(a, n)
            return a, r, _objective(r, p), True, it + 1
        t = 1.0
        for _ in range(MAX_HALVINGS):
            r_try = g - _poly_on_grid(a + t * step, n)
            J_try = _objective(r_try, p)
            if J_try <= J + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            # no representable decrease left: optimal up to roundoff
            return a, r, J, decrement <= 1e-12 * J, it
        a = a + t * step
        r = r_try
        J = J_try
    return a, r, J, False, NEWTON_ITERS


def _prepare(g, cfg: ApproxConfig):
    M = cfg.budget if cfg.budget is not None else default_budget(g)
    if isinstance(g, AnalyticPolynomial):
        g = g.to_trig()
    if isinstance(g, (TrigPolynomial, RationalDiskFunction)):
        check_grid(spectral_width(g) + M, cfg.grid)
    elif isinstance(g, SampledCircleFunction):
        if g.n_points != cfg.grid:
            raise ValueError("grid mismatch")
        check_grid(M, cfg.grid)
    else:
        raise TypeError(f"unsupported input {type(g).__name__}")
    return sample(g, cfg.grid), M


def best_approx_p2(g, M: int | None = None, N: int = DEFAULT_GRID) -> ApproxResult:
    """Truncated analytic projection: exact ``L^2`` minimizer over degree <= M."""
    s, M = _prepare(g, ApproxConfig(p=2.0, budget=M, grid=N))
    c = fourier_coeffs(s)[: M + 1]
    residual = s - SampledCircleFunction(_poly_on_grid(c, N))
    return ApproxResult(AnalyticPolynomial(c), residual, lp_norm(residual, 2), 0, True, 2.0, M)


def best_approx(g, cfg: ApproxConfig | None = None) -> ApproxResult:
    """Best ``H^p`` approximation of ``g`` by analytic polynomials of degree <= budget.

    ``g`` is a :class:`TrigPolynomial`, :class:`RationalDiskFunction` or samples.
    A result with ``converged=False`` is returned rather than raised.
    """
    cfg = cfg or ApproxConfig()
    if cfg.p == 2:
        return best_approx_p2(g, cfg.budget, cfg.grid)
    s, M = _prepare(g, cfg)
    a, info = irls_solve(s, cfg.p, M, cfg, full_output=True)
    residual = s - SampledCircleFunction(_poly_on_grid(a, cfg.grid))
    info = dict(info)
    iterations = info.pop("iterations")
    converged = info.pop("converged")
    return ApproxResult(AnalyticPolynomial(a), residual, lp_norm(residual, cfg.p), iterations,
                        converged, cfg.p, M, info)
