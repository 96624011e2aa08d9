"""Functions on the unit circle: polynomial and rational types, sampling,
discrete Fourier analysis, analytic projection and outer functions.

Fourier convention: for samples ``s[j] = f(zeta_j)`` on ``zeta_j = exp(2*pi*i*j/N)``
the coefficient array ``c = fft(s) / N`` holds the Laurent coefficient of
``z**k`` at index ``k mod N``, so ``c[-1]`` is the coefficient of ``conj(z)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

DEFAULT_GRID = 4096
LOG_FLOOR = 1e-14
ROOT_PRUNE = 1e-12


def _as_complex(z) -> complex:
    if isinstance(z, (list, tuple)):
        return complex(z[0], z[1])
    return complex(z)


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


def circle_grid(n_points: int) -> np.ndarray:
    """Uniform grid ``exp(2*pi*i*j/N)``, ``j = 0..N-1``."""
    return np.exp(2j * np.pi * np.arange(n_points) / n_points)


# --------------------------------------------------------------------------
# Types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite two-sided Fourier series ``sum_k coeffs[k] z**k``."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): complex(v) for k, v in self.coeffs.items() if complex(v) != 0}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def from_analytic(cls, coeffs) -> "TrigPolynomial":
        return cls({k: c for k, c in enumerate(np.atleast_1d(coeffs))})

    @property
    def degree(self) -> int:
        return max((abs(k) for k in self.coeffs), default=0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for k, c in self.coeffs.items():
            out = out + c * z ** k
        return out

    def __getitem__(self, k: int) -> complex:
        return self.coeffs.get(k, 0j)

    def scale(self, alpha) -> "TrigPolynomial":
        return TrigPolynomial({k: alpha * c for k, c in self.coeffs.items()})

    def shift(self, m: int) -> "TrigPolynomial":
        """Multiply by ``z**m``."""
        return TrigPolynomial({k + m: c for k, c in self.coeffs.items()})

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0j) + c
        return TrigPolynomial(out)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        return self + other.scale(-1)

    def is_analytic(self) -> bool:
        return all(k >= 0 for k in self.coeffs)

    def to_json(self) -> dict:
        return {"type": "trig", "coeffs": {str(k): complex_to_json(c) for k, c in self.coeffs.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> "TrigPolynomial":
        return cls({int(k): _as_complex(v) for k, v in obj["coeffs"].items()})


@dataclass(frozen=True)
class AnalyticPolynomial:
    """Polynomial ``sum_{k=0}^d coeffs[k] z**k`` (ascending order)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def __mul__(self, other: "AnalyticPolynomial") -> "AnalyticPolynomial":
        return AnalyticPolynomial(np.convolve(self.coeffs, other.coeffs))

    def derivative(self) -> "AnalyticPolynomial":
        return AnalyticPolynomial(np.polynomial.polynomial.polyder(self.coeffs))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def reversed_conjugate(self, n: int) -> "AnalyticPolynomial":
        """``z**n * conj(P(1/conj(z)))`` for ``n >= deg P``."""
        c = np.zeros(n + 1, dtype=complex)
        c[: len(self.coeffs)] = self.coeffs
        return AnalyticPolynomial(np.conj(c[::-1]))

    @classmethod
    def from_roots(cls, roots, lead=1.0) -> "AnalyticPolynomial":
        return cls(lead * np.polynomial.polynomial.polyfromroots(np.asarray(roots, dtype=complex))
                   if len(roots) else [lead])

    def to_trig(self) -> TrigPolynomial:
        return TrigPolynomial.from_analytic(self.coeffs)

    def to_json(self) -> dict:
        return {"type": "trig", "coeffs": {str(k): complex_to_json(c) for k, c in enumerate(self.coeffs) if c != 0}}


@dataclass(frozen=True)
class FiniteBlaschke:
    """``const * prod (z - b) / (1 - conj(b) z)`` with all ``|b| < 1``."""

    zeros: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    unimodular_const: complex = 1.0 + 0j

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.zeros, dtype=complex)).copy()
        if np.any(np.abs(z) >= 1):
            raise ValueError("Blaschke zeros must lie in the open unit disk")
        # deterministic order: modulus, then argument
        z = z[np.lexsort((np.angle(z), np.round(np.abs(z), 12)))]
        z.flags.writeable = False
        object.__setattr__(self, "zeros", z)
        const = complex(self.unimodular_const)
        if abs(abs(const) - 1) > 1e-8:
            raise ValueError("Blaschke constant must be unimodular")
        object.__setattr__(self, "unimodular_const", const / abs(const))

    @classmethod
    def monomial(cls, n: int, const=1.0) -> "FiniteBlaschke":
        return cls(np.zeros(n, dtype=complex), const)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def is_monomial(self) -> bool:
        return bool(np.all(self.zeros == 0))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.unimodular_const, dtype=complex)
        for b in self.zeros:
            out = out * (z - b) / (1 - np.conj(b) * z)
        return out

    def numerator(self) -> AnalyticPolynomial:
        """``const * prod (z - b)``."""
        return AnalyticPolynomial.from_roots(self.zeros, self.unimodular_const)

    def denominator(self) -> AnalyticPolynomial:
        """``Q(z) = prod (1 - conj(b) z)``."""
        q = AnalyticPolynomial([1.0])
        for b in self.zeros:
            q = q * AnalyticPolynomial([1.0, -np.conj(b)])
        return q

    def __mul__(self, other: "FiniteBlaschke") -> "FiniteBlaschke":
        return FiniteBlaschke(np.concatenate([self.zeros, other.zeros]),
                              self.unimodular_const * other.unimodular_const)

    def to_json(self) -> dict:
        return {"zeros": [complex_to_json(b) for b in self.zeros],
                "const": complex_to_json(self.unimodular_const)}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteBlaschke":
        return cls([_as_complex(b) for b in obj.get("zeros", [])], _as_complex(obj.get("const", [1.0, 0.0])))


@dataclass(frozen=True)
class RationalDiskFunction:
    """``g = h / B`` with ``h = numerator / denominator`` analytic on the closed disk.

    On the circle ``g = conj(B) * h``. ``denominator`` defaults to 1 and must not
    vanish on the closed disk.
    """

    numerator: AnalyticPolynomial
    blaschke: FiniteBlaschke
    denominator: AnalyticPolynomial = field(default_factory=lambda: AnalyticPolynomial([1.0]))

    def __post_init__(self):
        if self.numerator.is_zero():
            raise ValueError("numerator must be nonzero")
        if self.denominator.degree > 0:
            r = np.roots(self.denominator.coeffs[::-1])
            if np.any(np.abs(r) <= 1):
                raise ValueError("denominator must not vanish on the closed disk")

    def h(self, z):
        return self.numerator(z) / self.denominator(z)

    def __call__(self, z):
        return self.h(z) / self.blaschke(z)

    def decay_rate(self) -> float:
        """Geometric decay rate of the Laurent coefficients on the circle."""
        rho = max(np.abs(self.blaschke.zeros), default=0.0)
        if self.denominator.degree > 0:
            rho = max(rho, 1 / np.min(np.abs(np.roots(self.denominator.coeffs[::-1]))))
        return float(rho)

    def to_json(self) -> dict:
        return {"type": "rational",
                "numerator": [complex_to_json(c) for c in self.numerator.coeffs],
                "denominator": [complex_to_json(c) for c in self.denominator.coeffs],
                "blaschke": self.blaschke.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "RationalDiskFunction":
        den = obj.get("denominator", [[1.0, 0.0]])
        return cls(AnalyticPolynomial([_as_complex(c) for c in obj["numerator"]]),
                   FiniteBlaschke.from_json(obj["blaschke"]),
                   AnalyticPolynomial([_as_complex(c) for c in den]))


@dataclass(frozen=True, eq=False)
class SampledCircleFunction:
    """Values on the uniform ``N``-point circle grid, ``N`` a power of two."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).copy()
        if v.ndim != 1 or not is_power_of_two(len(v)):
            raise ValueError("grid size must be a power of two")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n_points(self) -> int:
        return len(self.values)

    @property
    def grid(self) -> np.ndarray:
        return circle_grid(self.n_points)

    def _other(self, other):
        if isinstance(other, SampledCircleFunction):
            if other.n_points != self.n_points:
                raise ValueError("grid mismatch")
            return other.values
        return other

    def __add__(self, other):
        return SampledCircleFunction(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return SampledCircleFunction(self.values - self._other(other))

    def __rsub__(self, other):
        return SampledCircleFunction(self._other(other) - self.values)

    def __mul__(self, other):
        return SampledCircleFunction(self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return SampledCircleFunction(self.values / self._other(other))

    def __neg__(self):
        return SampledCircleFunction(-self.values)

    def __abs__(self):
        return SampledCircleFunction(np.abs(self.values))

    def conj(self) -> "SampledCircleFunction":
        return SampledCircleFunction(np.conj(self.values))

    def shift(self, m: int) -> "SampledCircleFunction":
        """Multiply by ``z**m``."""
        return SampledCircleFunction(self.values * self.grid ** m)

    def to_json(self) -> dict:
        return {"type": "samples", "values": [complex_to_json(v) for v in self.values]}


CircleInput = Union[TrigPolynomial, AnalyticPolynomial, RationalDiskFunction, FiniteBlaschke,
                    SampledCircleFunction, Callable]


# --------------------------------------------------------------------------
# Sampling and Fourier analysis
# --------------------------------------------------------------------------


def spectral_width(f) -> int:
    """Number of Laurent coefficients (on either side) that are not negligible.

    For rational inputs this is the index past which the coefficients fall
    below double precision relative to the leading ones.
    """
    if isinstance(f, TrigPolynomial):
        return f.degree
    if isinstance(f, AnalyticPolynomial):
        return f.degree
    if isinstance(f, FiniteBlaschke):
        f = RationalDiskFunction(AnalyticPolynomial([1.0]), FiniteBlaschke(f.zeros))
    if isinstance(f, RationalDiskFunction):
        rho = f.decay_rate()
        extra = max(f.numerator.degree, f.blaschke.degree)
        if rho == 0:
            return extra
        return extra + int(math.ceil(math.log(1e-16) / math.log(rho)))
    raise TypeError(f"no spectral width for {type(f).__name__}")


def check_grid(width: int, n_points: int) -> None:
    if not is_power_of_two(n_points):
        raise ValueError(f"grid size {n_points} is not a power of two")
    if n_points < 4 * (width + 1):
        raise ValueError(f"grid N={n_points} too small for spectral width {width}; need N >= {4 * (width + 1)}")


def sample(f: CircleInput, n_points: int = DEFAULT_GRID) -> SampledCircleFunction:
    """Evaluate ``f`` on the uniform grid of ``n_points`` circle points.

    Polynomial, rational and Blaschke inputs are checked against the aliasing
    guard ``N >= 4 (width + 1)``; callables are trusted.
    """
    if isinstance(f, SampledCircleFunction):
        if f.n_points != n_points:
            raise ValueError("grid mismatch")
        return f
    if not is_power_of_two(n_points):
        raise ValueError(f"grid size {n_points} is not a power of two")
    if isinstance(f, AnalyticPolynomial):
        f = f.to_trig()
    if isinstance(f, TrigPolynomial):
        check_grid(f.degree, n_points)
        c = np.zeros(n_points, dtype=complex)
        for k, v in f.coeffs.items():
            c[k % n_points] += v
        return SampledCircleFunction(np.fft.ifft(c) * n_points)
    zeta = circle_grid(n_points)
    if isinstance(f, RationalDiskFunction):
        check_grid(spectral_width(f), n_points)
        return SampledCircleFunction(np.conj(f.blaschke(zeta)) * f.h(zeta))
    if isinstance(f, FiniteBlaschke):
        return SampledCircleFunction(f(zeta))
    if callable(f):
        return SampledCircleFunction(f(zeta))
    raise TypeError(f"cannot sample {type(f).__name__}")


def fourier_coeffs(s: SampledCircleFunction) -> np.ndarray:
    """Laurent coefficients ``(1/N) sum_j s[j] zeta_j**(-k)``, stored at ``k mod N``."""
    return np.fft.fft(s.values) / s.n_points


def from_coeffs(c: np.ndarray) -> SampledCircleFunction:
    """Inverse of :func:`fourier_coeffs`."""
    return SampledCircleFunction(np.fft.ifft(c) * len(c))


def coeff_map(s: SampledCircleFunction, tol: float = 0.0) -> dict:
    """Fourier coefficients as ``{k: c_k}`` for ``k`` in ``[-N/2, N/2)`` with ``|c_k| > tol``."""
    c = fourier_coeffs(s)
    n = s.n_points
    freqs = np.fft.fftfreq(n, 1.0 / n).astype(int)
    keep = np.abs(c) > tol
    return {int(k): complex(v) for k, v in sorted(zip(freqs[keep], c[keep]))}


def to_trig(s: SampledCircleFunction, tol: float = 0.0) -> TrigPolynomial:
    return TrigPolynomial(coeff_map(s, tol))


def analytic_part(s: SampledCircleFunction, degree: int) -> AnalyticPolynomial:
    """Coefficients ``0..degree`` of ``s``."""
    return AnalyticPolynomial(fourier_coeffs(s)[: degree + 1])


def negative_mass(s: SampledCircleFunction) -> float:
    """Largest modulus among the strictly negative frequencies."""
    c = fourier_coeffs(s)
    return float(np.max(np.abs(c[s.n_points // 2:])))


def lp_norm(s: SampledCircleFunction, p: float) -> float:
    """Riemann-sum ``L^p`` norm with respect to normalized arc length."""
    if p < 1:
        raise ValueError("p must be >= 1")
    a = np.abs(s.values)
    if math.isinf(p):
        return float(a.max())
    if p == 1:
        return float(a.mean())
    if p == 2:
        return float(np.sqrt(np.mean(a * a)))
    m = a.max()
    if m == 0:
        return 0.0
    return float(m * np.mean((a / m) ** p) ** (1.0 / p))


def riesz_projection(s: SampledCircleFunction) -> SampledCircleFunction:
    """Drop the negative frequencies (including the Nyquist bin ``-N/2``)."""
    c = fourier_coeffs(s)
    c[s.n_points // 2:] = 0
    return from_coeffs(c)


def _analytic_completion(u: np.ndarray) -> np.ndarray:
    """Analytic function on the grid with real part ``u`` and real mean."""
    n = len(u)
    c = np.fft.fft(u) / n
    c[0] = c[0].real
    c[1: n // 2] *= 2
    c[n // 2:] = 0
    return np.fft.ifft(c) * n


def outer_from_modulus(phi, full_output: bool = False):
    """Outer function ``F`` with ``|F|**2 = phi`` on the grid and ``F(0) > 0``.

    ``phi`` is floored at ``1e-14 * max(phi)`` before taking logarithms. With
    ``full_output`` the return value is ``(F, info)`` where ``info['floored']``
    counts floored grid points.
    """
    if isinstance(phi, SampledCircleFunction):
        phi = phi.values
    phi = np.asarray(phi)
    if np.iscomplexobj(phi):
        if np.max(np.abs(phi.imag)) > 1e-12 * max(np.max(np.abs(phi)), 1e-300):
            raise ValueError("modulus function must be real")
        phi = phi.real
    top = phi.max() if phi.size else 0.0
    if top <= 0:
        raise ValueError("modulus function vanishes identically")
    if phi.min() < -1e-12 * top:
        raise ValueError("modulus function must be nonnegative")
    floor = LOG_FLOOR * top
    n_floored = int(np.count_nonzero(phi < floor))
    if n_floored:
        warnings.warn(f"outer_from_modulus: {n_floored} grid values floored at {floor:.3g}", RuntimeWarning,
                      stacklevel=2)
    F = SampledCircleFunction(np.exp(_analytic_completion(0.5 * np.log(np.maximum(phi, floor)))))
    if full_output:
        return F, {"floored": n_floored, "floor": floor}
    return F


def outer_power(F: SampledCircleFunction, s: float) -> SampledCircleFunction:
    """``F**s`` through the analytic logarithm of the outer function ``F``.

    Integer exponents are computed as plain powers, which agrees with the
    analytic branch for any ``F`` analytic on the disk.
    """
    a = np.abs(F.values)
    if np.any(a == 0):
        raise ValueError("outer function vanishes on the grid")
    if float(s).is_integer():
        return SampledCircleFunction(F.values ** int(s))
    return SampledCircleFunction(np.exp(s * _analytic_completion(np.log(a))))


def poly_roots(P: AnalyticPolynomial) -> np.ndarray:
    """All roots (with multiplicity) from the companion matrix plus one Newton step."""
    c = np.asarray(P.coeffs, dtype=complex)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0:
        raise ValueError("zero polynomial has no finite root set")
    c = np.where(np.abs(c) < ROOT_PRUNE * scale, 0, c)
    nz = np.flatnonzero(c)
    c = c[: nz[-1] + 1]
    if len(c) < 2:
        return np.zeros(0, dtype=complex)
    roots = np.roots(c[::-1])
    dc = np.polynomial.polynomial.polyder(c)
    pv = np.polynomial.polynomial.polyval
    for i, r in enumerate(roots):
        d = pv(r, dc)
        if d == 0:
            continue
        cand = r - pv(r, c) / d
        if abs(pv(cand, c)) < abs(pv(r, c)):
            roots[i] = cand
    return roots


def blaschke_from_samples(values, degree: int | None = None, n_taylor: int | None = None):
    """Identify ``values = scale * B`` with ``B`` a finite Blaschke product.

    The degree defaults to the winding number of ``values`` around the origin.
    Zeros come from a least-squares Padé fit of the Taylor coefficients: the
    denominator of ``B`` is ``prod (1 - conj(b) z)``, whose roots are the
    reflected zeros. Returns ``(B, scale)`` with ``scale > 0``.
    """
    if isinstance(values, SampledCircleFunction):
        values = values.values
    values = np.asarray(values, dtype=complex)
    n = len(values)
    if degree is None:
        ph = np.unwrap(np.angle(np.append(values, values[0])))
        degree = int(round((ph[-1] - ph[0]) / (2 * np.pi)))
        if degree < 0:
            raise ValueError("samples wind negatively; not an analytic inner function")
    scale = float(np.mean(np.abs(values)))
    c = np.fft.fft(values) / n
    if degree == 0:
        return FiniteBlaschke([], complex(c[0]) / abs(c[0])), scale
    L = n_taylor or max(4 * degree, 16)
    # sum_{i=0}^{d} q_i c_{m-i} = 0 for m = d+1 .. d+L, q_0 = 1
    rows = np.arange(degree + 1, degree + 1 + L)
    A = np.array([[c[m - i] for i in range(1, degree + 1)] for m in rows])
    b = -c[rows]
    q = np.linalg.lstsq(A, b, rcond=None)[0]
    q = np.concatenate([[1.0], q])
    # a short denominator means roots at infinity, i.e. zeros of B at the origin
    keep = np.flatnonzero(np.abs(q) > ROOT_PRUNE)
    q = q[: keep[-1] + 1]
    refl = poly_roots(AnalyticPolynomial(q)) if len(q) > 1 else np.zeros(0, dtype=complex)
    zeros = np.concatenate([1.0 / np.conj(refl), np.zeros(degree - len(refl), dtype=complex)])
    out = np.abs(zeros) >= 1
    zeros[out] = zeros[out] / np.abs(zeros[out]) * (1 - 1e-15)
    B = FiniteBlaschke(zeros)
    ratio = np.mean(values / B(circle_grid(n)))
    return FiniteBlaschke(zeros, ratio / abs(ratio)), scale
