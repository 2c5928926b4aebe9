"""Scalar Gaussian analytics.

Standard normal density/CDF/quantile, one-dimensional interval and tail
probabilities, the regularized incomplete gamma function behind the
chi-square CDF, the chi density, and the bisection root-finder that the
rest of the package leans on.

The normal CDF is evaluated through ``erfc`` so that upper tails keep full
relative accuracy far out (``gaussian_tail(30)`` is ~5e-198, not 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .errors import BracketError, DomainError, EvaluationError

Probability = float

SQRT2 = math.sqrt(2.0)
SQRT2PI = math.sqrt(2.0 * math.pi)
LOG_SQRT2PI = 0.5 * math.log(2.0 * math.pi)

_MAX_BISECT = 200
_GAMMA_EPS = 1e-16
_GAMMA_MAX_ITER = 100_000


def _out(x):
    # ufuncs hand back 0-d arrays / numpy scalars; scalars in, float out
    return float(x) if np.ndim(x) == 0 else x


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return _out(np.exp(-0.5 * x * x) / SQRT2PI)


def std_normal_cdf(x):
    """Phi(x), evaluated as erfc(-x/sqrt 2)/2."""
    x = np.asarray(x, dtype=float)
    return _out(0.5 * special.erfc(-x / SQRT2))


def gaussian_tail(u):
    """gamma_1((u, inf)) = 1 - Phi(u), without cancellation for large u."""
    u = np.asarray(u, dtype=float)
    return _out(0.5 * special.erfc(u / SQRT2))


def _mills_ratio_cf(u: float) -> float:
    # (1 - Phi(u)) / phi(u) via the Laplace continued fraction, modified Lentz
    tiny = 1e-300
    f = u if u != 0.0 else tiny
    c, d = f, 0.0
    for k in range(1, 500):
        b = u
        a = float(k)
        d = b + a * d
        d = 1.0 / (d if d != 0.0 else tiny)
        c = b + a / c
        if c == 0.0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return 1.0 / f


def log_gaussian_tail(u: float) -> float:
    """ln(1 - Phi(u)); finite for all finite u."""
    u = float(u)
    if u < 30.0:
        return math.log(gaussian_tail(u))
    return -0.5 * u * u - LOG_SQRT2PI + math.log(_mills_ratio_cf(u))


def gaussian_interval(a):
    """gamma_1([-a, a]) = 2 Phi(a) - 1."""
    a = np.asarray(a, dtype=float)
    return _out(special.erf(a / SQRT2))


def hazard_rate(a: float) -> float:
    """phi(a) / (1 - Phi(a))."""
    a = float(a)
    if a < 30.0:
        return std_normal_pdf(a) / gaussian_tail(a)
    return 1.0 / _mills_ratio_cf(a)


def find_root(f: Callable[[float], float], lo: float, hi: float,
              tol: float = 1e-12, max_iter: int = _MAX_BISECT, ftol: float = 0.0) -> float:
    """Bisection on a sign-changing bracket.

    Stops once the bracket is narrower than ``tol`` (or after ``max_iter``
    halvings) and returns its midpoint. A midpoint with ``|f| <= ftol``, or
    an exact zero at an endpoint, is returned immediately.
    """
    lo, hi = float(lo), float(hi)
    if not lo <= hi:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    flo, fhi = float(f(lo)), float(f(hi))
    for v, at in ((flo, lo), (fhi, hi)):
        if not math.isfinite(v):
            raise EvaluationError(f"f({at!r}) = {v!r}")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={flo:.6g}, f(hi)={fhi:.6g}")
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        mid = lo + 0.5 * (hi - lo)
        if mid <= lo or mid >= hi:
            break
        fm = float(f(mid))
        if not math.isfinite(fm):
            raise EvaluationError(f"f({mid!r}) = {fm!r}")
        if abs(fm) <= ftol:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo + 0.5 * (hi - lo)


def std_normal_quantile(p: float) -> float:
    """Phi^{-1}(p) by bisection, |Phi(x) - p| <= 1e-12."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile needs 0 < p < 1, got {p!r}")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        # Phi(x) = tail(-x): relative accuracy for small p
        return find_root(lambda x: gaussian_tail(-x) - p, -40.0, 0.0, tol=1e-14)
    q = 1.0 - p
    return find_root(lambda x: q - gaussian_tail(x), 0.0, 40.0, tol=1e-14)


@dataclass(frozen=True)
class TailSandwich:
    """Elementary bounds on the unnormalised tail integral of exp(-s^2/2) over (a, inf)."""

    lower: float
    upper: float

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def tail_sandwich(a: float) -> TailSandwich:
    """((1/a - 1/a^3) e^{-a^2/2}, (1/a) e^{-a^2/2}) for a > 1."""
    a = float(a)
    if not a > 1.0:
        raise DomainError(f"tail sandwich needs a > 1, got {a!r}")
    e = math.exp(-0.5 * a * a)
    return TailSandwich(lower=(1.0 / a - a ** -3) * e, upper=e / a)


def _stirling_tail(a: float) -> float:
    # lgamma(a) - [(a - 1/2) ln a - a + ln sqrt(2 pi)]; truncation error < 1e-16 for a >= 30
    a2 = a * a
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * a2)) / a2) / a2) / a


def _gamma_prefactor(a: float, x: float) -> float:
    """x^a e^{-x} / Gamma(a), without the cancellation of the naive log form at large a."""
    if a < 30.0:
        return math.exp(a * math.log(x) - x - math.lgamma(a))
    eta = (x - a) / a
    log_ratio = math.log1p(eta) if eta > -0.5 else math.log(x / a)
    log_val = a * (log_ratio - eta) + 0.5 * math.log(a) - LOG_SQRT2PI - _stirling_tail(a)
    return math.exp(log_val)


def _lower_gamma_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total * _gamma_prefactor(a, x)
    raise EvaluationError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _upper_gamma_cf(a: float, x: float) -> float:
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return h * _gamma_prefactor(a, x)
    raise EvaluationError(f"incomplete gamma fraction did not converge (a={a}, x={x})")


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a, x): series below x = a + 1, continued fraction above."""
    a, x = float(a), float(x)
    if a <= 0.0 or x < 0.0:
        raise DomainError(f"P(a, x) needs a > 0 and x >= 0, got ({a}, {x})")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _lower_gamma_series(a, x))
    return max(0.0, 1.0 - _upper_gamma_cf(a, x))


def chi_square_cdf(n: int, x: float) -> Probability:
    """P(g_1^2 + ... + g_n^2 <= x) = P(n/2, x/2)."""
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n!r}")
    if x < 0:
        raise DomainError(f"chi-square argument must be >= 0, got {x!r}")
    return regularized_lower_gamma(0.5 * n, 0.5 * x)


def chi_density(n: int, r):
    """Density of |g| for g standard Gaussian in R^n."""
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n!r}")
    r = np.asarray(r, dtype=float)
    log_norm = (0.5 * n - 1.0) * math.log(2.0) + math.lgamma(0.5 * n)
    with np.errstate(divide="ignore"):
        logr = np.log(r)
    if n == 1:
        val = np.exp(-0.5 * r * r - log_norm)
    else:
        val = np.exp((n - 1) * logr - 0.5 * r * r - log_norm)
    val = np.where(r < 0, 0.0, val)
    return _out(val)
