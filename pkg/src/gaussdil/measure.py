"""Gaussian and spherical measure engines.

Closed forms where they exist, radial quadrature for flying saucers, and
seeded Monte Carlo for everything else. Monte Carlo draws come from Philox
streams keyed by (seed, stream, chunk index); chunks are reduced in index
order, so results do not depend on the thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import gauss1d
from ._quadrature import integrate
from .bodies import Ball, Body, Cylinder, FlyingSaucer, Slab, saucer_geometry
from .errors import DomainError

CLOSED_FORM = "closed_form"
QUADRATURE = "quadrature"
MONTE_CARLO = "monte_carlo"
METHODS = (CLOSED_FORM, QUADRATURE, MONTE_CARLO)

CHUNK = 1 << 16
MIN_SAMPLES = 1000
DEFAULT_TOL = 1e-10

# stream ids keep independent sampling purposes from sharing draws
STREAM_GAUSS = 0
STREAM_SPHERE = 1


class Measurement(NamedTuple):
    value: float
    method: str
    std_error: float = 0.0


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    @property
    def upper(self) -> float:
        """One-sided 99.7% upper confidence bound."""
        return self.mean + 3.0 * self.std_error

    @property
    def lower(self) -> float:
        return self.mean - 3.0 * self.std_error


# ---------------------------------------------------------------------------
# sampling machinery


def chunk_rng(seed: int, stream: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(chunk)))
    return np.random.Generator(np.random.Philox(ss))


def _chunk_sizes(samples):
    full, rest = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def default_threads() -> int:
    return os.cpu_count() or 1


def map_chunks(fn, samples: int, seed: int, stream: int, threads: int | None = None):
    """Apply fn(rng, size) to every chunk; results in chunk order."""
    sizes = _chunk_sizes(int(samples))
    jobs = [(chunk_rng(seed, stream, i), s) for i, s in enumerate(sizes)]
    threads = threads or default_threads()
    if threads <= 1 or len(jobs) == 1:
        return [fn(rng, s) for rng, s in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def mean_estimate(partials, samples: int, seed: int) -> MonteCarloEstimate:
    """Combine per-chunk (sum, sum of squares) pairs."""
    s1 = 0.0
    s2 = 0.0
    for a, b in partials:
        s1 += a
        s2 += b
    n = samples
    mean = s1 / n
    var = max(0.0, (s2 - s1 * s1 / n) / (n - 1)) if n > 1 else 0.0
    return MonteCarloEstimate(mean=mean, std_error=math.sqrt(var / n), samples=n, seed=int(seed))


def gaussian_draws(rng: np.random.Generator, size: int, dim: int, antithetic: bool = False):
    if not antithetic:
        return rng.standard_normal((size, dim))
    half = rng.standard_normal(((size + 1) // 2, dim))
    return np.concatenate([half, -half])[:size]


def sphere_draws(rng: np.random.Generator, size: int, dim: int):
    z = rng.standard_normal((size, dim))
    norms = np.sqrt(np.einsum("ij,ij->i", z, z))
    bad = norms == 0
    while np.any(bad):
        z[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms[bad] = np.sqrt(np.einsum("ij,ij->i", z[bad], z[bad]))
        bad = norms == 0
    return z / norms[:, None]


def _check_samples(samples):
    if int(samples) != samples or samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {samples!r}")


# ---------------------------------------------------------------------------
# Monte Carlo engines


def gaussian_measure_mc(body: Body, samples: int = 10**6, seed: int = 0,
                        threads: int | None = None, antithetic: bool = False) -> MonteCarloEstimate:
    """Indicator mean of body membership under standard Gaussian draws."""
    _check_samples(samples)

    def run(rng, size):
        hits = int(np.count_nonzero(body.contains(gaussian_draws(rng, size, body.dim, antithetic))))
        return hits, hits

    return mean_estimate(map_chunks(run, samples, seed, STREAM_GAUSS, threads), samples, seed)


def spherical_measure_mc(body: Body, samples: int = 10**6, seed: int = 0,
                         threads: int | None = None) -> MonteCarloEstimate:
    """Fraction of uniform points of the unit sphere lying in the body."""
    _check_samples(samples)
    if body.dim < 2:
        raise DomainError("spherical measure needs ambient dimension >= 2")

    def run(rng, size):
        hits = int(np.count_nonzero(body.contains(sphere_draws(rng, size, body.dim))))
        return hits, hits

    return mean_estimate(map_chunks(run, samples, seed, STREAM_SPHERE, threads), samples, seed)


# ---------------------------------------------------------------------------
# deterministic engines


def _chi_window(k: int):
    # |g| for g ~ N(0, I_k) is 1-Lipschitz with mean in [sqrt(k)-1, sqrt(k)];
    # mass outside [sqrt(k)-21, sqrt(k)+20] is below 2 exp(-200)
    c = math.sqrt(k)
    return max(0.0, c - 21.0), c + 20.0


def saucer_quadrature(n: int, w: float, x: float, tol: float = DEFAULT_TOL, rtol: float = 0.0) -> float:
    """gamma_n of the flying saucer K_n(x) via its radial integral.

    integral_0^y chi_{n-1}(r) (2 Phi(f(r)) - 1) dr, with breakpoints at the
    profile kinks x and y and around the bulk of the chi density.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"saucer needs n >= 2, got {n!r}")
    geom = saucer_geometry(w, x)
    k = int(n) - 1
    lo, hi = _chi_window(k)
    hi = min(hi, geom.y)
    if hi <= lo:
        return 0.0
    c = math.sqrt(k)
    pts = [lo, hi, geom.x, geom.y]
    pts += [c + 0.7 * j for j in (-8, -4, -2, -1, 0, 1, 2, 4, 8)]
    pts = [p for p in pts if lo <= p <= hi]

    def integrand(r):
        f = np.where(r <= geom.x, geom.w, (geom.y - r) * geom.w / (geom.y - geom.x))
        return gauss1d.chi_density(k, r) * gauss1d.gaussian_interval(np.maximum(f, 0.0))

    value, _, _ = integrate(integrand, pts, atol=tol, rtol=rtol)
    return min(max(value, 0.0), 1.0)


def gaussian_measure(body: Body, *, tol: float = DEFAULT_TOL, rtol: float = 0.0,
                     samples: int = 10**6, seed: int = 0, threads: int | None = None) -> Measurement:
    """gamma_n(body) with the engine used. Bodies without a closed form or
    quadrature route fall back to Monte Carlo and say so in the method tag."""
    if isinstance(body, Ball):
        return Measurement(gauss1d.chi_square_cdf(body.n, body.r ** 2), CLOSED_FORM)
    if isinstance(body, Slab):
        return Measurement(gauss1d.gaussian_interval(body.w), CLOSED_FORM)
    if isinstance(body, Cylinder):
        return Measurement(gauss1d.chi_square_cdf(body.k, body.w ** 2), CLOSED_FORM)
    if isinstance(body, FlyingSaucer):
        return Measurement(saucer_quadrature(body.n, body.w, body.x, tol, rtol), QUADRATURE)
    est = gaussian_measure_mc(body, samples, seed, threads)
    return Measurement(est.mean, MONTE_CARLO, est.std_error)


def is_deterministic(body: Body) -> bool:
    return isinstance(body, (Ball, Slab, Cylinder, FlyingSaucer))


# ---------------------------------------------------------------------------
# boundary measures


def boundary_measure_ball2(w: float) -> float:
    """Gaussian perimeter of the planar disc of radius w: w exp(-w^2/2)."""
    if not w > 0:
        raise DomainError(f"w must be positive, got {w!r}")
    return w * math.exp(-0.5 * w * w)


def boundary_measure_interval(a: float) -> float:
    """Gaussian perimeter of (-a, a) on the line: 2 phi(a)."""
    if not a >= 0:
        raise DomainError(f"a must be nonnegative, got {a!r}")
    return 2.0 * gauss1d.std_normal_pdf(a)


def boundary_measure_fd(body: Body, eps: float) -> float:
    """Forward difference (gamma(K_eps) - gamma(K)) / eps.

    Only an approximation of the boundary measure, and only for bodies whose
    eps-neighbourhood stays in the family (ball, slab, cylinder).
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    if isinstance(body, Ball):
        grown = Ball(body.n, body.r + eps)
    elif isinstance(body, Slab):
        grown = Slab(body.n, body.w + eps)
    elif isinstance(body, Cylinder):
        grown = Cylinder(body.k, body.l, body.w + eps)
    else:
        raise DomainError(f"no finite-difference neighbourhood for {body.variant}")
    return (gaussian_measure(grown).value - gaussian_measure(body).value) / eps


# ---------------------------------------------------------------------------
# dilation profiles


@dataclass
class DilationProfile:
    t_grid: list
    values: list
    methods: list
    uncertainties: list
    body: str = ""
    columns: tuple = field(default=("t", "value", "method", "std_error"), repr=False)

    def rows(self):
        return [
            {"t": t, "value": v, "method": m, "std_error": u}
            for t, v, m, u in zip(self.t_grid, self.values, self.methods, self.uncertainties)
        ]

    def is_monotone(self) -> bool:
        for i in range(1, len(self.values)):
            slack = 3.0 * (self.uncertainties[i] + self.uncertainties[i - 1])
            if self.values[i] < self.values[i - 1] - slack:
                return False
        return True


def _check_grid(t_grid, upper=1.0):
    t = [float(v) for v in t_grid]
    if not t:
        raise DomainError("empty dilation grid")
    if any(not (0.0 < v <= upper) for v in t):
        raise DomainError(f"dilation factors must lie in (0, {upper}]")
    if any(b <= a for a, b in zip(t, t[1:])):
        raise DomainError("dilation grid must be strictly increasing")
    return t


def dilation_profile(body: Body, t_grid: Sequence[float], method: str = "auto",
                     mc_samples: int = 10**6, seed: int = 0, *, tol: float = DEFAULT_TOL,
                     rtol: float = 0.0, threads: int | None = None) -> DilationProfile:
    """gamma_n(tK) along a grid of dilation factors.

    Every Monte Carlo point reuses the same seed, so the sampled profile is
    monotone in t draw by draw.
    """
    t = _check_grid(t_grid)
    if method not in ("auto",) + METHODS:
        raise DomainError(f"unknown method {method!r}")
    values, methods, errs = [], [], []
    for ti in t:
        b = body.dilate(ti)
        if method == MONTE_CARLO:
            est = gaussian_measure_mc(b, mc_samples, seed, threads)
            m = Measurement(est.mean, MONTE_CARLO, est.std_error)
        else:
            m = gaussian_measure(b, tol=tol, rtol=rtol, samples=mc_samples, seed=seed, threads=threads)
            if method != "auto" and m.method != method:
                raise DomainError(f"{body.variant} has no {method} engine (got {m.method})")
        values.append(m.value)
        methods.append(m.method)
        errs.append(m.std_error)
    return DilationProfile(t, values, methods, errs, body=body.label)
