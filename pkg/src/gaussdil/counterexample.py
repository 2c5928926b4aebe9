"""Numerical reproduction of the flying-saucer counterexample.

The cylinder conjecture predicts gamma_n(tK) <= gamma_2(B(0, tw)) whenever K
has inradius w and the same Gaussian measure as the planar disc B(0, w).
Two independent routes refute it here:

* the derivative route: with gamma_2(B(0, w)) = gamma_1((-a, a)) and a large
  enough, the disc's Gaussian perimeter exceeds the interval's, so the limit
  inequality the conjecture would force fails for t just below 1;
* the direct route: fit a saucer K_n(x) of inradius w and the disc's measure,
  then compare gamma_n(tK_n) with gamma_2(B(0, tw)) by quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import gauss1d
from .bodies import SaucerGeometry, saucer_geometry, saucer_level_radius, saucer_profile
from .errors import DomainError, InfeasibleError
from .measure import boundary_measure_ball2, boundary_measure_interval, saucer_quadrature

DEFAULT_A = 3.0
FIT_TOL = 1e-9
FIT_QUAD_TOL = 1e-11
MAX_DIM = 10_000


@dataclass(frozen=True)
class GapPoint:
    a: float
    w: float
    gap: float
    hazard: float


@dataclass(frozen=True)
class SaucerFit:
    n: int
    w: float
    target: float
    x: float
    residual: float
    geometry: SaucerGeometry


@dataclass(frozen=True)
class LevelRadii:
    b: float
    c: float
    d: float
    u: float
    v: float
    z: float


def disc_measure(w: float) -> float:
    """gamma_2(B(0, w)) = 1 - exp(-w^2/2)."""
    return -math.expm1(-0.5 * w * w)


def pair_w_for_a(a: float) -> float:
    """The disc radius w with gamma_2(B(0, w)) = gamma_1((-a, a)).

    exp(-w^2/2) = 2(1 - Phi(a)), solved in log space so large a is fine.
    """
    a = float(a)
    if not a > 0:
        raise DomainError(f"need a > 0 so that 2(1 - Phi(a)) < 1, got {a!r}")
    log_mass = math.log(2.0) + gauss1d.log_gaussian_tail(a)
    return math.sqrt(-2.0 * log_mass)


def boundary_gap(a: float) -> GapPoint:
    """Disc perimeter minus interval perimeter at equal Gaussian measure."""
    w = pair_w_for_a(a)
    gap = boundary_measure_ball2(w) - boundary_measure_interval(a)
    return GapPoint(a=float(a), w=w, gap=gap, hazard=gauss1d.hazard_rate(a))


def gap_threshold(lo: float = 1.0, hi: float = 2.0, tol: float = 1e-6) -> float:
    """The a where the perimeter gap changes sign, by bisection."""
    return gauss1d.find_root(lambda a: boundary_gap(a).gap, lo, hi, tol=tol)


def asymptotic_excess(a: float) -> float:
    """(w - a - ln(a)/a) * a / ln(a); tends to 0 as a grows."""
    w = pair_w_for_a(a)
    return (w - a - math.log(a) / a) * a / math.log(a)


# ---------------------------------------------------------------------------
# law of large numbers for Gaussian balls


@dataclass
class Lemma4Report:
    n_grid: list
    radii: list
    ratios: list
    measures: list
    eps: float

    @property
    def final_ratio(self) -> float:
        return self.ratios[-1]

    @property
    def final_measure(self) -> float:
        return self.measures[-1]

    @property
    def direct_ok(self) -> bool:
        """Non-vanishing measure comes with radius at least (1 - eps) sqrt(n)."""
        return self.final_measure <= self.eps or self.final_ratio >= 1.0 - self.eps

    @property
    def converse_ok(self) -> bool:
        """Radius beyond (1 + eps) sqrt(n) comes with measure at least 1 - eps."""
        return self.final_ratio <= 1.0 + self.eps or self.final_measure >= 1.0 - self.eps

    def rows(self):
        return [{"n": n, "radius": r, "ratio": q, "measure": m}
                for n, r, q, m in zip(self.n_grid, self.radii, self.ratios, self.measures)]


def check_lemma4(radius: Callable[[int], float], n_grid: Sequence[int], eps: float = 1e-3) -> Lemma4Report:
    """gamma_n(B(0, r(n))) and r(n)/sqrt(n) along an increasing dimension grid."""
    n_grid = [int(n) for n in n_grid]
    if not n_grid or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise DomainError("n_grid must be nonempty and increasing")
    radii = [float(radius(n)) for n in n_grid]
    ratios = [r / math.sqrt(n) for r, n in zip(radii, n_grid)]
    measures = [gauss1d.chi_square_cdf(n, r * r) for n, r in zip(n_grid, radii)]
    return Lemma4Report(n_grid, radii, ratios, measures, eps)


# ---------------------------------------------------------------------------
# saucer fitting


def saucer_limits(n: int, w: float) -> tuple[float, float]:
    """Measures of the x -> 0+ limit (slab) and x -> w- limit (capped cylinder)."""
    slab = gauss1d.gaussian_interval(w)
    return slab, gauss1d.chi_square_cdf(n - 1, w * w) * slab


def fit_saucer(n: int, w: float, target: float, tol: float = FIT_TOL,
               quad_tol: float = FIT_QUAD_TOL) -> SaucerFit:
    """Find x in (0, w) with gamma_n(K_n(x)) = target, by bisection on x."""
    n = int(n)
    if n < 2 or n > MAX_DIM:
        raise DomainError(f"saucer fit supports 2 <= n <= {MAX_DIM}, got {n}")
    slab, cap = saucer_limits(n, w)
    if not (slab > target > cap):
        raise InfeasibleError(
            f"n={n}: target {target:.12g} not strictly between the x->w limit {cap:.12g} "
            f"and the x->0 limit {slab:.12g}", n=n, slab=slab, cap=cap, target=target)

    def resid(x):
        if x <= 0.0:
            return slab - target
        if x >= w:
            return cap - target
        return saucer_quadrature(n, w, x, quad_tol) - target

    x = gauss1d.find_root(resid, 0.0, w, tol=1e-15 * w, ftol=tol)
    r = resid(x)
    if abs(r) > tol:
        raise InfeasibleError(f"n={n}: bisection stalled with residual {r:.3g}",
                              n=n, x=x, residual=r)
    return SaucerFit(n=n, w=float(w), target=float(target), x=x, residual=r,
                     geometry=saucer_geometry(w, x))


def fit_sweep(a: float = DEFAULT_A, n_grid: Sequence[int] = range(2, 201),
              tol: float = FIT_TOL) -> tuple[list[SaucerFit], list[int]]:
    """Fit across dimensions; returns (fits, infeasible dimensions)."""
    w = pair_w_for_a(a)
    target = disc_measure(w)
    fits, infeasible = [], []
    for n in n_grid:
        try:
            fits.append(fit_saucer(n, w, target, tol))
        except InfeasibleError:
            infeasible.append(int(n))
    return fits, infeasible


def level_radii(fit: SaucerFit, b: float, c: float, d: float) -> LevelRadii:
    """Radii u < v < z in (x, y) where the saucer profile equals b > c > d."""
    g = fit.geometry
    if not (g.w > b > c > d > 0):
        raise DomainError(f"need w > b > c > d > 0, got w={g.w}, ({b}, {c}, {d})")
    u, v, z = (g.x + 0.5 * (g.w / g.x - g.x / g.w) * (g.w - h) for h in (b, c, d))
    for r, h in ((u, b), (v, c), (z, d)):
        if abs(saucer_profile(g.w, g.x, r) - h) > 1e-10 * max(1.0, g.w) or \
                abs(saucer_level_radius(g, h) - r) > 1e-10 * max(1.0, r):
            raise ArithmeticError(f"level radius {r} inconsistent with profile at height {h}")
    return LevelRadii(b, c, d, u, v, z)


def default_levels(a: float, w: float, t: float) -> tuple[float, float, float]:
    """b = a - 0.1, c = a - 0.2 and d just below w - (w - c)/t, so (w - c)/(w - d) < t."""
    b, c = a - 0.1, a - 0.2
    d = 0.999 * (w - (w - c) / t)
    if not (c > d > 0):
        raise DomainError(f"no admissible d for t={t}: need t > (w - c)/w = {(w - c) / w:.6g}")
    return b, c, d


# ---------------------------------------------------------------------------
# refutation


def ball_prediction(t: float, w: float) -> float:
    return disc_measure(t * w)


def limit_interval_measure(t: float, a: float, w: float) -> float:
    """gamma_1 of (-(a - (1-t)w), a - (1-t)w), empty when the half-length is negative."""
    return gauss1d.gaussian_interval(max(0.0, a - (1.0 - t) * w))


@dataclass
class Refutation:
    a: float
    w: float
    d_left: float
    d_right: float
    t_grid: list
    lhs: list
    rhs: list

    @property
    def derivative_contradiction(self) -> bool:
        return self.d_left > self.d_right

    @property
    def failing_t(self) -> list:
        return [t for t, l, r in zip(self.t_grid, self.lhs, self.rhs) if l - r < 0]

    def rows(self):
        return [{"t": t, "disc": l, "interval": r, "difference": l - r}
                for t, l, r in zip(self.t_grid, self.lhs, self.rhs)]


def derivative_refutation(a: float = DEFAULT_A,
                          t_grid: Sequence[float] = (0.5, 0.8, 0.9, 0.95, 0.99, 0.999, 1.0)) -> Refutation:
    """Slopes at t = 1 of gamma_2(B(0, tw)) and of the limiting interval measure.

    D_L = w^2 exp(-w^2/2) and D_R = 2 w phi(a); D_L - D_R = w * gap.
    """
    gp = boundary_gap(a)
    if not gp.gap > 0:
        raise DomainError(f"perimeter gap at a={a} is {gp.gap:.3g} <= 0; pick a larger a")
    w = gp.w
    d_left = w * w * math.exp(-0.5 * w * w)
    d_right = 2.0 * w * gauss1d.std_normal_pdf(a)
    t_grid = [float(t) for t in t_grid]
    lhs = [ball_prediction(t, w) for t in t_grid]
    rhs = [limit_interval_measure(t, a, w) for t in t_grid]
    return Refutation(float(a), w, d_left, d_right, t_grid, lhs, rhs)


@dataclass
class ChainLink:
    n: int
    t: float
    x: float
    b: float
    c: float
    d: float
    u: float
    v: float
    z: float
    inclusion_bound: float
    saucer_measure: float
    ball_prediction: float
    tz_ge_v: bool
    inclusion_margin: float = field(init=False)
    violation_margin: float = field(init=False)

    def __post_init__(self):
        self.inclusion_margin = self.saucer_measure - self.inclusion_bound
        self.violation_margin = self.saucer_measure - self.ball_prediction

    @property
    def violation(self) -> bool:
        """gamma_n(tK_n) > gamma_2(B(0, tw)): the conjecture's prediction fails."""
        return self.violation_margin > 0

    def row(self) -> dict:
        return {"n": self.n, "t": self.t, "x": self.x, "u": self.u, "v": self.v, "z": self.z,
                "inclusion_bound": self.inclusion_bound, "saucer_measure": self.saucer_measure,
                "ball_prediction": self.ball_prediction,
                "inclusion_margin": self.inclusion_margin,
                "violation_margin": self.violation_margin,
                "tz_ge_v": self.tz_ge_v, "violation": self.violation}


def conjecture_chain_check(n: int, a: float = DEFAULT_A, t: float = 0.99,
                           b: float | None = None, c: float | None = None, d: float | None = None,
                           fit: SaucerFit | None = None, quad_tol: float = FIT_QUAD_TOL) -> ChainLink:
    """Every link of gamma_n(tK_n) >= gamma_{n-1}(B(0, tz)) gamma_1((-td, td)),
    plus the comparison of gamma_n(tK_n) with the disc prediction."""
    w = pair_w_for_a(a)
    if b is None or c is None or d is None:
        b0, c0, d0 = default_levels(a, w, t)
        b = b0 if b is None else b
        c = c0 if c is None else c
        d = d0 if d is None else d
    if not t > (w - c) / (w - d):
        raise DomainError(f"need t > (w - c)/(w - d) = {(w - c) / (w - d):.6g}, got t={t}")
    if fit is None:
        fit = fit_saucer(n, w, disc_measure(w))
    lr = level_radii(fit, b, c, d)
    incl = gauss1d.chi_square_cdf(n - 1, (t * lr.z) ** 2) * gauss1d.gaussian_interval(t * d)
    sm = saucer_quadrature(n, t * w, t * fit.x, quad_tol)
    return ChainLink(n=int(n), t=float(t), x=fit.x, b=b, c=c, d=d, u=lr.u, v=lr.v, z=lr.z,
                     inclusion_bound=incl, saucer_measure=sm,
                     ball_prediction=ball_prediction(t, w), tz_ge_v=t * lr.z >= lr.v)


@dataclass
class ChainSweep:
    a: float
    t: float
    links: list
    infeasible: list

    @property
    def first_violation(self) -> int | None:
        for link in self.links:
            if link.violation:
                return link.n
        return None

    @property
    def conclusive(self) -> bool:
        return self.first_violation is not None


def chain_sweep(a: float = DEFAULT_A, t: float = 0.99,
                n_grid: Sequence[int] = (3, 5, 10, 20, 50, 100, 200, 500, 1000, 2000)) -> ChainSweep:
    """Chain checks along a dimension grid; infeasible fits are listed, not fatal."""
    w = pair_w_for_a(a)
    target = disc_measure(w)
    links, infeasible = [], []
    for n in n_grid:
        try:
            fit = fit_saucer(n, w, target)
        except InfeasibleError:
            infeasible.append(int(n))
            continue
        links.append(conjecture_chain_check(n, a, t, fit=fit))
    return ChainSweep(float(a), float(t), links, infeasible)
