"""Margin-reporting checkers for the dilation inequalities.

Each checker evaluates both sides of one inequality at every grid point and
returns :class:`BoundCheckResult` rows with ``margin = rhs - lhs``. Two pass
rules are in use:

* ``"margin"``: margin >= -(tolerance + 3 * uncertainty). Used where
  sampling noise is an allowance (S- and B-inequality, the 1/60 sphere check).
* ``"upper_ci"``: lhs + 3 * uncertainty <= rhs + tolerance, i.e. the 99.7%
  one-sided upper confidence bound of a sampled lhs must clear the bound.

Deterministic engines report uncertainty 0 and tolerance 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gauss1d
from .bodies import Body
from .errors import DomainError, HypothesisError
from .measure import (DEFAULT_TOL, Measurement, MonteCarloEstimate, gaussian_measure,
                      spherical_measure_mc)

K_SIGMA = 3.0
DETERMINISTIC_TOL = 1e-9
B_TOL = 1e-6

# an alternative form of this bound uses the exponent (sqrt(n) w - 5)_+^2;
# only the (1/4)(sqrt(n) w - 6)_+^2 form is checked, and every row says so
THEOREM3_NOTE = ("checked exponent is (1/4)(sqrt(n)w-6)_+^2; "
                 "the variant (sqrt(n)w-5)_+^2 is not checked")


@dataclass
class BoundCheckResult:
    inequality: str
    grid_point: dict
    lhs: float
    rhs: float
    uncertainty: float = 0.0
    tolerance: float = DETERMINISTIC_TOL
    criterion: str = "margin"
    margin: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.margin = self.rhs - self.lhs
        if self.criterion == "margin":
            self.passed = self.margin >= -(self.tolerance + K_SIGMA * self.uncertainty)
        elif self.criterion == "upper_ci":
            self.passed = self.lhs + K_SIGMA * self.uncertainty <= self.rhs + self.tolerance
        else:
            raise DomainError(f"unknown criterion {self.criterion!r}")
        if not math.isfinite(self.margin):
            raise DomainError(f"non-finite margin in {self.inequality} at {self.grid_point}")

    def row(self) -> dict:
        out = {"inequality": self.inequality}
        out.update(self.grid_point)
        out.update(lhs=self.lhs, rhs=self.rhs, margin=self.margin,
                   uncertainty=self.uncertainty, passed=self.passed)
        return out


@dataclass(frozen=True)
class ExponentProbe:
    t: float
    empirical_kappa: float
    body: str


def all_passed(results) -> bool:
    return all(r.passed for r in results)


def _measure(body, tol=DEFAULT_TOL, rtol=0.0, samples=10**6, seed=0):
    return gaussian_measure(body, tol=tol, rtol=rtol, samples=samples, seed=seed)


def _tol(m: Measurement) -> float:
    return DETERMINISTIC_TOL if m.std_error == 0 else 0.0


def _require_half(body, m: Measurement, what="gamma_n(K)"):
    if m.value - K_SIGMA * m.std_error > 0.5 + 1e-12:
        raise HypothesisError(
            f"{body.label}: {what} = {m.value:.6g} exceeds 1/2", measured=m.value)


def _grid(values, lo_open=0.0, hi=1.0, name="t"):
    g = [float(v) for v in values]
    if not g:
        raise DomainError("empty grid")
    for v in g:
        if not lo_open < v <= hi:
            raise DomainError(f"{name}={v} outside ({lo_open}, {hi}]")
    return g


# ---------------------------------------------------------------------------
# background inequalities


def interval_level(p: float) -> float:
    """The a >= 0 with 2 Phi(a) - 1 = p."""
    if not 0.0 <= p < 1.0:
        raise DomainError(f"interval level needs 0 <= p < 1, got {p!r}")
    if p == 0.0:
        return 0.0
    hi = 1.0
    while gauss1d.gaussian_interval(hi) < p:
        hi *= 2.0
    return gauss1d.find_root(lambda a: gauss1d.gaussian_interval(a) - p, 0.0, hi, tol=1e-15)


def check_s_inequality(body: Body, t_grid: Sequence[float], **engine) -> list[BoundCheckResult]:
    """gamma_n(tK) <= gamma_1([-ta, ta]) where gamma_1([-a, a]) = gamma_n(K)."""
    t_grid = _grid(t_grid)
    base = _measure(body, **engine)
    a = interval_level(base.value)
    # d rhs / d gamma_n(K) = t phi(ta) / phi(a)
    out = []
    for t in t_grid:
        m = _measure(body.dilate(t), **engine)
        rhs = gauss1d.gaussian_interval(t * a)
        drhs = t * gauss1d.std_normal_pdf(t * a) / gauss1d.std_normal_pdf(a)
        unc = math.hypot(m.std_error, drhs * base.std_error)
        out.append(BoundCheckResult("s_inequality", {"body": body.label, "t": t, "a": a},
                                    m.value, rhs, uncertainty=unc, tolerance=_tol(m)))
    return out


def check_b_inequality(body: Body, log_grid: Sequence[float], tolerance: float = B_TOL,
                       **engine) -> list[BoundCheckResult]:
    """Concavity of u -> ln gamma_n(e^u K) through discrete second differences.

    Grid points whose measure underflows to 0 are excluded and reported in
    the grid_point of the neighbouring rows as ``excluded``.
    """
    u = [float(v) for v in log_grid]
    if len(u) < 3:
        raise DomainError("need at least three log-dilation points")
    h = np.diff(u)
    if np.any(h <= 0) or np.ptp(h) > 1e-9 * max(1.0, abs(h[0])):
        raise DomainError("log grid must be increasing and equally spaced")
    # logs need relative accuracy; the absolute floor would swamp small measures
    engine.setdefault("rtol", 1e-13)
    engine["tol"] = 1e-300
    logs, errs = [], []
    for ui in u:
        m = _measure(body.dilate(math.exp(ui)), **engine)
        if m.value <= 0.0:
            logs.append(None)
            errs.append(None)
        else:
            logs.append(math.log(m.value))
            errs.append(m.std_error / m.value)
    excluded = [ui for ui, lg in zip(u, logs) if lg is None]
    out = []
    for i in range(1, len(u) - 1):
        trio = logs[i - 1:i + 2]
        if any(v is None for v in trio):
            continue
        d2 = trio[0] - 2.0 * trio[1] + trio[2]
        unc = math.sqrt(errs[i - 1] ** 2 + 4.0 * errs[i] ** 2 + errs[i + 1] ** 2)
        point = {"body": body.label, "u": u[i], "excluded": len(excluded)}
        out.append(BoundCheckResult("b_inequality", point, d2, 0.0,
                                    uncertainty=unc, tolerance=tolerance))
    return out


# ---------------------------------------------------------------------------
# main theorems


def theorem1_rhs(t: float, w: float, gamma_k: float) -> float:
    return t ** (math.log(2.0) / 8.0 * w * w) * gamma_k


def theorem2_rhs(s: float, w: float, gamma_k: float) -> float:
    return (2.0 * s) ** (0.25 * w * w) * gamma_k


def check_theorem1(body: Body, t_grid: Sequence[float], **engine) -> list[BoundCheckResult]:
    """gamma_n(tK) <= t^{(ln 2 / 8) w^2} gamma_n(K) for t in (0, 1/2], gamma_n(K) <= 1/2."""
    t_grid = _grid(t_grid, hi=0.5)
    base = _measure(body, **engine)
    _require_half(body, base)
    w = body.inradius()
    out = []
    for t in t_grid:
        m = _measure(body.dilate(t), **engine)
        rhs = theorem1_rhs(t, w, base.value)
        unc = math.hypot(m.std_error, rhs / base.value * base.std_error) if base.value else m.std_error
        out.append(BoundCheckResult("theorem1", {"body": body.label, "t": t, "w": w},
                                    m.value, rhs, uncertainty=unc, tolerance=_tol(m)))
    return out


def check_theorem2(body: Body, s_grid: Sequence[float], **engine) -> list[BoundCheckResult]:
    """gamma_n(sK) <= (2s)^{w^2/4} gamma_n(K) for s in (0, 1], gamma_n(K) <= 1/2."""
    s_grid = _grid(s_grid, name="s")
    base = _measure(body, **engine)
    _require_half(body, base)
    w = body.inradius()
    out = []
    for s in s_grid:
        m = _measure(body.dilate(s), **engine)
        rhs = theorem2_rhs(s, w, base.value)
        unc = math.hypot(m.std_error, rhs / base.value * base.std_error) if base.value else m.std_error
        out.append(BoundCheckResult("theorem2", {"body": body.label, "s": s, "w": w},
                                    m.value, rhs, uncertainty=unc, tolerance=_tol(m)))
    return out


def check_lemma2(body: Body, n: int | None = None, samples: int = 10**6,
                 seed: int = 0, alpha: float = 1.0 / 60.0) -> tuple[BoundCheckResult, BoundCheckResult]:
    """gamma_n(sqrt(n) K) >= alpha sigma(K) and gamma_n((sqrt(n) K)^c) >= alpha sigma(K^c)."""
    n = body.dim if n is None else int(n)
    if n != body.dim:
        raise DomainError(f"n={n} does not match body dimension {body.dim}")
    sig = spherical_measure_mc(body, samples, seed)
    g = _measure(body.dilate(math.sqrt(n)), samples=samples, seed=seed)
    point = {"body": body.label, "n": n, "sigma": sig.mean}
    inner = BoundCheckResult(
        "lemma2_inner", dict(point), alpha * sig.mean, g.value,
        uncertainty=math.hypot(alpha * sig.std_error, g.std_error), tolerance=_tol(g))
    outer = BoundCheckResult(
        "lemma2_outer", dict(point), alpha * (1.0 - sig.mean), 1.0 - g.value,
        uncertainty=math.hypot(alpha * sig.std_error, g.std_error), tolerance=_tol(g))
    return inner, outer


def theorem3_rhs(t: float, n: int, w: float) -> float:
    e = 0.25 * max(math.sqrt(n) * w - 6.0, 0.0) ** 2
    return (12.0 * t) ** e


def check_theorem3(body: Body, n: int | None = None, t_grid: Sequence[float] = (0.05,),
                   samples: int = 10**6, seed: int = 0,
                   threads: int | None = None) -> list[BoundCheckResult]:
    """sigma(tK) <= (12t)^{(1/4)(sqrt(n) w - 6)_+^2} for sigma(K) <= 1/2.

    The lhs is a sphere Monte Carlo estimate; a point passes when its upper
    99.7% confidence bound clears the rhs.
    """
    n = body.dim if n is None else int(n)
    if n != body.dim:
        raise DomainError(f"n={n} does not match body dimension {body.dim}")
    t_grid = _grid(t_grid)
    base = spherical_measure_mc(body, samples, seed, threads)
    if base.lower > 0.5:
        raise HypothesisError(f"{body.label}: sigma(K) = {base.mean:.6g} exceeds 1/2",
                              measured=base.mean)
    w = body.inradius()
    out = []
    for t in t_grid:
        est = spherical_measure_mc(body.dilate(t), samples, seed, threads)
        rhs = theorem3_rhs(t, n, w)
        point = {"body": body.label, "n": n, "t": t, "w": w, "sigma_K": base.mean,
                 "note": THEOREM3_NOTE}
        out.append(BoundCheckResult("theorem3", point, est.mean, rhs, uncertainty=est.std_error,
                                    tolerance=0.0, criterion="upper_ci"))
    return out


def probe_conjecture1(body: Body, t_grid: Sequence[float], **engine) -> list[ExponentProbe]:
    """Empirical exponent log_t(gamma(tK)/gamma(K)) / w^2 per grid point.

    Pure reporting; points with gamma(tK) = 0 or t = 1 are skipped.
    """
    t_grid = _grid(t_grid)
    base = _measure(body, **engine)
    _require_half(body, base)
    w = body.inradius()
    out = []
    for t in t_grid:
        if t >= 1.0:
            continue
        m = _measure(body.dilate(t), **engine)
        if m.value <= 0.0:
            continue
        kappa = math.log(m.value / base.value) / math.log(t) / (w * w)
        out.append(ExponentProbe(t, kappa, body.label))
    return out


def theorem2_kappa_floor(t: float) -> float:
    """Exponent floor implied by the (2s)^{w^2/4} bound: (1/4)(1 + ln 2 / ln t)."""
    return 0.25 * (1.0 + math.log(2.0) / math.log(t))
