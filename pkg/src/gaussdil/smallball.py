"""Small-ball probabilities and moment comparison for X = sum_i x_i g_i.

X takes values in (R^m, ||.||) with ||.|| one of l1, l2, linf. The model
stores the vectors x_1..x_n as the rows of an (n, m) array.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .bodies import NORMS, Body, NormBall, SlabPolytope, apply_norm, _sign_blocks, L1_ENUM_LIMIT
from .bounds import BoundCheckResult
from .errors import DomainError
from .measure import (MIN_SAMPLES, MonteCarloEstimate, chunk_rng, gaussian_draws, map_chunks,
                      mean_estimate, sphere_draws)

STREAM_MEDIAN = 10
STREAM_NORMS = 11
STREAM_PROBE = 12


@dataclass(frozen=True, eq=False)
class GaussianVectorModel:
    vectors: np.ndarray
    norm: str = "l2"

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors, dtype=float)).copy()
        if self.norm not in NORMS:
            raise DomainError(f"unknown norm {self.norm!r}; expected one of {NORMS}")
        if not np.any(v):
            raise DomainError("at least one vector must be nonzero")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def m(self) -> int:
        return self.vectors.shape[1]

    @cached_property
    def covariance(self) -> np.ndarray:
        return self.vectors.T @ self.vectors

    def scaled(self, c: float) -> "GaussianVectorModel":
        return GaussianVectorModel(self.vectors * c, self.norm)

    def to_dict(self) -> dict:
        return {"vectors": self.vectors.tolist(), "norm": self.norm}

    @classmethod
    def from_dict(cls, d) -> "GaussianVectorModel":
        if isinstance(d, str):
            d = json.loads(d)
        try:
            return cls(d["vectors"], d.get("norm", "l2"))
        except KeyError as exc:
            raise DomainError(f"model needs a 'vectors' field: {exc}") from exc

    @classmethod
    def iid(cls, m: int, norm: str) -> "GaussianVectorModel":
        """X with m independent standard coordinates."""
        return cls(np.eye(m), norm)


def _norm_samples(model, samples, seed, stream, threads=None):
    def run(rng, size):
        return apply_norm(gaussian_draws(rng, size, model.n) @ model.vectors, model.norm)

    return np.concatenate(map_chunks(run, samples, seed, stream, threads))


def median_norm(model: GaussianVectorModel, samples: int = 10**5, seed: int = 0,
                threads: int | None = None) -> float:
    """Empirical median of ||X||; even counts average the two central order statistics."""
    if samples < 10**4:
        raise DomainError(f"median needs at least 10^4 samples, got {samples}")
    return float(np.median(_norm_samples(model, samples, seed, STREAM_MEDIAN, threads)))


def weak_variance(model: GaussianVectorModel) -> float:
    """sup over the dual unit ball of sqrt(f^T C f)."""
    C = model.covariance
    if model.norm == "l2":
        return math.sqrt(max(float(np.linalg.eigvalsh(C)[-1]), 0.0))
    if model.norm == "linf":
        return math.sqrt(float(np.diag(C).max()))
    if model.m > L1_ENUM_LIMIT:
        raise DomainError(f"l1 weak variance enumerates 2^m vertices; m <= {L1_ENUM_LIMIT}, got {model.m}")
    best = 0.0
    for S in _sign_blocks(model.m):
        best = max(best, float(np.einsum("ij,jk,ik->i", S, C, S).max()))
    return math.sqrt(best)


def smallball_exponent(M: float, sigma: float) -> float:
    return M * M / (4.0 * sigma * sigma)


def theorem4_bound(t: float, M: float, sigma: float) -> float:
    return 0.5 * (2.0 * t) ** smallball_exponent(M, sigma)


@dataclass
class SmallBallReport:
    M: float
    sigma: float
    t_grid: list
    mc_probs: list
    bound: list
    results: list = field(default_factory=list)

    @property
    def exponent(self) -> float:
        return smallball_exponent(self.M, self.sigma)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def rows(self):
        return [
            {"t": t, "mc_prob": e.mean, "std_error": e.std_error, "bound": b, "pass": r.passed}
            for t, e, b, r in zip(self.t_grid, self.mc_probs, self.bound, self.results)
        ]


def check_theorem4(model: GaussianVectorModel, t_grid: Sequence[float], samples: int = 10**6,
                   seed: int = 0, threads: int | None = None) -> SmallBallReport:
    """P(||X|| <= tM) against (1/2)(2t)^{M^2 / 4 sigma^2}.

    M comes from its own sample stream, so the probabilities are not
    computed on the draws that defined the median.
    """
    t_grid = [float(t) for t in t_grid]
    if any(not 0.0 < t <= 1.0 for t in t_grid):
        raise DomainError("small-ball grid must lie in (0, 1]")
    M = median_norm(model, samples, seed, threads)
    sigma = weak_variance(model)
    norms = _norm_samples(model, samples, seed, STREAM_NORMS, threads)
    report = SmallBallReport(M, sigma, t_grid, [], [])
    for t in t_grid:
        hits = int(np.count_nonzero(norms <= t * M))
        est = mean_estimate([(hits, hits)], samples, seed)
        b = theorem4_bound(t, M, sigma)
        report.mc_probs.append(est)
        report.bound.append(b)
        report.results.append(BoundCheckResult(
            "theorem4", {"t": t, "M": M, "sigma": sigma, "norm": model.norm},
            est.mean, b, uncertainty=est.std_error, tolerance=0.0, criterion="upper_ci"))
    return report


def integrability_threshold(model, samples=10**5, seed=0, threads=None) -> float:
    """min(-1, -M^2 / 4 sigma^2): moments of order above this are finite."""
    M = median_norm(model, samples, seed, threads)
    return min(-1.0, -smallball_exponent(M, weak_variance(model)))


def _check_order(model, p, samples, seed, threads):
    if p > -1.0:
        return
    thr = integrability_threshold(model, max(samples, 10**4), seed, threads)
    if not p > thr:
        raise DomainError(f"moment of order {p} not covered: need p > {thr:.6g}")


def _moment_from_norms(norms, p, seed):
    n = norms.size
    if p == 0:
        vals = np.log(norms)
    else:
        vals = norms ** p
    est = mean_estimate([(float(vals.sum()), float((vals * vals).sum()))], n, seed)
    if p == 0:
        mom = math.exp(est.mean)
        se = mom * est.std_error
    else:
        mom = est.mean ** (1.0 / p)
        se = abs(mom / (p * est.mean)) * est.std_error
    return MonteCarloEstimate(mean=mom, std_error=se, samples=n, seed=int(seed))


def moment(model: GaussianVectorModel, p: float, samples: int = 10**6, seed: int = 0,
           threads: int | None = None) -> MonteCarloEstimate:
    """||X||_p = (E ||X||^p)^{1/p}, or exp(E ln ||X||) at p = 0.

    The standard error is carried to the moment scale by the delta method.
    No truncation is applied to negative powers.
    """
    p = float(p)
    if samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples")
    _check_order(model, p, samples, seed, threads)
    return _moment_from_norms(_norm_samples(model, samples, seed, STREAM_NORMS, threads), p, seed)


def check_corollary(model: GaussianVectorModel, p: float, q: float, samples: int = 10**6,
                    seed: int = 0, threads: int | None = None) -> BoundCheckResult:
    """Reports the realised constant ||X||_p / ||X||_q for p >= q.

    Passes when the ratio is finite and unchanged (to 1e-10) when the model
    is scaled by 2 under the same seed.
    """
    p, q = float(p), float(q)
    if p < q:
        raise DomainError(f"need p >= q, got p={p}, q={q}")
    _check_order(model, q, samples, seed, threads)
    norms = _norm_samples(model, samples, seed, STREAM_NORMS, threads)
    mp, mq = _moment_from_norms(norms, p, seed), _moment_from_norms(norms, q, seed)
    ratio = mp.mean / mq.mean
    norms2 = _norm_samples(model.scaled(2.0), samples, seed, STREAM_NORMS, threads)
    ratio2 = _moment_from_norms(norms2, p, seed).mean / _moment_from_norms(norms2, q, seed).mean
    drift = abs(ratio2 - ratio)
    unc = ratio * math.hypot(mp.std_error / mp.mean, mq.std_error / mq.mean)
    res = BoundCheckResult("corollary1",
                           {"p": p, "q": q, "norm_p": mp.mean, "norm_q": mq.mean,
                            "ratio": ratio, "scale_drift": drift},
                           ratio, ratio, uncertainty=unc)
    res.passed = math.isfinite(ratio) and drift <= 1e-10 * max(1.0, ratio)
    return res


@dataclass
class InducedBody:
    body: Body
    inradius_lower: float
    probe_points: int
    probe_ok: bool


def induced_body(model: GaussianVectorModel, M: float, probe_points: int = 10**4,
                 seed: int = 0) -> InducedBody:
    """K = {xi in R^n : ||sum_i xi_i x_i|| <= M} with the certificate w(K) >= M / sigma.

    The certificate is probed with points on the sphere of radius
    (M / sigma)(1 - 1e-6); by convexity that covers the whole ball.
    """
    if not M > 0:
        raise DomainError("M must be positive")
    A = model.vectors.T
    if model.norm == "linf":
        # coordinates that no x_i touches impose no constraint
        rows = A[np.any(A != 0, axis=1)]
        body = SlabPolytope(model.n, rows, np.full(rows.shape[0], float(M)))
    else:
        body = NormBall(A, model.norm, float(M))
    cert = M / weak_variance(model)
    rng = chunk_rng(seed, STREAM_PROBE, 0)
    pts = cert * (1.0 - 1e-6) * sphere_draws(rng, probe_points, model.n) if model.n > 1 else \
        cert * (1.0 - 1e-6) * np.array([[1.0], [-1.0]])
    ok = bool(np.all(body.contains(pts)))
    return InducedBody(body, cert, int(pts.shape[0]), ok)
