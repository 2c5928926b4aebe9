"""Symmetric convex bodies: membership, inradius and homothetic dilation.

All bodies are open sets (strict inequalities); boundaries have measure
zero for every measure used here.

Variants
--------
Ball(n, r)             |xi| < r
Slab(n, w)             |xi_n| < w
Cylinder(k, l, w)      xi_1^2 + ... + xi_k^2 < w^2 in R^(k+l)
FlyingSaucer(n, w, x)  f(|(xi_1..xi_{n-1})|) > |xi_n|, f the saucer profile
SlabPolytope(n, ...)   |<xi, v_i>| < c_i for unit directions v_i
NormBall(A, norm, M)   ||A xi|| < M, norm in {l1, l2, linf}
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from .errors import DomainError, ShapeError

NORMS = ("l1", "l2", "linf")
L1_ENUM_LIMIT = 20


def _check_dim(n, name="n", minimum=1):
    if int(n) != n or n < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {n!r}")


def _check_pos(v, name):
    if not (math.isfinite(v) and v > 0):
        raise DomainError(f"{name} must be positive and finite, got {v!r}")


# ---------------------------------------------------------------------------
# flying-saucer profile algebra


@dataclass(frozen=True)
class SaucerGeometry:
    """Flat top of half-height w over radius x; slant tangent to the w-ball at s, vanishing at y."""

    w: float
    x: float
    y: float
    s: float

    def profile(self, r):
        return saucer_profile(self.w, self.x, r)

    def level_radius(self, h: float) -> float:
        return saucer_level_radius(self, h)


def _check_saucer(w, x):
    _check_pos(w, "w")
    if not 0.0 < x < w:
        raise DomainError(f"saucer needs 0 < x < w, got x={x!r}, w={w!r}")


def saucer_geometry(w: float, x: float) -> SaucerGeometry:
    w, x = float(w), float(x)
    _check_saucer(w, x)
    y = 0.5 * x + 0.5 * w * w / x
    s = 2.0 * w * w * x / (w * w + x * x)
    return SaucerGeometry(w=w, x=x, y=y, s=s)


def _profile(w, x, y, r):
    r = np.asarray(r, dtype=float)
    slant = (y - r) * w / (y - x)
    val = np.where(r <= x, w, np.where(r >= y, 0.0, slant))
    return float(val) if val.ndim == 0 else val


def saucer_profile(w: float, x: float, r):
    """f(r): w on [0, x], linear down to 0 at y(x), zero beyond."""
    w, x = float(w), float(x)
    _check_saucer(w, x)
    if np.any(np.asarray(r) < 0):
        raise DomainError("saucer profile is defined for r >= 0")
    y = 0.5 * x + 0.5 * w * w / x
    return _profile(w, x, y, r)


def saucer_level_radius(geom: SaucerGeometry, h: float) -> float:
    """The radius r in (x, y) with f(r) = h."""
    w, x = geom.w, geom.x
    if not 0.0 < h < w:
        raise DomainError(f"level must lie in (0, w={w}), got {h!r}")
    return x + 0.5 * (w / x - x / w) * (w - h)


# ---------------------------------------------------------------------------
# bodies


class Body:
    """Common interface. Subclasses are frozen dataclasses."""

    variant: ClassVar[str] = ""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def _contains(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, point):
        pts = np.asarray(point, dtype=float)
        if pts.ndim == 0 or pts.shape[-1] != self.dim:
            raise ShapeError(
                f"{self.variant} lives in R^{self.dim}, got point of shape {pts.shape}")
        single = pts.ndim == 1
        res = self._contains(pts.reshape(-1, self.dim))
        return bool(res[0]) if single else res.reshape(pts.shape[:-1])

    def inradius(self) -> float:
        raise NotImplementedError

    def dilate(self, t: float) -> "Body":
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    @property
    def label(self) -> str:
        d = self.to_dict()
        d.pop("variant")
        parts = []
        for k, v in d.items():
            if isinstance(v, float):
                parts.append(f"{k}={v:.6g}")
            elif isinstance(v, (int, str)):
                parts.append(f"{k}={v}")
        return f"{self.variant}({','.join(parts)})"


@dataclass(frozen=True)
class Ball(Body):
    n: int
    r: float
    variant: ClassVar[str] = "Ball"

    def __post_init__(self):
        _check_dim(self.n)
        _check_pos(self.r, "r")

    @property
    def dim(self):
        return self.n

    def _contains(self, pts):
        return np.einsum("ij,ij->i", pts, pts) < self.r * self.r

    def inradius(self):
        return self.r

    def dilate(self, t):
        _check_pos(t, "t")
        return Ball(self.n, self.r * t)

    def to_dict(self):
        return {"variant": self.variant, "n": self.n, "r": self.r}


@dataclass(frozen=True)
class Slab(Body):
    n: int
    w: float
    variant: ClassVar[str] = "Slab"

    def __post_init__(self):
        _check_dim(self.n)
        _check_pos(self.w, "w")

    @property
    def dim(self):
        return self.n

    def _contains(self, pts):
        return np.abs(pts[:, -1]) < self.w

    def inradius(self):
        return self.w

    def dilate(self, t):
        _check_pos(t, "t")
        return Slab(self.n, self.w * t)

    def to_dict(self):
        return {"variant": self.variant, "n": self.n, "w": self.w}


@dataclass(frozen=True)
class Cylinder(Body):
    """B(0, w) in the first k coordinates times R^l. Only k and w affect measures."""

    k: int
    l: int
    w: float
    variant: ClassVar[str] = "Cylinder"

    def __post_init__(self):
        _check_dim(self.k, "k")
        _check_dim(self.l, "l", minimum=0)
        _check_pos(self.w, "w")

    @property
    def dim(self):
        return self.k + self.l

    def _contains(self, pts):
        head = pts[:, : self.k]
        return np.einsum("ij,ij->i", head, head) < self.w * self.w

    def inradius(self):
        return self.w

    def dilate(self, t):
        _check_pos(t, "t")
        return Cylinder(self.k, self.l, self.w * t)

    def to_dict(self):
        return {"variant": self.variant, "k": self.k, "l": self.l, "w": self.w}


@dataclass(frozen=True)
class FlyingSaucer(Body):
    n: int
    w: float
    x: float
    variant: ClassVar[str] = "FlyingSaucer"

    def __post_init__(self):
        _check_dim(self.n, minimum=2)
        _check_saucer(self.w, self.x)

    @property
    def dim(self):
        return self.n

    @property
    def geometry(self) -> SaucerGeometry:
        return saucer_geometry(self.w, self.x)

    def _contains(self, pts):
        g = self.geometry
        head = pts[:, :-1]
        r = np.sqrt(np.einsum("ij,ij->i", head, head))
        return np.atleast_1d(_profile(g.w, g.x, g.y, r)) > np.abs(pts[:, -1])

    def inradius(self):
        return self.w

    def dilate(self, t):
        _check_pos(t, "t")
        return FlyingSaucer(self.n, self.w * t, self.x * t)

    def to_dict(self):
        return {"variant": self.variant, "n": self.n, "w": self.w, "x": self.x}


@dataclass(frozen=True, eq=False)
class SlabPolytope(Body):
    """Intersection of symmetric slabs |<xi, v_i>| < c_i.

    Directions are normalised on construction and the half-widths rescaled
    so that each constraint describes the same slab against a unit normal.
    """

    n: int
    directions: np.ndarray
    halfwidths: np.ndarray
    variant: ClassVar[str] = "SlabPolytope"

    def __post_init__(self):
        _check_dim(self.n)
        v = np.atleast_2d(np.asarray(self.directions, dtype=float))
        c = np.atleast_1d(np.asarray(self.halfwidths, dtype=float))
        if v.shape[1] != self.n or v.shape[0] != c.shape[0]:
            raise ShapeError(
                f"need {c.shape[0]} directions in R^{self.n}, got array {v.shape}")
        norms = np.linalg.norm(v, axis=1)
        if np.any(norms == 0) or np.any(~(c > 0)):
            raise DomainError("directions must be nonzero and half-widths positive")
        v = v / norms[:, None]
        c = c / norms
        v.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "directions", v)
        object.__setattr__(self, "halfwidths", c)

    @classmethod
    def from_constraints(cls, n, constraints):
        """Build from an iterable of (direction, halfwidth) pairs."""
        constraints = list(constraints)
        return cls(n, [d for d, _ in constraints], [c for _, c in constraints])

    @property
    def dim(self):
        return self.n

    def _contains(self, pts):
        proj = np.abs(pts @ self.directions.T)
        return np.all(proj < self.halfwidths, axis=1)

    def inradius(self):
        return float(self.halfwidths.min())

    def dilate(self, t):
        _check_pos(t, "t")
        return SlabPolytope(self.n, self.directions, self.halfwidths * t)

    def to_dict(self):
        return {
            "variant": self.variant,
            "n": self.n,
            "constraints": [
                {"direction": d.tolist(), "halfwidth": float(c)}
                for d, c in zip(self.directions, self.halfwidths)
            ],
        }


def operator_norm(A: np.ndarray, norm: str) -> float:
    """sup over unit Euclidean xi of ||A xi||."""
    A = np.asarray(A, dtype=float)
    if norm == "l2":
        return float(np.linalg.norm(A, 2))
    if norm == "linf":
        return float(np.sqrt(np.einsum("ij,ij->i", A, A)).max())
    if norm == "l1":
        # sup_xi ||A xi||_1 = max over sign vectors s of |A^T s|
        m = A.shape[0]
        if m > L1_ENUM_LIMIT:
            raise DomainError(f"l1 enumeration supports m <= {L1_ENUM_LIMIT}, got {m}")
        best = 0.0
        for signs in _sign_blocks(m):
            best = max(best, float(np.sqrt(((signs @ A) ** 2).sum(axis=1)).max()))
        return best
    raise DomainError(f"unknown norm {norm!r}; expected one of {NORMS}")


def _sign_blocks(m, block=1 << 14):
    """All sign vectors in {-1,1}^m with first entry +1, in blocks."""
    if m == 1:
        yield np.ones((1, 1))
        return
    total = 1 << (m - 1)
    bits = np.arange(m - 1)
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total))
        rest = 1.0 - 2.0 * ((idx[:, None] >> bits) & 1)
        yield np.hstack([np.ones((idx.size, 1)), rest])


def apply_norm(v: np.ndarray, norm: str) -> np.ndarray:
    """Row-wise norm of an (N, m) array."""
    if norm == "l2":
        return np.sqrt(np.einsum("ij,ij->i", v, v))
    if norm == "linf":
        return np.abs(v).max(axis=1)
    if norm == "l1":
        return np.abs(v).sum(axis=1)
    raise DomainError(f"unknown norm {norm!r}; expected one of {NORMS}")


@dataclass(frozen=True, eq=False)
class NormBall(Body):
    """{xi in R^n : ||A xi|| < M} for an m-by-n matrix A."""

    matrix: np.ndarray
    norm: str
    M: float
    variant: ClassVar[str] = "NormBall"

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.matrix, dtype=float)).copy()
        if self.norm not in NORMS:
            raise DomainError(f"unknown norm {self.norm!r}; expected one of {NORMS}")
        _check_pos(self.M, "M")
        if not np.any(A):
            raise DomainError("matrix must have a nonzero entry")
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @property
    def dim(self):
        return self.matrix.shape[1]

    def _contains(self, pts):
        return apply_norm(pts @ self.matrix.T, self.norm) < self.M

    def inradius(self):
        return self.M / operator_norm(self.matrix, self.norm)

    def dilate(self, t):
        _check_pos(t, "t")
        return NormBall(self.matrix, self.norm, self.M * t)

    def to_dict(self):
        return {"variant": self.variant, "matrix": self.matrix.tolist(),
                "norm": self.norm, "M": self.M}


VARIANTS = {cls.variant: cls for cls in (Ball, Slab, Cylinder, FlyingSaucer, SlabPolytope, NormBall)}


def contains(body: Body, point):
    return body.contains(point)


def inradius(body: Body) -> float:
    return body.inradius()


def dilate(body: Body, t: float) -> Body:
    return body.dilate(t)


def body_from_config(config) -> Body:
    """Parse a body from a dict or a JSON string with a "variant" key."""
    if isinstance(config, str):
        config = json.loads(config)
    cfg = dict(config)
    name = cfg.pop("variant", None)
    if name not in VARIANTS:
        raise DomainError(f"unknown body variant {name!r}; expected one of {sorted(VARIANTS)}")
    try:
        if name == "SlabPolytope":
            if "constraints" in cfg:
                pairs = [(c["direction"], c["halfwidth"]) for c in cfg["constraints"]]
                return SlabPolytope.from_constraints(int(cfg["n"]), pairs)
            return SlabPolytope(int(cfg["n"]), cfg["directions"], cfg["halfwidths"])
        if name == "NormBall":
            return NormBall(cfg["matrix"], cfg["norm"], float(cfg["M"]))
        ints = {"n", "k", "l"}
        kwargs = {k: (int(v) if k in ints else float(v)) for k, v in cfg.items()}
        return VARIANTS[name](**kwargs)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad parameters for {name}: {exc}") from exc
