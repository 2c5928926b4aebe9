import math

import mpmath as mp
import pytest

from gaussdil import gauss1d
from gaussdil.bodies import Ball, Cylinder, FlyingSaucer, Slab
from gaussdil.bounds import interval_level


def quad_cdf(x, dps=30):
    """Phi(x) by high-precision quadrature of the density."""
    with mp.workdps(dps):
        phi = lambda s: mp.exp(-s * s / 2) / mp.sqrt(2 * mp.pi)
        if x >= 0:
            return float(mp.mpf(1) / 2 + mp.quad(phi, [0, x]))
        return float(mp.quad(phi, [-mp.inf, x]))


def quad_tail(u, dps=30, log=False):
    """1 - Phi(u) by quadrature after the shift s = u + v (keeps the peak at v = 0)."""
    with mp.workdps(dps):
        u = mp.mpf(u)
        scale = 1 / max(u, 1)
        inner = mp.quad(lambda v: mp.exp(-u * v - v * v / 2), [0, scale, 10 * scale, 40 * scale, mp.inf])
        logval = -u * u / 2 - mp.log(mp.sqrt(2 * mp.pi)) + mp.log(inner)
        return float(logval) if log else float(mp.exp(logval))


def ball_radius(n, p):
    return math.sqrt(gauss1d.find_root(lambda x: gauss1d.chi_square_cdf(n, x) - p, 0.0, 10.0 * n + 50, tol=1e-14))


def theorem_bodies(n):
    """Bodies with Gaussian measure at most 1/2 in R^n."""
    out = []
    for p in (0.05, 0.25, 0.5):
        out.append(Ball(n, ball_radius(n, p)))
        out.append(Slab(n, interval_level(p)))
        k = max(1, n // 2)
        out.append(Cylinder(k, n - k, ball_radius(k, p)))
    w = interval_level(0.5)
    for frac in (0.25, 0.75):
        out.append(FlyingSaucer(n, w, frac * w))
    out.append(FlyingSaucer(n, interval_level(0.2), 0.5 * interval_level(0.2)))
    return out


@pytest.fixture
def cdf_oracle():
    return quad_cdf


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
