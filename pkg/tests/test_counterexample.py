import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussdil import gauss1d
from gaussdil.bodies import saucer_geometry, saucer_level_radius
from gaussdil.counterexample import (
    SaucerFit, asymptotic_excess, ball_prediction, boundary_gap, chain_sweep, check_lemma4,
    conjecture_chain_check, default_levels, derivative_refutation, disc_measure, fit_saucer,
    fit_sweep, gap_threshold, level_radii, limit_interval_measure, pair_w_for_a, saucer_limits,
)
from gaussdil.errors import DomainError, InfeasibleError
from gaussdil.measure import saucer_quadrature

# 40-digit mpmath values
W_AT_1 = 1.5151729039613388
W_AT_3 = 3.4393543117714414
HAZARD_AT_1 = 1.5251352761609812
HAZARD_AT_3 = 3.2830986549304365
A_STAR = 1.0499546709557761


class TestPairing:
    def test_values(self):
        assert pair_w_for_a(1.0) == pytest.approx(W_AT_1, abs=1e-12)
        assert pair_w_for_a(3.0) == pytest.approx(W_AT_3, abs=1e-12)

    def test_measures_match(self):
        for a in np.linspace(0.5, 10, 96):
            w = pair_w_for_a(a)
            assert abs(disc_measure(w) - gauss1d.gaussian_interval(a)) <= 1e-12

    def test_large_a(self):
        w = pair_w_for_a(40.0)
        assert math.isfinite(w) and w > 40.0

    def test_asymptotic_excess_shrinks(self):
        ex = [asymptotic_excess(a) for a in (10.0, 20.0, 40.0)]
        assert ex[0] > ex[1] > ex[2] > 0

    @pytest.mark.parametrize("a", [0.0, -1.0])
    def test_domain(self, a):
        with pytest.raises(DomainError):
            pair_w_for_a(a)


class TestGap:
    def test_signs(self):
        g1, g3 = boundary_gap(1.0), boundary_gap(3.0)
        assert g1.gap < 0 and g3.gap > 0
        assert g1.hazard == pytest.approx(HAZARD_AT_1, abs=1e-12)
        assert g3.hazard == pytest.approx(HAZARD_AT_3, abs=1e-12)

    def test_threshold(self):
        a = gap_threshold()
        assert 1.0 < a < 2.0
        assert abs(a - A_STAR) <= 1e-6

    def test_sign_equivalence(self):
        for a in np.linspace(0.5, 10, 191):
            g = boundary_gap(a)
            assert (g.gap > 0) == (g.w > g.hazard)
            # gap = 2 phi(a) (w - hazard) * tail/phi ... as an identity in the paired variables
            identity = 2 * gauss1d.gaussian_tail(a) * (g.w - g.hazard)
            assert abs(g.gap - identity) <= 1e-10

    def test_positive_for_large_a(self):
        assert all(boundary_gap(a).gap > 0 for a in np.linspace(2.5, 10, 76))


class TestLemma4:
    N = [10, 100, 500, 2000]

    def test_wide_radius_full_measure(self):
        rep = check_lemma4(lambda n: 1.1 * math.sqrt(n), self.N)
        assert rep.final_measure >= 0.999 and rep.converse_ok and rep.direct_ok

    def test_narrow_radius_vanishing_measure(self):
        rep = check_lemma4(lambda n: 0.9 * math.sqrt(n), self.N)
        assert rep.final_measure <= 0.001 and rep.direct_ok

    def test_boundary_case(self):
        rep = check_lemma4(math.sqrt, self.N)
        assert rep.final_ratio == 1.0
        assert abs(rep.final_measure - 0.5) < 0.01
        assert rep.direct_ok and rep.converse_ok
        assert [r["n"] for r in rep.rows()] == self.N

    def test_detects_broken_sequence(self):
        # a radius growing like 0.5 sqrt(n) with measure forced to stay large cannot exist;
        # feed a fake report and make sure the flag notices
        rep = check_lemma4(lambda n: 0.5 * math.sqrt(n), self.N)
        rep.measures[-1] = 0.3
        assert not rep.direct_ok

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            check_lemma4(math.sqrt, [10, 5])


class TestFit:
    W = pair_w_for_a(3.0)
    TARGET = disc_measure(W)

    def test_fit_residual(self):
        fit = fit_saucer(20, self.W, self.TARGET)
        assert abs(fit.residual) <= 1e-9
        assert abs(saucer_quadrature(20, self.W, fit.x, 1e-12) - self.TARGET) <= 1e-9
        assert 0 < fit.x < self.W

    def test_infeasible_small_n(self):
        with pytest.raises(InfeasibleError) as info:
            fit_saucer(2, self.W, self.TARGET)
        d = info.value.diagnostics
        assert d["cap"] >= d["target"] or d["slab"] <= d["target"]

    def test_limits(self):
        slab, cap = saucer_limits(5, 1.0)
        assert slab == gauss1d.gaussian_interval(1.0)
        assert cap == pytest.approx(gauss1d.chi_square_cdf(4, 1.0) * slab)

    def test_trends(self):
        fits, infeasible = fit_sweep(3.0, [3, 5, 10, 20, 50, 100, 200])
        assert infeasible == []
        xs = [f.x for f in fits]
        ys = [f.geometry.y for f in fits]
        assert all(b < a for a, b in zip(xs, xs[1:]))
        assert all(b > a for a, b in zip(ys, ys[1:]))

    @pytest.mark.parametrize("n", [3, 10, 50, 500])
    def test_single_crossing(self, n):
        # gamma_n(K_n(x)) dips below the cap before x reaches w, so it is not monotone,
        # but it crosses the target once, which is all the bisection needs
        xs = np.linspace(0.001, 0.999, 400) * self.W
        resid = np.array([saucer_quadrature(n, self.W, x) for x in xs]) - self.TARGET
        assert int(np.sum(np.diff(np.sign(resid)) != 0)) == 1

    def test_dimension_cap(self):
        with pytest.raises(DomainError):
            fit_saucer(10_001, self.W, self.TARGET)
        with pytest.raises(DomainError):
            fit_saucer(1, self.W, self.TARGET)


class TestLevelRadii:
    def fit(self, w, x):
        return SaucerFit(n=5, w=w, target=0.5, x=x, residual=0.0, geometry=saucer_geometry(w, x))

    def test_example(self):
        lr = level_radii(self.fit(1.0, 0.5), 0.8, 0.6, 0.4)
        assert (lr.u, lr.v, lr.z) == pytest.approx((0.65, 0.8, 0.95), abs=1e-15)

    def test_top_of_slant(self):
        lr = level_radii(self.fit(1.0, 0.5), 1 - 1e-12, 0.5, 0.2)
        assert lr.u == pytest.approx(0.5, abs=1e-10)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.5, 5.0), st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(0.05, 0.95),
           st.floats(0.05, 0.95))
    def test_inversion(self, w, fx, fb, fc, fd):
        b = fb * w
        c = fc * b
        d = fd * c
        g = saucer_geometry(w, fx * w)
        lr = level_radii(self.fit(w, fx * w), b, c, d)
        assert g.x < lr.u < lr.v < lr.z < g.y
        for r, h in ((lr.u, b), (lr.v, c), (lr.z, d)):
            assert abs(saucer_level_radius(g, h) - r) <= 1e-10

    def test_ordering(self):
        with pytest.raises(DomainError):
            level_radii(self.fit(1.0, 0.5), 0.6, 0.8, 0.4)

    def test_ratio_limit(self):
        w = pair_w_for_a(3.0)
        b, c, _ = default_levels(3.0, w, 0.99)
        fit = fit_saucer(2000, w, disc_measure(w))
        lr = level_radii(fit, b, c, 0.5)
        assert abs(lr.v / lr.u - (w - c) / (w - b)) <= 1e-2


class TestRefutation:
    def test_slopes(self):
        ref = derivative_refutation(3.0)
        gp = boundary_gap(3.0)
        assert ref.derivative_contradiction
        assert ref.d_left - ref.d_right == pytest.approx(ref.w * gp.gap, rel=1e-12)

    def test_equality_at_one(self):
        ref = derivative_refutation(3.0, [1.0])
        assert abs(ref.lhs[0] - ref.rhs[0]) <= 1e-12
        assert abs(ref.rhs[0] - gauss1d.gaussian_interval(3.0)) <= 1e-15

    def test_fails_near_one(self):
        ref = derivative_refutation(3.0, [0.99])
        assert ref.lhs[0] - ref.rhs[0] < 0
        assert ref.failing_t == [0.99]

    def test_slope_matches_finite_difference(self):
        ref = derivative_refutation(3.0)
        h = 1e-6
        dl = (ball_prediction(1.0, ref.w) - ball_prediction(1 - h, ref.w)) / h
        dr = (limit_interval_measure(1.0, 3.0, ref.w) - limit_interval_measure(1 - h, 3.0, ref.w)) / h
        assert dl == pytest.approx(ref.d_left, rel=1e-4)
        assert dr == pytest.approx(ref.d_right, rel=1e-4)

    def test_rejects_negative_gap(self):
        with pytest.raises(DomainError):
            derivative_refutation(1.0)

    def test_empty_interval(self):
        assert limit_interval_measure(0.01, 3.0, 3.44) == 0.0


class TestChain:
    def test_single_link(self):
        link = conjecture_chain_check(50, 3.0, 0.99)
        assert link.inclusion_margin >= -1e-9
        assert link.u < link.v < link.z
        row = link.row()
        assert row["n"] == 50 and isinstance(row["violation"], bool)

    def test_condition_on_t(self):
        w = pair_w_for_a(3.0)
        with pytest.raises(DomainError):
            conjecture_chain_check(20, 3.0, 0.5, b=2.9, c=2.8, d=2.7)
        with pytest.raises(DomainError):
            default_levels(3.0, w, 0.1)

    def test_sweep(self):
        sw = chain_sweep(3.0, 0.99, (2, 3, 10, 100))
        assert sw.infeasible == [2]
        assert sw.conclusive and sw.first_violation == 3
        assert all(l.inclusion_margin >= -1e-9 for l in sw.links)
        assert sw.links[-1].tz_ge_v
