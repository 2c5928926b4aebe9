import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussdil import gauss1d
from gaussdil.bodies import NormBall, SlabPolytope
from gaussdil.errors import DomainError
from gaussdil.measure import gaussian_measure_mc
from gaussdil.smallball import (
    GaussianVectorModel, check_corollary, check_theorem4, induced_body, integrability_threshold,
    median_norm, moment, smallball_exponent, theorem4_bound, weak_variance,
)

Q_075 = 0.6744897501960817432
# median of max_j |g_j| over 20 iid coordinates: P(|g| <= M)^20 = 1/2
LINF20_MEDIAN = gauss1d.std_normal_quantile((1 + 2 ** (-1 / 20)) / 2)


def median_se(density, samples):
    return math.sqrt(0.25 / samples) / density


class TestModel:
    def test_covariance(self):
        v = np.array([[1.0, 2.0], [0.0, -1.0], [3.0, 0.5]])
        model = GaussianVectorModel(v, "l2")
        assert np.allclose(model.covariance, v.T @ v)
        assert (model.n, model.m) == (3, 2)

    def test_round_trip(self):
        model = GaussianVectorModel([[1.0, 0.5]], "l1")
        again = GaussianVectorModel.from_dict(model.to_dict())
        assert again.norm == "l1" and np.array_equal(again.vectors, model.vectors)
        assert GaussianVectorModel.from_dict('{"vectors": [[2.0]]}').norm == "l2"

    @pytest.mark.parametrize("args", [([[0.0, 0.0]], "l2"), ([[1.0]], "l4")])
    def test_rejects(self, args):
        with pytest.raises(DomainError):
            GaussianVectorModel(*args)

    def test_missing_vectors(self):
        with pytest.raises(DomainError):
            GaussianVectorModel.from_dict({"norm": "l2"})


class TestWeakVariance:
    @pytest.mark.parametrize("norm,expected", [("linf", 1.0), ("l2", 1.0), ("l1", math.sqrt(3))])
    def test_identity(self, norm, expected):
        assert weak_variance(GaussianVectorModel.iid(3, norm)) == pytest.approx(expected, abs=1e-15)

    def test_l1_matches_brute_force(self):
        rng = np.random.default_rng(0)
        model = GaussianVectorModel(rng.standard_normal((4, 5)), "l1")
        C = model.covariance
        signs = np.array(np.meshgrid(*[[-1, 1]] * 5)).reshape(5, -1).T
        brute = max(math.sqrt(s @ C @ s) for s in signs)
        assert weak_variance(model) == pytest.approx(brute, rel=1e-14)

    def test_l1_limit(self):
        with pytest.raises(DomainError):
            weak_variance(GaussianVectorModel(np.ones((1, 21)), "l1"))

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from(["l1", "l2", "linf"]), st.integers(-6, 6))
    def test_homogeneity(self, norm, k):
        model = GaussianVectorModel(np.random.default_rng(1).standard_normal((3, 4)), norm)
        c = 2.0 ** k
        assert weak_variance(model.scaled(c)) == c * weak_variance(model)
        assert weak_variance(model.scaled(0.3)) == pytest.approx(0.3 * weak_variance(model), rel=1e-14)


class TestMedian:
    def test_one_dimensional(self):
        model = GaussianVectorModel([[1.0]], "l2")
        n = 10**5
        se = median_se(2 * gauss1d.std_normal_pdf(Q_075), n)
        assert abs(median_norm(model, n, seed=1) - Q_075) <= 3 * se

    def test_linf_twenty(self):
        model = GaussianVectorModel.iid(20, "linf")
        n = 10**5
        # density of max |g_j| at its median: 20 F^19 f with F^20 = 1/2
        F = 2 ** (-1 / 20)
        dens = 20 * F ** 19 * 2 * gauss1d.std_normal_pdf(LINF20_MEDIAN)
        assert abs(median_norm(model, n, seed=2) - LINF20_MEDIAN) <= 3 * median_se(dens, n)

    def test_homogeneity(self):
        model = GaussianVectorModel(np.random.default_rng(3).standard_normal((4, 3)), "l1")
        assert median_norm(model.scaled(2.5), 20_000, seed=4) == pytest.approx(
            2.5 * median_norm(model, 20_000, seed=4), rel=1e-14)

    def test_deterministic(self):
        model = GaussianVectorModel.iid(5, "l2")
        assert median_norm(model, 10**4, seed=9) == median_norm(model, 10**4, seed=9)

    def test_sample_floor(self):
        with pytest.raises(DomainError):
            median_norm(GaussianVectorModel.iid(2, "l2"), 9_999)


class TestTheorem4:
    def test_bound_formula(self):
        assert theorem4_bound(1.0, 2.0, 1.0) == pytest.approx(1.0)
        assert theorem4_bound(0.5, 3.0, 1.5) == 0.5
        assert smallball_exponent(Q_075, 1.0) == pytest.approx(0.11373410, abs=1e-8)

    def test_one_dimensional_closed_form(self):
        # P(|g| <= tM) = 2 Phi(tM) - 1 versus the bound with the exact median
        for t in np.linspace(0.01, 1.0, 100):
            assert gauss1d.gaussian_interval(t * Q_075) <= theorem4_bound(t, Q_075, 1.0) + 1e-15

    def test_one_dimensional_mc(self):
        rep = check_theorem4(GaussianVectorModel([[1.0]], "l2"), [0.1, 0.5, 1.0], samples=10**5, seed=1)
        assert rep.passed
        assert rep.sigma == 1.0
        assert abs(rep.mc_probs[-1].mean - 0.5) <= 0.01
        assert rep.bound[-1] >= 0.5

    def test_linf_twenty(self):
        rep = check_theorem4(GaussianVectorModel.iid(20, "linf"), [0.1 * k for k in range(1, 11)],
                             samples=2 * 10**5, seed=2)
        assert rep.passed
        assert rep.exponent == pytest.approx(LINF20_MEDIAN ** 2 / 4, abs=0.01)
        assert all(0 <= b <= 2 ** (rep.exponent - 1) + 1e-15 for b in rep.bound)
        rows = rep.rows()
        assert list(rows[0]) == ["t", "mc_prob", "std_error", "bound", "pass"]

    def test_grid_domain(self):
        with pytest.raises(DomainError):
            check_theorem4(GaussianVectorModel.iid(2, "l2"), [0.0, 0.5], samples=10**4)


class TestMoments:
    MODEL = GaussianVectorModel(np.random.default_rng(5).standard_normal((6, 4)), "l2")

    def test_second_moment_trace(self):
        est = moment(self.MODEL, 2.0, samples=4 * 10**5, seed=1)
        assert abs(est.mean - math.sqrt(np.trace(self.MODEL.covariance))) <= 4 * est.std_error

    def test_log_moment_homogeneous(self):
        a = moment(self.MODEL, 0.0, samples=10**5, seed=2)
        b = moment(self.MODEL.scaled(3.0), 0.0, samples=10**5, seed=2)
        assert b.mean == pytest.approx(3.0 * a.mean, rel=1e-12)

    def test_negative_moment_stable_across_seeds(self):
        model = GaussianVectorModel.iid(20, "linf")
        a = moment(model, -0.5, samples=2 * 10**5, seed=10)
        b = moment(model, -0.5, samples=2 * 10**5, seed=11)
        assert math.isfinite(a.mean)
        assert abs(a.mean - b.mean) <= 4 * math.hypot(a.std_error, b.std_error)

    def test_power_mean_monotone(self):
        ps = [-0.5, 0.0, 0.5, 1.0, 2.0]
        ests = [moment(self.MODEL, p, samples=2 * 10**5, seed=3) for p in ps]
        for lo, hi in zip(ests, ests[1:]):
            assert hi.mean >= lo.mean - 4 * math.hypot(lo.std_error, hi.std_error)

    def test_integrability_guard(self):
        model = GaussianVectorModel([[1.0]], "l2")
        thr = integrability_threshold(model, 10**5, seed=0)
        assert thr == -1.0
        with pytest.raises(DomainError, match="need p >"):
            moment(model, -1.0, samples=10**4)
        # with many coordinates the exponent exceeds 1 and opens up p <= -1
        wide = GaussianVectorModel.iid(200, "l2")
        assert integrability_threshold(wide, 10**4) < -40
        assert math.isfinite(moment(wide, -3.0, samples=10**4).mean)


class TestCorollary:
    def test_equal_orders(self):
        r = check_corollary(GaussianVectorModel.iid(3, "l1"), 0.7, 0.7, samples=10**4)
        assert r.lhs == pytest.approx(1.0, abs=1e-15) and r.passed

    def test_jensen(self):
        r = check_corollary(GaussianVectorModel.iid(5, "l2"), 1.0, 0.0, samples=10**5, seed=1)
        assert r.lhs >= 1.0 and r.passed
        assert r.grid_point["scale_drift"] <= 1e-10

    def test_linf_negative_order(self):
        model = GaussianVectorModel.iid(20, "linf")
        a = check_corollary(model, 1.0, -0.25, samples=2 * 10**5, seed=5)
        b = check_corollary(model, 1.0, -0.25, samples=2 * 10**5, seed=6)
        assert a.passed and b.passed
        assert abs(a.lhs - b.lhs) <= 4 * math.hypot(a.uncertainty, b.uncertainty)

    def test_order_validation(self):
        with pytest.raises(DomainError):
            check_corollary(GaussianVectorModel.iid(2, "l2"), 0.0, 1.0, samples=10**4)


class TestInducedBody:
    def test_interval(self):
        ib = induced_body(GaussianVectorModel([[1.0]], "l2"), 0.8)
        assert ib.inradius_lower == 0.8 and ib.probe_ok
        assert ib.body.contains([0.79]) and not ib.body.contains([0.81])

    def test_linf_is_slab_polytope(self):
        v = np.random.default_rng(7).standard_normal((5, 3))
        model = GaussianVectorModel(v, "linf")
        ib = induced_body(model, 1.3)
        assert isinstance(ib.body, SlabPolytope)
        assert ib.body.inradius() == pytest.approx(min(1.3 / np.linalg.norm(v[:, j]) for j in range(3)))
        assert ib.body.inradius() >= ib.inradius_lower - 1e-15
        assert ib.probe_ok

    @pytest.mark.parametrize("norm", ["l1", "l2"])
    def test_norm_ball_certificate(self, norm):
        model = GaussianVectorModel(np.random.default_rng(8).standard_normal((6, 4)), norm)
        ib = induced_body(model, 2.0)
        assert isinstance(ib.body, NormBall) and ib.probe_ok and ib.probe_points == 10**4
        assert ib.body.inradius() >= ib.inradius_lower * (1 - 1e-12)

    def test_median_gives_half(self):
        model = GaussianVectorModel(np.random.default_rng(9).standard_normal((5, 4)), "linf")
        M = median_norm(model, 10**5, seed=1)
        est = gaussian_measure_mc(induced_body(model, M).body, 10**5, seed=2)
        assert abs(est.mean - 0.5) <= 4 * est.std_error + 4 * 0.5 / math.sqrt(10**5)

    def test_unused_coordinate_ignored(self):
        model = GaussianVectorModel([[1.0, 0.0], [0.5, 0.0]], "linf")
        assert induced_body(model, 1.0).probe_ok

    def test_rejects_bad_radius(self):
        with pytest.raises(DomainError):
            induced_body(GaussianVectorModel.iid(2, "l2"), 0.0)
