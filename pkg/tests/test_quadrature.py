import math

import numpy as np
import pytest

from gaussdil._quadrature import integrate, kronrod_rule
from gaussdil.errors import QuadratureError

# published G7-K15 and G10-K21 outermost Kronrod nodes
K15_OUTER = 0.991455371120812639206854697526329
K21_OUTER = 0.995657163025808080735527280689003


class TestRule:
    def test_known_nodes(self):
        assert kronrod_rule(7)[0][-1] == pytest.approx(K15_OUTER, abs=1e-14)
        assert kronrod_rule(10)[0][-1] == pytest.approx(K21_OUTER, abs=1e-14)

    @pytest.mark.parametrize("n", [5, 7, 10])
    def test_exact_degrees(self, n):
        nodes, kw, gw = kronrod_rule(n)
        assert nodes.size == 2 * n + 1
        # Kronrod rule is exact through degree 3n+1, Gauss through 2n-1
        for d in range(3 * n + 2):
            exact = 0.0 if d % 2 else 2.0 / (d + 1)
            assert nodes ** d @ kw == pytest.approx(exact, abs=1e-13)
            if d < 2 * n:
                assert nodes ** d @ gw == pytest.approx(exact, abs=1e-13)

    def test_symmetric(self):
        nodes, kw, _ = kronrod_rule(10)
        assert np.allclose(nodes, -nodes[::-1], atol=1e-15)
        assert np.allclose(kw, kw[::-1], atol=1e-15)


class TestIntegrate:
    def test_polynomial_one_interval(self):
        val, err, n = integrate(lambda x: 3 * x ** 2, [0.0, 2.0])
        assert val == pytest.approx(8.0, abs=1e-14) and n == 1

    def test_gaussian_density(self):
        val, _, _ = integrate(lambda x: np.exp(-x * x / 2) / math.sqrt(2 * math.pi), [-12, 0, 12], atol=1e-14)
        assert val == pytest.approx(1.0, abs=1e-14)

    def test_kink_at_breakpoint(self):
        f = lambda x: np.abs(x - 0.3)
        with_bp, _, n_bp = integrate(f, [0.0, 0.3, 1.0], atol=1e-13)
        without, _, n_free = integrate(f, [0.0, 1.0], atol=1e-13)
        exact = 0.5 * 0.3 ** 2 + 0.5 * 0.7 ** 2
        assert with_bp == pytest.approx(exact, abs=1e-15)
        assert without == pytest.approx(exact, abs=1e-12)
        assert n_bp == 2 < n_free

    def test_unsorted_and_duplicate_breakpoints(self):
        val, _, _ = integrate(np.cos, [1.0, 0.0, 0.5, 0.5])
        assert val == pytest.approx(math.sin(1.0), abs=1e-14)

    def test_relative_tolerance_for_tiny_integrals(self):
        scale = 1e-40
        val, err, _ = integrate(lambda x: scale * np.exp(-x), [0.0, 5.0], atol=0.0, rtol=1e-13)
        assert val == pytest.approx(scale * (1 - math.exp(-5)), rel=1e-13)
        assert err <= 1e-13 * val

    def test_degenerate_range(self):
        assert integrate(np.sin, [1.0]) == (0.0, 0.0, 0)

    def test_budget_exhausted(self):
        with pytest.raises(QuadratureError) as info:
            integrate(lambda x: np.sin(1 / np.maximum(x, 1e-300)), [0.0, 1.0], atol=1e-14, max_intervals=50)
        assert info.value.estimate is not None

    def test_nonfinite(self):
        with pytest.raises(QuadratureError):
            integrate(lambda x: np.where(x > 0.5, np.nan, 1.0), [0.0, 1.0])
