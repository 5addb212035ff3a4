"""Tests for Gegenbauer polynomials and the plain-integral quadrature."""

import numpy as np
import pytest

from fgps import (
    gegenbauer_eval,
    gg_nodes,
    integrate_unit,
    plain_integral_weights,
    quadrature_rule,
)
from fgps.gegenbauer import load_rule, save_rule


class TestGegenbauerEval:
    def test_degree_zero_is_one(self):
        assert gegenbauer_eval(0, 0.3, 0.7) == 1.0

    def test_chebyshev_special_case(self):
        # lambda = 0 gives Chebyshev T_n; T_2(x) = 2x^2 - 1
        assert gegenbauer_eval(2, 0.0, 0.5) == pytest.approx(-0.5, abs=1e-15)

    def test_legendre_special_case(self):
        # lambda = 1/2 gives Legendre P_n; P_3(x) = (5x^3 - 3x)/2
        assert gegenbauer_eval(3, 0.5, 0.2) == pytest.approx(-0.28, abs=1e-15)

    @pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 1.0])
    def test_standardization_at_one(self, lam):
        for n in range(61):
            assert abs(gegenbauer_eval(n, lam, 1.0) - 1.0) <= 1e-14

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError, match="lambda"):
            gegenbauer_eval(3, -0.5, 0.1)

    def test_rejects_negative_degree(self):
        with pytest.raises(ValueError, match="degree"):
            gegenbauer_eval(-1, 0.0, 0.1)

    def test_vectorized_matches_scalar(self):
        xs = np.linspace(-1, 1, 7)
        vec = gegenbauer_eval(5, 0.25, xs)
        assert vec == pytest.approx([gegenbauer_eval(5, 0.25, x) for x in xs])


class TestNodes:
    def test_chebyshev_pair(self):
        z = gg_nodes(1, 0.0)
        assert z == pytest.approx([-np.cos(np.pi / 4), np.cos(np.pi / 4)], abs=1e-15)

    def test_legendre_pair(self):
        assert gg_nodes(1, 0.5) == pytest.approx(
            [-1 / np.sqrt(3), 1 / np.sqrt(3)], abs=1e-15
        )

    def test_odd_degree_origin(self):
        assert gg_nodes(0, 0.9) == pytest.approx([0.0], abs=1e-15)

    @pytest.mark.parametrize("n_g", [3, 10, 25, 50])
    @pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 1.0])
    def test_residual_symmetry_ordering(self, n_g, lam):
        z = gg_nodes(n_g, lam)
        assert np.all(np.diff(z) > 0)
        assert np.max(np.abs(z + z[::-1])) <= 1e-13
        assert np.max(np.abs(gegenbauer_eval(n_g + 1, lam, z))) < 1e-13


class TestWeights:
    def test_single_midpoint_node(self):
        assert plain_integral_weights([0.5]) == pytest.approx([1.0])

    @pytest.mark.parametrize("n_g,lam", [(4, 0.0), (9, 0.5), (16, 1.0)])
    def test_weights_sum_to_one(self, n_g, lam):
        rule = quadrature_rule(n_g, lam)
        assert abs(rule.weights.sum() - 1.0) <= 1e-13

    def test_cubic_moment(self):
        rule = quadrature_rule(8, 0.0)
        assert abs(rule.weights @ rule.shifted_nodes**3 - 0.25) <= 1e-14

    @pytest.mark.parametrize("n_g", [5, 20, 50])
    @pytest.mark.parametrize("lam", [0.0, 0.5])
    def test_polynomial_exactness(self, n_g, lam):
        rule = quadrature_rule(n_g, lam)
        rng = np.random.default_rng(42 + n_g)
        for _ in range(5):
            coeffs = rng.uniform(-1.0, 1.0, n_g + 1)
            exact = np.sum(coeffs / np.arange(1, n_g + 2))
            approx = integrate_unit(
                rule, np.polynomial.polynomial.polyval(rule.shifted_nodes, coeffs)
            )
            assert abs(approx - exact) <= 1e-12 * (1.0 + abs(exact))

    def test_fejer_closed_form_at_lambda_zero(self):
        # Fejer's first rule on [-1, 1], halved for the map to [0, 1].
        n = 12
        rule = quadrature_rule(n - 1, 0.0)
        k = np.arange(n)
        theta = (2.0 * k + 1.0) * np.pi / (2.0 * n)
        m = np.arange(1, n // 2 + 1)
        fejer = (2.0 / n) * (
            1.0
            - 2.0
            * np.sum(np.cos(2.0 * m[None, :] * theta[:, None]) /
                     (4.0 * m[None, :] ** 2 - 1.0), axis=1)
        )
        assert rule.weights == pytest.approx(fejer[::-1] / 2.0, abs=1e-14)

    def test_large_rule_is_stable(self):
        rule = quadrature_rule(1000, 0.0)
        assert np.all(np.isfinite(rule.weights))
        assert np.abs(rule.weights).sum() <= 1.0 + 1e-10

    def test_rejects_coincident_nodes(self):
        with pytest.raises(ValueError, match="coincident"):
            plain_integral_weights([0.5, 0.5 + 1e-15])

    def test_rejects_nodes_outside_unit_interval(self):
        with pytest.raises(ValueError, match="inside"):
            plain_integral_weights([0.2, 1.0])


class TestIntegrateUnit:
    def test_constant(self):
        rule = quadrature_rule(6, 0.0)
        assert integrate_unit(rule, np.full(7, 3.5)) == pytest.approx(3.5, abs=1e-13)

    def test_linear(self):
        rule = quadrature_rule(1, 0.25)
        assert integrate_unit(rule, rule.shifted_nodes) == pytest.approx(0.5, abs=1e-14)

    def test_exponential(self):
        rule = quadrature_rule(16, 0.0)
        value = integrate_unit(rule, np.exp(rule.shifted_nodes))
        assert abs(value - (np.e - 1.0)) <= 1e-12

    def test_length_mismatch(self):
        rule = quadrature_rule(4, 0.0)
        with pytest.raises(ValueError, match="samples"):
            integrate_unit(rule, np.ones(3))


class TestRuleCache:
    def test_round_trip(self, tmp_path):
        rule = quadrature_rule(17, 0.25)
        path = tmp_path / "rule.csv"
        save_rule(rule, path)
        loaded = load_rule(path)
        assert loaded.lam == rule.lam and loaded.n_g == rule.n_g
        np.testing.assert_array_equal(loaded.nodes, rule.nodes)
        np.testing.assert_array_equal(loaded.shifted_nodes, rule.shifted_nodes)
        np.testing.assert_array_equal(loaded.weights, rule.weights)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "rule.csv"
        path.write_text("nope\n1,2\n")
        with pytest.raises(ValueError, match="header"):
            load_rule(path)


class TestRuleInvariants:
    @pytest.mark.parametrize("n_g,lam", [(7, 0.0), (12, 0.5), (9, 1.0)])
    def test_shifted_nodes_affine(self, n_g, lam):
        rule = quadrature_rule(n_g, lam)
        np.testing.assert_array_equal(rule.shifted_nodes, (rule.nodes + 1.0) / 2.0)
        assert np.all((rule.shifted_nodes > 0) & (rule.shifted_nodes < 1))
