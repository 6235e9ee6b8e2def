import numpy as np
import pytest

from nlburgers import (Field, GradientPair, PlainSine, SignCase,
                       burgers_characteristics, closed_form_curve, make_grid,
                       minus_blowup_time, minus_closed_form, ode_integrate_pair,
                       plus_blowup_time, plus_closed_form)
from nlburgers.oracle import integrate_pair_batch


class TestPlusClosedForm:
    def test_symmetric_negative_pair(self):
        # F1(t) = 1/(1/F1(0) + 2t): t* = 0.5, F1(0.25) = -2
        pair = GradientPair(-1.0, -1.0, SignCase.PLUS)
        assert plus_blowup_time(-1.0, -1.0) == pytest.approx(0.5, abs=1e-15)
        assert plus_closed_form(pair, 0.25) == pytest.approx(-2.0, rel=1e-14)

    def test_symmetric_positive_pair_decays(self):
        pair = GradientPair(1.0, 1.0, SignCase.PLUS)
        assert plus_blowup_time(1.0, 1.0) is None
        t = np.linspace(0, 10, 50)
        vals = plus_closed_form(pair, t)
        assert np.all(np.diff(vals) < 0) and vals[-1] < 0.05

    def test_general_pair_blowup_time(self):
        # A = f1 - f2 = 1: t* = ln(f2/f1)/(2A) = ln 2 / 2
        assert plus_blowup_time(-1.0, -2.0) == pytest.approx(np.log(2) / 2, rel=1e-14)

    def test_general_pair_against_rk4(self):
        pair = GradientPair(-1.0, -2.0, SignCase.PLUS)
        t_star = plus_blowup_time(-1.0, -2.0)
        curve = ode_integrate_pair(pair, 1e-6, 2.0)
        assert curve.t_star == pytest.approx(t_star, abs=1e-4)

    def test_time_at_singularity_rejected(self):
        pair = GradientPair(-1.0, -1.0, SignCase.PLUS)
        with pytest.raises(ValueError, match="singularity"):
            plus_closed_form(pair, 0.5)

    def test_degenerate_zero_probe(self):
        pair = GradientPair(0.0, 5.0, SignCase.PLUS)
        assert plus_blowup_time(0.0, 5.0) is None
        assert plus_closed_form(pair, 3.0) == 0.0

    def test_all_negative_pairs_blow_up(self):
        # the general-A solution confirms blow-up for every negative pair,
        # not only the symmetric case used in the closed-form derivation
        rng = np.random.default_rng(5)
        for _ in range(200):
            f1, f2 = -rng.uniform(0.05, 5.0, 2)
            t_star = plus_blowup_time(f1, f2)
            assert t_star is not None and t_star > 0

    def test_value_at_zero_is_initial(self):
        for f1, f2 in ((-1.0, -2.0), (-0.3, -0.3), (2.0, 0.5)):
            pair = GradientPair(f1, f2, SignCase.PLUS)
            assert plus_closed_form(pair, 0.0) == pytest.approx(f1, rel=1e-12)


class TestMinusClosedForm:
    def test_paper_style_pair(self):
        # A = 1, B = ln 2; value at 0 is A e^{AB}/(e^{AB} - 1) = 2
        pair = GradientPair(2.0, -1.0, SignCase.MINUS)
        assert minus_blowup_time(2.0, -1.0) == pytest.approx(np.log(2), rel=1e-14)
        assert minus_closed_form(pair, 0.0) == pytest.approx(2.0, rel=1e-14)
        a, b = 1.0, np.log(2)
        t = 0.3
        expected = a * np.exp(a * b) / (np.exp(a * b) - np.exp(a * t))
        assert minus_closed_form(pair, t) == pytest.approx(expected, rel=1e-13)

    def test_balanced_pair_uses_limit_branch(self):
        pair = GradientPair(1.0, -1.0, SignCase.MINUS)
        assert minus_blowup_time(1.0, -1.0) == pytest.approx(1.0, abs=1e-12)
        assert minus_closed_form(pair, 0.5) == pytest.approx(2.0, rel=1e-12)
        curve = ode_integrate_pair(pair, 1e-6, 2.0)
        assert curve.t_star == pytest.approx(1.0, abs=1e-4)

    def test_hypothesis_violations_named(self):
        with pytest.raises(ValueError, match="F_1\\(0\\) > 0"):
            GradientPair(-1.0, -1.0, SignCase.MINUS)
        with pytest.raises(ValueError, match="F_2\\(0\\) < 0"):
            GradientPair(1.0, 1.0, SignCase.MINUS)
        with pytest.raises(ValueError, match="F_1\\(0\\) > 0"):
            minus_blowup_time(-2.0, -1.0)

    def test_all_hypothesis_pairs_blow_up(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            f1 = rng.uniform(0.05, 5.0)
            f2 = -rng.uniform(0.05, 5.0)
            assert minus_blowup_time(f1, f2) > 0


class TestPairIntegration:
    def test_divergence_bracket_near_singularity(self):
        pair = GradientPair(-1.0, -1.0, SignCase.PLUS)
        curve = ode_integrate_pair(pair, 1e-5, 1.0)
        assert curve.t_star is not None
        assert abs(curve.t_star - 0.5) < 1e-3

    def test_plus_conserves_difference(self):
        pair = GradientPair(-1.0, -2.0, SignCase.PLUS)
        curve = ode_integrate_pair(pair, 1e-5, 0.9 * np.log(2) / 2)
        drift = np.abs((curve.values - curve.f2_values) - (-1.0 - -2.0))
        assert np.max(drift) < 1e-8

    def test_minus_conserves_sum(self):
        pair = GradientPair(2.0, -1.0, SignCase.MINUS)
        curve = ode_integrate_pair(pair, 1e-5, 0.9 * np.log(2))
        drift = np.abs((curve.values + curve.f2_values) - 1.0)
        assert np.max(drift) < 1e-8

    def test_fixed_point_when_one_probe_vanishes(self):
        pair = GradientPair(0.0, 5.0, SignCase.PLUS)
        curve = ode_integrate_pair(pair, 1e-3, 1.0)
        assert np.max(np.abs(curve.values)) == 0.0
        assert np.max(np.abs(curve.f2_values - 5.0)) == 0.0
        assert curve.t_star is None

    def test_affine_inverse_law_plus_symmetric(self):
        # 1/F1(t) - 1/F1(0) - 2t vanishes identically in the A = 0 case
        pair = GradientPair(-1.0, -1.0, SignCase.PLUS)
        t = np.linspace(0, 0.45, 200)
        vals = plus_closed_form(pair, t)
        residual = 1.0 / vals - (-1.0) - 2.0 * t
        assert np.max(np.abs(residual)) < 1e-9

    def test_batch_matches_scalar_path(self):
        f1 = np.array([-1.0, -0.5])
        f2 = np.array([-2.0, -0.5])
        times, b1, b2 = integrate_pair_batch(f1, f2, SignCase.PLUS,
                                             np.array([1e-4, 1e-4]), 100)
        pair = GradientPair(-1.0, -2.0, SignCase.PLUS)
        curve = ode_integrate_pair(pair, 1e-4, 100 * 1e-4)
        np.testing.assert_allclose(b1[:, 0], curve.values, rtol=1e-14)

    def test_closed_form_curve_carries_partner(self):
        pair = GradientPair(-1.0, -2.0, SignCase.PLUS)
        curve = closed_form_curve(pair, np.linspace(0, 0.3, 10))
        np.testing.assert_allclose(curve.values - curve.f2_values, 1.0,
                                   atol=1e-12)
        assert curve.t_star == pytest.approx(np.log(2) / 2)


class TestBurgersCharacteristics:
    def test_shock_time_for_sine(self):
        ic = PlainSine(L=2.0)
        grid = make_grid(128, 2.0)
        _, t_shock = burgers_characteristics(ic, grid, 0.0,
                                             u0_prime=ic.derivative)
        assert t_shock == pytest.approx(1 / (2 * np.pi), rel=1e-10)

    def test_identity_at_time_zero(self):
        ic = PlainSine(L=2.0)
        grid = make_grid(128, 2.0)
        f, _ = burgers_characteristics(ic, grid, 0.0, u0_prime=ic.derivative)
        assert np.max(np.abs(f.values - ic(grid.nodes))) < 1e-12

    def test_constant_profile_never_shocks(self):
        grid = make_grid(64, 2.0)
        c = 0.8
        f, t_shock = burgers_characteristics(lambda x: np.full_like(np.asarray(x, dtype=float), c),
                                             grid, 5.0)
        assert t_shock == np.inf
        np.testing.assert_allclose(f.values, c, atol=1e-12)

    def test_newton_residual_at_machine_precision(self):
        ic = PlainSine(L=2.0)
        grid = make_grid(256, 2.0)
        t = 0.7 / (2 * np.pi)
        f, _ = burgers_characteristics(ic, grid, t, u0_prime=ic.derivative)
        # reconstruct the characteristic feet and verify the defining equation
        # (monotone pre-shock, so the root is unique)
        from numpy import abs as nabs
        xi = np.empty_like(grid.nodes)
        for j, (x, u) in enumerate(zip(grid.nodes, f.values)):
            # xi = x - 2 u0(xi) t and u = u0(xi) -> xi = x - 2 u t
            xi[j] = x - 2 * u * t
        residual = nabs(xi + 2 * ic(xi) * t - grid.nodes)
        assert np.max(residual) < 1e-12

    def test_post_shock_time_rejected(self):
        ic = PlainSine(L=2.0)
        grid = make_grid(64, 2.0)
        with pytest.raises(ValueError, match="shock"):
            burgers_characteristics(ic, grid, 0.2, u0_prime=ic.derivative)

    def test_matches_quintic_series_early(self):
        # independent cross-check: for small t, u ~ u0 - 2 t u0 u0'
        ic = PlainSine(L=2.0)
        grid = make_grid(256, 2.0)
        t = 1e-4
        f, _ = burgers_characteristics(ic, grid, t, u0_prime=ic.derivative)
        x = grid.nodes
        first_order = ic(x) - 2 * t * ic(x) * ic.derivative(x)
        assert np.max(np.abs(f.values - first_order)) < 5e-7
