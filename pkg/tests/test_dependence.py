import math

import numpy as np
import pytest

from temperedstable import (Constant, DomainError, ExperimentError,
                            PiecewiseLinear, ProcessSpec, band_check,
                            constant_spec, dep_eval, rate_fit, semi_lrd_sum)
from temperedstable.dependence import DependencePoint, abs_pow_diff


class TestPowDiff:
    def test_zero_arguments(self):
        assert np.all(abs_pow_diff(np.array([0.0, 1.0]), np.array([2.0, 0.0]), 0.7)
                      == 0.0)

    def test_matches_direct_formula_moderate_ratio(self):
        rng = np.random.default_rng(8)
        u = rng.uniform(-2.0, 2.0, 300)
        v = u * rng.uniform(0.3, 0.45, 300) * rng.choice([-1.0, 1.0], 300)
        for alpha in (0.6, 1.0, 1.4, 2.0):
            direct = np.abs(u + v) ** alpha - np.abs(u) ** alpha - np.abs(v) ** alpha
            assert np.allclose(abs_pow_diff(u, v, alpha), direct,
                               rtol=1e-12, atol=1e-13)

    def test_tiny_ratio_first_order(self):
        # |u+v|^a - |u|^a -> a v sign(u) |u|^{a-1} without cancellation
        u, v, a = 1.7, 3e-18, 1.6
        got = abs_pow_diff(u, v, a)
        expect = a * v * u ** (a - 1.0) - v ** a
        assert got == pytest.approx(expect, rel=1e-12)

    def test_subadditivity_below_one(self):
        rng = np.random.default_rng(9)
        u = rng.normal(size=500)
        v = rng.normal(size=500) * 10.0 ** rng.uniform(-12, 2, 500)
        assert np.all(abs_pow_diff(u, v, 0.8) <= 1e-300)


class TestDepEval:
    def test_theta_degeneracy(self, multistable_spec):
        p = dep_eval(multistable_spec, 0.0, 5.0, 0.0, 1.0)
        assert p.I == 0.0 and p.R == 0.0

    def test_sign_flip_symmetry(self):
        spec = constant_spec("LTFSM", 0.8, 0.7, 0.05)
        a = dep_eval(spec, 0.0, 10.0, 1.0, 0.7)
        b = dep_eval(spec, 0.0, 10.0, -1.0, -0.7)
        assert a.R == pytest.approx(b.R, rel=1e-12)
        assert a.I == pytest.approx(b.I, rel=1e-12)

    def test_against_independent_oracle(self):
        # frozen from QUADPACK on the pointwise-difference integrand with
        # log-spaced breakpoints (alpha=0.7, H=0.8, lam=0.05, t1=0, t=50)
        spec = constant_spec("LTFSM", 0.8, 0.7, 0.05)
        p = dep_eval(spec, 0.0, 50.0, 1.0, 1.0, 1e-9)
        assert p.I == pytest.approx(-8.445012282637e-02, rel=1e-8)
        assert p.R == pytest.approx(3.573016223072e-06, rel=1e-6)
        assert p.R > 0.0  # subadditivity for alpha < 1 forces I <= 0, R >= 0

    def test_invariant_relation(self):
        spec = constant_spec("LTFSM", 0.75, 1.6, 0.05)
        p = dep_eval(spec, 0.0, 30.0, 1.0, 1.0)
        assert p.R == pytest.approx(p.K * math.expm1(-p.I), rel=1e-12)

    def test_taylor_bound(self):
        # |R + K I| <= K I^2 once I is small
        spec = constant_spec("LTFSM", 0.8, 0.7, 0.05)
        for t in (40.0, 120.0):
            p = dep_eval(spec, 0.0, t, 1.0, 1.0)
            assert abs(p.R + p.K * p.I) <= p.K * p.I ** 2

    def test_deep_lag_magnitude(self):
        # exponential envelope puts |R| below 1e-20 at t = 500, lam = 0.1
        spec = constant_spec("LTFSM", 0.75, 1.6, 0.1)
        p = dep_eval(spec, 0.0, 500.0, 1.0, 1.0)
        assert 0.0 < abs(p.R) < 1e-20
        assert np.isfinite(p.log_abs_r())

    def test_rejects_nonpositive_lag(self, multistable_spec):
        with pytest.raises(DomainError):
            dep_eval(multistable_spec, 0.0, 0.0, 1.0, 1.0)


class TestRateFit:
    def test_noiseless_synthetic(self):
        # |R(t)| = e^{-0.5 t} t^{0.3} exactly: R = expm1(-I), I = -log1p(R)
        ts = np.geomspace(5.0, 200.0, 12)
        pts = []
        for t in ts:
            r = math.exp(-0.5 * t + 0.3 * math.log(t))
            pts.append(DependencePoint(0.0, t, 1.0, 1.0, I=-math.log1p(r),
                                       logK=0.0, R=r))
        fit = rate_fit(pts)
        assert fit.exp_rate == pytest.approx(0.5, abs=1e-10)
        assert fit.power == pytest.approx(0.3, abs=1e-10)
        assert fit.rms_residual < 1e-10

    def test_intercept_recovery(self):
        ts = np.geomspace(10.0, 400.0, 10)
        pts = []
        for t in ts:
            r = math.exp(1.3 - 0.5 * t + 0.3 * math.log(t))
            pts.append(DependencePoint(0.0, t, 1.0, 1.0, I=-math.log1p(r),
                                       logK=0.0, R=r))
        fit = rate_fit(pts)
        assert fit.exp_rate == pytest.approx(0.5, abs=1e-9)
        assert fit.power == pytest.approx(0.3, abs=1e-8)
        assert fit.intercept == pytest.approx(1.3, abs=1e-8)

    def test_design_errors(self):
        good = [DependencePoint(0.0, t, 1.0, 1.0, -1e-3, -1.0, 1e-3)
                for t in (1.0, 2.0, 3.0, 4.0)]
        with pytest.raises(ExperimentError):
            rate_fit(good[:3])
        same_t = [DependencePoint(0.0, 2.0, 1.0, 1.0, -1e-3, -1.0, 1e-3)] * 4
        with pytest.raises(ExperimentError):
            rate_fit(same_t)
        mixed = good[:3] + [DependencePoint(1.0, 4.0, 1.0, 1.0, -1e-3, -1.0, 1e-3)]
        with pytest.raises(ExperimentError):
            rate_fit(mixed)


class TestProposedRates:
    def test_low_alpha_exact_order(self):
        spec = constant_spec("LTFSM", 0.8, 0.7, 0.05)
        lags = np.geomspace(200.0, 4000.0, 16)
        fit = rate_fit([dep_eval(spec, 0.0, float(t), 1.0, 1.0, 1e-9) for t in lags])
        assert fit.exp_rate == pytest.approx(0.035, rel=0.05)
        assert fit.power == pytest.approx(-0.44, rel=0.15)

    def test_high_alpha_exact_order(self):
        spec = constant_spec("LTFSM", 0.75, 1.6, 0.05)
        lags = np.geomspace(200.0, 4000.0, 16)
        fit = rate_fit([dep_eval(spec, 0.0, float(t), 1.0, 1.0, 1e-9) for t in lags])
        assert fit.exp_rate == pytest.approx(0.05, rel=0.05)
        assert fit.power == pytest.approx(0.125, rel=0.15)

    def test_band_collapse_for_constant_alpha(self):
        spec = constant_spec("LTFSM", 0.8, 0.7, 0.05)
        lags = np.geomspace(200.0, 4000.0, 12)
        fit = rate_fit([dep_eval(spec, 0.0, float(t), 1.0, 1.0, 1e-9) for t in lags])
        chk = band_check(spec, fit, rate_slack=0.00175, power_slack=0.066)
        assert chk.rate_band[0] == chk.rate_band[1]
        assert chk.passed

    def test_band_case_split_guard(self):
        spec = ProcessSpec("LTFmSM", Constant(0.8),
                           PiecewiseLinear([(-1.0, 0.8), (0.0, 1.5)]), 0.1)
        fit_stub = type("F", (), {"exp_rate": 0.1, "power": 0.0})()
        with pytest.raises(DomainError):
            band_check(spec, fit_stub)

    def test_fitted_curve_inside_envelopes(self):
        # the two-sided envelope statement itself, checked on the raw points
        alpha = PiecewiseLinear([(-2.0, 0.9), (-1.0, 0.6)])
        spec = ProcessSpec("LTFmSM", Constant(0.8), alpha, 0.1)
        a, b, H, lam = 0.6, 0.9, 0.8, 0.1
        lags = np.geomspace(600.0, 6000.0, 10)
        pts = [dep_eval(spec, 0.0, float(t), 1.0, 1.0, 1e-9) for t in lags]
        logs = np.array([p.log_abs_r() for p in pts])
        upper = np.array([-lam * a * t + (H * b - 1.0) * np.log(t) for t in lags])
        lower = np.array([-lam * b * t + (H * a - 1.0) * np.log(t) for t in lags])
        # within a constant: normalize at the first lag
        assert np.all(logs - logs[0] <= upper - upper[0] + 1e-6)
        assert np.all(logs - logs[0] >= lower - lower[0] - 1e-6)


class TestSemiLrd:
    def test_single_term(self):
        spec = constant_spec("LTFSM", 0.7, 0.8, 0.1)
        sums = semi_lrd_sum(spec, [0.1], 1, theta1=0.5, theta2=0.5)
        p = dep_eval(spec, 0.0, 1.0, 0.5, 0.5, 1e-7)
        assert sums[0] == pytest.approx(abs(p.R), rel=1e-6)

    def test_zero_theta(self):
        spec = constant_spec("LTFSM", 0.7, 0.8, 0.1)
        assert semi_lrd_sum(spec, [0.1, 0.01], 5, theta1=0.0, theta2=1.0) == [0.0, 0.0]

    def test_monotone_in_lambda(self):
        spec = constant_spec("LTFSM", 0.7, 0.8, 0.1)
        sums = semi_lrd_sum(spec, [0.1, 0.01, 0.001], 200, theta1=0.5, theta2=0.5)
        assert sums[0] < sums[1] < sums[2]

    def test_fast_path_matches_generic(self):
        spec = constant_spec("LTFSM", 0.7, 0.8, 0.05)
        fast = semi_lrd_sum(spec, [0.05], 5, theta1=0.5, theta2=0.5)[0]
        slow = sum(abs(dep_eval(spec, 0.0, float(n), 0.5, 0.5, 1e-7).R)
                   for n in range(1, 6))
        assert fast == pytest.approx(slow, rel=1e-6)
