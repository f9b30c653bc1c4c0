import numpy as np
import pytest

from temperedstable import (Constant, ExperimentError, IntegrandSpec,
                            PiecewiseLinear, ProcessSpec, Sinusoidal,
                            constant_spec, holder_slope_experiment,
                            increment_quasinorm, process_quasinorm, quasinorm)
from temperedstable.quadrature import integrate_alpha_power


def test_indicator_norm(brownian_spec):
    # ||X(4)|| = (int_0^4 1 dx)^{1/2} = 2
    res = process_quasinorm(brownian_spec, 4.0, 1e-10)
    assert res.value == pytest.approx(2.0, rel=1e-10)
    assert res.residual <= 1e-9


def test_zero_function():
    spec = IntegrandSpec(f=lambda x: np.zeros(np.shape(x)), exponent=1.5,
                         singular_points=(), lo=0.0, hi=1.0)
    res = quasinorm(spec)
    assert res.value == 0.0 and res.residual == 0.0


def test_homogeneity(multistable_spec):
    from temperedstable.process import kernel
    from temperedstable.quadrature import truncation_bound
    cut = truncation_bound(multistable_spec, 1.0, 1e-12, theta_scale=2.0)
    base = process_quasinorm(multistable_spec, 1.0, 1e-9).value
    for c in (2.0, 0.3, -1.7):
        spec = IntegrandSpec(f=lambda x, c=c: c * kernel(multistable_spec, 1.0, x),
                             exponent=multistable_spec.stability,
                             singular_points=(0.0, 1.0), lo=-cut, hi=1.0)
        val = quasinorm(spec, 1e-9).value
        assert val == pytest.approx(abs(c) * base, rel=1e-8)


def test_solver_matches_closed_form():
    # variable-alpha solver against the constant-alpha closed form
    spec = constant_spec("LTFSM", 0.7, 1.4, 0.2)
    from temperedstable.process import kernel
    from temperedstable.quadrature import truncation_bound
    cut = truncation_bound(spec, 1.0, 1e-12)
    integrand = IntegrandSpec(f=lambda x: kernel(spec, 1.0, x), exponent=spec.stability,
                              singular_points=(0.0, 1.0), lo=-cut, hi=1.0)
    direct = quasinorm(integrand, 1e-9)
    solved = quasinorm(integrand, 1e-9, force_solver=True)
    assert solved.value == pytest.approx(direct.value, rel=1e-8)
    assert solved.residual <= 1e-9
    assert solved.iterations > direct.iterations


def test_defining_map_crosses_one(multistable_spec):
    # strict monotonicity: the defining integral crosses 1 at the solution
    from temperedstable.process import kernel
    from temperedstable.quadrature import truncation_bound
    cut = truncation_bound(multistable_spec, 1.0, 1e-12)
    integrand = IntegrandSpec(f=lambda x: kernel(multistable_spec, 1.0, x),
                              exponent=multistable_spec.stability,
                              singular_points=(0.0, 1.0), lo=-cut, hi=1.0)
    rho = quasinorm(integrand, 1e-9).value

    def mass(r):
        scaled = IntegrandSpec(f=lambda x: kernel(multistable_spec, 1.0, x) / r,
                               exponent=multistable_spec.stability,
                               singular_points=(0.0, 1.0), lo=-cut, hi=1.0)
        return integrate_alpha_power(scaled, 1e-10).value

    assert mass(rho * (1.0 - 1e-4)) > 1.0 > mass(rho * (1.0 + 1e-4))


class TestIncrements:
    def test_coincident_times(self, multistable_spec):
        assert increment_quasinorm(multistable_spec, 1.0, 1.0) == 0.0

    def test_brownian_unit_increment(self, brownian_spec):
        assert increment_quasinorm(brownian_spec, 1.0, 0.0, 1e-9) == pytest.approx(
            1.0, rel=1e-9)

    def test_symmetry(self, multifractional_spec):
        a = increment_quasinorm(multifractional_spec, 1.3, 0.4, 1e-8)
        b = increment_quasinorm(multifractional_spec, 0.4, 1.3, 1e-8)
        assert a == pytest.approx(b, rel=1e-9)

    def test_multifractional_lower_bound(self, multifractional_spec):
        # e^{-lam} (1/(b alpha))^{1/alpha} |t-s|^{H_t} for 0 <= s <= t <= s+1
        sp = multifractional_spec
        alpha = sp.alpha_bounds[0]
        b = sp.hurst_bounds[1]
        for (t, s) in ((1.0, 0.7), (2.0, 1.5), (0.9, 0.4)):
            q = increment_quasinorm(sp, t, s, 1e-8)
            bound = np.exp(-sp.lam) * (1.0 / (b * alpha)) ** (1.0 / alpha) \
                * abs(t - s) ** sp.hurst_at(t)
            assert q >= bound


class TestSlopeExperiment:
    def test_constant_recovers_hurst(self):
        spec = constant_spec("LTFSM", 0.7, 1.6, 0.2)
        fit = holder_slope_experiment(spec, 1.0, np.geomspace(1e-3, 0.3, 8))
        assert fit.slope == pytest.approx(0.7, abs=0.02)

    def test_multistable_bracket(self):
        spec = ProcessSpec("LTFmSM", Constant(0.7),
                           Sinusoidal(1.6, 0.2, 2.0 * np.pi), 0.2)
        fit = holder_slope_experiment(spec, 1.0, np.geomspace(1e-3, 0.3, 8))
        assert 0.7 * 1.4 / 1.8 - 0.05 <= fit.slope <= 0.7 * 1.8 / 1.4 + 0.05

    def test_multifractional_tracks_local_hurst(self, multifractional_spec):
        t0 = 0.8
        fit = holder_slope_experiment(multifractional_spec, t0,
                                      np.geomspace(1e-3, 0.1, 8))
        assert fit.slope == pytest.approx(multifractional_spec.hurst_at(t0), abs=0.05)

    def test_degenerate_deltas(self, multistable_spec):
        with pytest.raises(ExperimentError):
            holder_slope_experiment(multistable_spec, 1.0, [0.1] * 8)
        with pytest.raises(ExperimentError):
            holder_slope_experiment(multistable_spec, 1.0, [0.1, 0.2])
