import math

import numpy as np
import pytest

from temperedstable import (Constant, DomainError, ExperimentError, GridSpec,
                            PiecewiseLinear, ProcessSpec, Sinusoidal,
                            constant_spec, empirical_cf, flimit,
                            holder_exponent_estimate, localisability_check,
                            moment_estimate, moment_scaling_experiment,
                            sample_sas, simulate_paths, sin2_integral,
                            sup_growth_report, tail_check)
from temperedstable.analyze import tangent_kernel_integral
from temperedstable.simulate import PathEnsemble


class TestSin2Integral:
    # frozen from a 40-digit split computation; gamma = 1 is pi/2 exactly
    CASES = [(0.5, 1.772453850905516),
             (1.0, 1.5707963267948966),
             (1.5, 2.3632718012073547)]

    @pytest.mark.parametrize("gamma,expect", CASES)
    def test_values(self, gamma, expect):
        assert sin2_integral(gamma) == pytest.approx(expect, rel=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            sin2_integral(2.0)


class TestFlimit:
    def test_kernel_integral_oracle(self):
        # independent oracle: QUADPACK with log-spaced breakpoints out to 1e12
        spec = constant_spec("LTFSM", 0.7, 1.8, 0.1)
        ki = tangent_kernel_integral(spec, 1.0)
        assert ki == pytest.approx(0.894172516166, rel=3e-7)

    def test_t_independent_for_constant_alpha(self):
        spec = constant_spec("LTFSM", 0.7, 1.8, 0.1)
        vals = [flimit(spec, 0.5, t).value for t in (0.0, 1.0, 5.0)]
        assert max(vals) - min(vals) <= 1e-10 * vals[0]

    def test_formula_assembly(self):
        from scipy.special import gamma as G
        spec = constant_spec("LTFSM", 0.7, 1.8, 0.1)
        ml = flimit(spec, 0.5, 1.0)
        expect = (ml.kernel_integral ** (0.5 / 1.8) * 2.0 ** (-0.5)
                  * G(1.0 - 0.5 / 1.8) / (0.5 * ml.sin2_integral))
        assert ml.value == pytest.approx(expect, rel=1e-14)

    def test_varying_alpha_depends_on_t(self):
        spec = ProcessSpec("LTFmSM", Constant(0.7),
                           Sinusoidal(1.5, 0.3, 2.0 * np.pi), 0.1)
        v0 = flimit(spec, 0.3, 0.0).value
        v1 = flimit(spec, 0.3, np.pi / 2.0).value
        assert abs(v0 - v1) > 1e-3

    def test_domain_errors(self):
        spec = constant_spec("LTFSM", 0.7, 1.8, 0.1)
        with pytest.raises(DomainError):
            flimit(spec, 1.9, 1.0)  # gamma >= stability lower bound
        bad = constant_spec("LTFSM", 0.5, 2.0, 0.1)  # H alpha = 1 exactly
        with pytest.raises(DomainError):
            flimit(bad, 0.5, 1.0)


class TestEmpiricalCF:
    def _ensemble(self, values):
        spec = constant_spec("LFSM", 0.5, 2.0, 0.0)
        grid = GridSpec(left_cut=-1.0, right_end=1.0, base_step=0.1)
        return PathEnsemble(np.array([1.0]), values[:, None], spec, grid, [])

    def test_zero_samples(self):
        ecf = empirical_cf(self._ensemble(np.zeros(500)), 0, [0.0, 1.0, 2.0])
        assert np.all(ecf.real == 1.0)

    def test_theta_zero(self):
        rng = np.random.default_rng(0)
        ecf = empirical_cf(self._ensemble(rng.normal(size=500)), 0, [0.0])
        assert ecf.real[0] == 1.0 and ecf.imag[0] == 0.0

    def test_symmetry_diagnostic(self):
        rng = np.random.Generator(np.random.Philox(1))
        x = sample_sas(1.5, 1.0, rng.random(40_000), rng.standard_exponential(40_000))
        ecf = empirical_cf(self._ensemble(x), 0, np.linspace(-2, 2, 9))
        assert np.max(np.abs(ecf.imag)) <= ecf.imag_bound

    def test_needs_paths(self):
        with pytest.raises(ExperimentError):
            empirical_cf(self._ensemble(np.zeros(50)), 0, [1.0])


class TestTailCheck:
    def test_coincident_times(self, multistable_spec):
        rep = tail_check(np.zeros(1000), [1.0, 2.0], multistable_spec, 1.0, 1.0)
        assert np.all(rep.prob == 0.0)
        assert rep.bound_constant == 0.0

    def test_far_grid_end_vanishes(self):
        rng = np.random.Generator(np.random.Philox(2))
        x = sample_sas(1.5, 1.0, rng.random(20_000), rng.standard_exponential(20_000))
        spec = constant_spec("LTFSM", 0.7, 1.5, 0.5)
        rep = tail_check(x, np.geomspace(0.5, 1e5, 25), spec, 1.0, 0.9)
        assert rep.prob[-1] == 0.0

    def test_stable_tail_slope(self):
        rng = np.random.Generator(np.random.Philox(3))
        n = 300_000
        x = sample_sas(1.5, 1.0, rng.random(n), rng.standard_exponential(n))
        spec = constant_spec("LTFSM", 0.7, 1.5, 0.5)
        rep = tail_check(x, np.geomspace(1.0, 200.0, 30), spec, 1.0, 0.9)
        assert rep.slope == pytest.approx(-1.5, abs=0.15)

    def test_constant_stable_across_separations(self):
        spec = constant_spec("LTFSM", 0.7, 1.5, 0.5)
        grid = GridSpec(left_cut=-30.0, right_end=1.5, base_step=5e-3,
                        refine_factor=4, seed=31)
        times = [1.0, 1.1, 1.2, 1.4]
        ens = simulate_paths(spec, grid, times, 8_000)
        y = np.geomspace(0.05, 20.0, 25)
        consts = []
        for k, d in ((1, 0.1), (2, 0.2), (3, 0.4)):
            inc = ens.values[:, k] - ens.values[:, 0]
            consts.append(tail_check(inc, y, spec, 1.0 + d, 1.0).bound_constant)
        assert max(consts) <= 2.0 * min(consts)


class TestLocalisability:
    def test_zero_theta_grid(self, multistable_spec):
        rep = localisability_check(multistable_spec, 1.0, [0.5], [0.0],
                                   [1.0, 0.1], 1e-8)
        assert np.all(rep.distances == 0.0)

    def test_lfsm_control_is_exact(self):
        spec = constant_spec("LFSM", 0.8, 1.6, 0.0)
        rep = localisability_check(spec, 1.0, [0.25, 0.5], [0.15, 0.3],
                                   [1.0, 0.01, 1e-4], 1e-8)
        assert np.max(rep.distances) <= 1e-7

    def test_distances_shrink(self):
        alpha = PiecewiseLinear([(-0.5, 1.6), (0.0, 1.8), (0.5, 1.4), (1.0, 1.6)])
        spec = ProcessSpec("LTFmSM", Constant(0.8), alpha, 0.5)
        rep = localisability_check(spec, 1.0, [0.25, 0.5], [0.15, 0.3],
                                   [1.0, 0.01, 1e-4], 1e-8)
        assert rep.hypothesis_ok
        assert rep.distances[0] > rep.distances[1] > rep.distances[2]

    def test_hypothesis_flag(self):
        spec = constant_spec("LTFmSM", 0.55, 1.4, 0.5)  # H < 1/a
        rep = localisability_check(spec, 0.5, [0.5], [0.5], [1.0], 1e-8)
        assert not rep.hypothesis_ok
        assert np.isfinite(rep.distances).all()


class TestHolderEstimate:
    def test_linear_path(self):
        t = np.linspace(0.0, 1.0, 2 ** 13 + 1)
        assert holder_exponent_estimate(t) == pytest.approx(1.0, abs=1e-12)

    def test_too_short(self):
        with pytest.raises(ExperimentError):
            holder_exponent_estimate(np.zeros(100))

    def test_brownian_path(self, brownian_spec):
        # cells must stay below the finest dyadic block scale
        grid = GridSpec(left_cut=-0.25, right_end=1.0, base_step=1e-3,
                        refine_factor=16, seed=77)
        times = list(np.linspace(0.0, 1.0, 2 ** 13 + 1))
        ens = simulate_paths(brownian_spec, grid, times, 1)
        est = holder_exponent_estimate(ens.values[0])
        # the max-increment regression carries a downward sqrt(log) bias of
        # about 0.14 at this resolution (measured on exact cumsum paths)
        assert 0.25 <= est <= 0.55

    def test_smooth_regime_lower_bound(self):
        spec = constant_spec("LTFSM", 0.9, 1.8, 0.1)
        grid = GridSpec(left_cut=-45.0, right_end=1.0, base_step=4e-3,
                        refine_factor=4, seed=78)
        times = list(np.linspace(0.0, 1.0, 2 ** 13 + 1))
        ens = simulate_paths(spec, grid, times, 1)
        est = holder_exponent_estimate(ens.values[0])
        assert est >= 0.9 - 1.0 / 1.8 - 0.1


class TestMoments:
    def test_trivial_values(self):
        assert moment_estimate(np.full(10, -3.0), 0.5) == pytest.approx(np.sqrt(3.0))
        assert moment_estimate(np.random.default_rng(0).normal(size=10), 0.0) == 1.0

    def test_uniform_constant_covers_sweep(self):
        spec = constant_spec("LTFSM", 0.7, 1.8, 0.3)
        grid = GridSpec(left_cut=-18.0, right_end=8.0, base_step=5e-3,
                        refine_factor=2, seed=13)
        rep = moment_scaling_experiment(spec, 0.5, [1.0, 2.0, 4.0, 8.0],
                                        grid, 4_000)
        assert rep.bound_ok
        # the crude-exponent constant shrinks with separation
        assert rep.constants[-1] < rep.constants[0]

    def test_gamma_domain(self):
        spec = constant_spec("LTFSM", 0.7, 1.8, 0.3)
        grid = GridSpec(left_cut=-5.0, right_end=2.0, base_step=0.01)
        with pytest.raises(DomainError):
            moment_scaling_experiment(spec, 2.0, [1.0, 2.0], grid, 100)


def test_sup_growth_unbounded_regime():
    # H_t alpha < 1 with heavy jumps: the discrete sup grows under nested
    # refinement as the time grid closes in on the big measure atoms. The
    # window endpoints are irrational w.r.t. the cell grid so no evaluation
    # time collides with a cell midpoint exactly.
    spec = ProcessSpec("LTmFSM", Sinusoidal(0.55, 0.1, 4.0), Constant(0.8), 0.5)
    grid = GridSpec(left_cut=-40.0, right_end=1.0, base_step=5e-3,
                    refine_factor=2, seed=3)
    sups = sup_growth_report(spec, grid, 0.1037, 0.9421, base_points=64, levels=6)
    assert all(b >= a for a, b in zip(sups, sups[1:]))
    assert sups[-1] > 1.2 * sups[0]
