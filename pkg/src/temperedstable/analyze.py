"""Estimators and verifiers for the quantitative process properties.

Quadrature-only checks (moment limit, localisability) never touch Monte
Carlo; the sampling-based checks (tails, moments, Holder exponents, empirical
CFs) consume PathEnsemble columns produced by the simulate module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy.special import gamma as _gamma_fn

from .charfn import CFQuery, cf
from .errors import DomainError, ExperimentError
from .process import ProcessSpec, constant_spec, kernel
from .quadrature import IntegrandSpec, adaptive_integrate, integrate_alpha_power
from .simulate import GridSpec, PathEnsemble, simulate_paths


@dataclass
class MomentLimit:
    """F(gamma, t): the small-increment absolute-moment limit of order gamma."""

    gamma: float
    t: float
    value: float
    kernel_integral: float
    gamma_term: float
    sin2_integral: float


def sin2_integral(gamma: float, tol: float = 1e-10) -> float:
    """int_0^inf u^{-gamma-1} sin^2(u) du for gamma in (0, 2).

    Near zero sin^2 u ~ u^2 kills the singularity; the oscillatory middle is
    integrated per half-period and the far tail uses sin^2 = (1 - cos 2u)/2
    with two integrations by parts on the cosine term.
    """
    if not (0.0 < gamma < 2.0):
        raise DomainError("sin2_integral needs gamma in (0, 2)")
    S = 2000.0 * np.pi

    def g(u):
        u = np.asarray(u)
        out = np.zeros(u.shape)
        m = u > 0
        out[m] = np.sin(u[m]) ** 2 * u[m] ** (-gamma - 1.0)
        return out

    edges = [0.0, 1.0] + [k * np.pi for k in range(1, 2001)]
    body = adaptive_integrate(g, edges, tol, tol, singular=(0.0,))
    tail = (S ** -gamma / (2.0 * gamma)
            + math.sin(2.0 * S) * S ** (-gamma - 1.0) / 4.0
            - (gamma + 1.0) * math.cos(2.0 * S) * S ** (-gamma - 2.0) / 8.0)
    return body.value + tail


def tangent_kernel_integral(spec: ProcessSpec, t: float, tol: float = 1e-10) -> float:
    """int |(1-x)_+^{H-1/a} - (-x)_+^{H-1/a}|^a dx with a = alpha(t) frozen."""
    alpha_t = float(spec.stability(t))
    H = spec.hurst_bounds[0]
    frozen = constant_spec("LFSM", H, alpha_t, 0.0)

    def f(x):
        return kernel(frozen, 1.0, x)

    return integrate_alpha_power(
        IntegrandSpec(f=f, exponent=alpha_t, singular_points=(0.0, 1.0),
                      lo=-np.inf, hi=1.0),
        tol).value


def flimit(spec: ProcessSpec, gamma: float, t: float, tol: float = 1e-10) -> MomentLimit:
    """Limit of E|X(t+r) - X(t)|^gamma / r^{gamma H} as r -> 0.

    Requires gamma below the lower stability bound and H alpha(t) != 1. The
    value combines the frozen-alpha tangent kernel integral, the gamma
    function, and the sin^2 moment integral.
    """
    a, _ = spec.alpha_bounds
    if not (0.0 < gamma < a):
        raise DomainError(f"gamma must lie in (0, {a})")
    alpha_t = float(spec.stability(t))
    H = spec.hurst_bounds[0]
    if abs(H * alpha_t - 1.0) < 1e-12:
        raise DomainError("H alpha(t) = 1 is outside the moment-limit hypothesis")
    ki = tangent_kernel_integral(spec, t, tol)
    gt = float(_gamma_fn(1.0 - gamma / alpha_t))
    s2 = sin2_integral(gamma, tol)
    value = ki ** (gamma / alpha_t) * 2.0 ** (gamma - 1.0) * gt / (gamma * s2)
    return MomentLimit(gamma, t, value, ki, gt, s2)


@dataclass
class EmpiricalCF:
    thetas: np.ndarray
    real: np.ndarray
    imag: np.ndarray
    n: int

    @property
    def imag_bound(self) -> float:
        return 3.0 / math.sqrt(self.n)


def empirical_cf(ensemble: PathEnsemble, time_index: int, thetas) -> EmpiricalCF:
    """Averages of cos(theta X) per theta; the sine part is a symmetry diagnostic."""
    x = ensemble.values[:, time_index]
    if x.size < 100:
        raise ExperimentError("need at least 100 paths for an empirical CF")
    thetas = np.asarray(thetas, dtype=float)
    phases = np.outer(thetas, x)
    return EmpiricalCF(thetas, np.cos(phases).mean(axis=1),
                       np.sin(phases).mean(axis=1), x.size)


@dataclass
class TailReport:
    y: np.ndarray
    prob: np.ndarray
    bound_constant: float
    slope: Optional[float]


def tail_check(samples, y_grid, spec: ProcessSpec, t: float, v: float) -> TailReport:
    """Empirical exceedance of |samples| against the stable tail bound.

    bound_constant is the smallest C with
    P(|X(t)-X(v)| >= y) <= C (|t-v|^{Ha} + |t-v|^{Hb}) / (y^a ^ y^b)
    over the grid; the log-log slope over the central decades estimates the
    tail index.
    """
    x = np.abs(np.asarray(samples, dtype=float))
    y = np.asarray(y_grid, dtype=float)
    if np.any(y <= 0):
        raise DomainError("tail grid must be positive")
    prob = (x[None, :] >= y[:, None]).mean(axis=1)
    a, b = spec.alpha_bounds
    H = spec.hurst_bounds[0]
    d = abs(t - v)
    denom = d ** (H * a) + d ** (H * b) if d > 0 else 0.0
    if denom > 0:
        with np.errstate(divide="ignore"):
            C = float(np.max(prob * np.minimum(y ** a, y ** b) / denom))
    else:
        C = 0.0
    live = (prob > 5.0 / x.size) & (prob < 0.2)
    slope = None
    if live.sum() >= 4:
        coef, *_ = np.linalg.lstsq(
            np.column_stack([np.ones(live.sum()), np.log(y[live])]),
            np.log(prob[live]), rcond=None)
        slope = float(coef[1])
    return TailReport(y, prob, C, slope)


@dataclass
class LocalisabilityReport:
    u: float
    r_values: np.ndarray
    distances: np.ndarray
    hypothesis_ok: bool


def rescaled_increment_spec(spec: ProcessSpec, u: float, r: float) -> ProcessSpec:
    """Law of (X(u + r v) - X(u)) / r^H as a process in v.

    Substituting x = u + r z in the CF integral turns the rescaled increment
    into the same kernel family with stability z -> alpha(u + r z) and
    tempering r lam; no approximation is involved.
    """
    if r <= 0:
        raise DomainError("scaling radius must be positive")
    return replace(spec, stability=spec.stability.compose_affine(r, u),
                   lam=spec.lam * r)


def tangent_spec(spec: ProcessSpec, u: float) -> ProcessSpec:
    """Tangent process at u: untempered constant-alpha(u) fractional motion."""
    H = spec.hurst_bounds[0]
    return constant_spec("LFSM", H, float(spec.stability(u)), 0.0)


def localisability_check(spec: ProcessSpec, u: float, v_grid, theta_grid,
                         r_values, tol: float = 1e-8) -> LocalisabilityReport:
    """Sup CF distance between rescaled increments at u and the tangent law.

    Exact quadrature throughout; no Monte Carlo. The hypothesis 1/a < H < 1
    is reported, not enforced: the distances remain computable outside it.
    """
    a, _ = spec.alpha_bounds
    H = spec.hurst_bounds[0]
    hypothesis_ok = (1.0 / a) < H < 1.0
    tangent = tangent_spec(spec, u)
    pairs = [(float(v), float(th)) for v in v_grid for th in theta_grid]
    base = {pair: cf(tangent, CFQuery([pair[0]], [pair[1]]), tol) for pair in pairs}
    r_values = np.asarray(sorted((float(r) for r in r_values), reverse=True))
    dists = []
    for r in r_values:
        sp = rescaled_increment_spec(spec, u, r)
        gap = max(abs(cf(sp, CFQuery([v], [th]), tol) - base[(v, th)])
                  for v, th in pairs)
        dists.append(gap)
    return LocalisabilityReport(u, r_values, np.asarray(dists), hypothesis_ok)


def holder_exponent_estimate(values) -> float:
    """Dyadic oscillation regression on one path over a unit interval.

    values must hold at least 2^12 + 1 uniformly spaced samples; the estimate
    is the slope of log max-increment against log block size over the middle
    dyadic scales.
    """
    x = np.asarray(values, dtype=float)
    if x.size < 2 ** 12 + 1:
        raise ExperimentError("need at least 2^12 + 1 samples")
    J = int(math.floor(math.log2(x.size - 1)))
    x = x[: 2 ** J + 1]
    js, osc = [], []
    for j in range(3, J - 2):
        step = 2 ** (J - j)
        diffs = np.abs(np.diff(x[::step]))
        m = diffs.max()
        if m > 0:
            js.append(j)
            osc.append(m)
    if len(js) < 3:
        raise ExperimentError("path too degenerate for an oscillation fit")
    js = np.asarray(js, dtype=float)
    X = np.column_stack([np.ones_like(js), -js * math.log(2.0)])
    coef, *_ = np.linalg.lstsq(X, np.log(osc), rcond=None)
    return float(coef[1])


def moment_estimate(samples, gamma: float) -> float:
    """Empirical mean of |samples|^gamma."""
    x = np.asarray(samples, dtype=float)
    if gamma == 0.0:
        return 1.0
    return float(np.mean(np.abs(x) ** gamma))


@dataclass
class MomentScalingReport:
    separations: np.ndarray
    moments: np.ndarray
    constants: np.ndarray
    uniform_constant: float
    bound_ok: bool


def moment_scaling_experiment(spec: ProcessSpec, gamma: float,
                              separations: Sequence[float], grid: GridSpec,
                              n_paths: int, workers: Optional[int] = None,
                              slack: float = 1.1) -> MomentScalingReport:
    """Check E|X(s)|^gamma <= C (1 + gamma/(a-gamma)) s^{Hb} uniformly in s >= 1.

    X(0) = 0, so columns at the separations are increments from the origin.
    The per-separation constants C(s) DECREASE in s (the bound's exponent Hb
    is deliberately crude), so the testable statement is that the constant
    fitted at the smallest separation covers the whole sweep.
    """
    a, b = spec.alpha_bounds
    if not (0.0 < gamma < a):
        raise DomainError(f"gamma must lie in (0, {a})")
    seps = np.asarray(sorted(float(s) for s in separations))
    Hb = spec.hurst_bounds[0] * b
    ens = simulate_paths(spec, grid, list(seps), n_paths, workers)
    moments = np.array([moment_estimate(ens.values[:, k], gamma)
                        for k in range(len(seps))])
    constants = moments / ((1.0 + gamma / (a - gamma)) * seps ** Hb)
    uniform = float(constants[0]) * slack
    bound_ok = bool(np.all(constants <= uniform))
    return MomentScalingReport(seps, moments, constants, uniform, bound_ok)


def sup_growth_report(spec: ProcessSpec, grid: GridSpec, t_lo: float, t_hi: float,
                      base_points: int = 64, levels: int = 4,
                      workers: Optional[int] = None) -> list:
    """Discrete sup of |X(t) - X(t_lo)| on nested refining time grids.

    Grids have base_points * 2^level + 1 points so each level contains the
    previous one, and all levels share the same measure realization. Centring
    at the window edge removes the common contribution of large measure atoms
    far in the past, so the in-window spikes that make the paths unbounded for
    H_t alpha < 1 are visible. This is a demonstration, not an assertion: any
    finite grid gives a finite sup.
    """
    sups = []
    for level in range(levels):
        n = base_points * 2 ** level + 1
        times = list(np.linspace(t_lo, t_hi, n))
        ens = simulate_paths(spec, grid, times, 1, workers)
        sups.append(float(np.max(np.abs(ens.values - ens.values[:, :1]))))
    return sups
