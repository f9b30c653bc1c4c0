"""Process specifications and pointwise kernel evaluation.

The moving-average kernel underlying every process here is

    G(t, x) = e^{-lam (t-x)_+} (t-x)_+^{H - 1/alpha(x)}
            - e^{-lam (-x)_+}  (-x)_+^{H - 1/alpha(x)}

with the convention 0^g = 0 for every real g. Multistable kinds hold H fixed
and let alpha vary with the integration variable x; multifractional kinds hold
alpha fixed and evaluate H at the process time t. In the far left tail the two
terms nearly cancel, so the difference is computed through expm1/log1p rather
than by naive subtraction; this keeps full relative precision out to the
truncation cut, which the dependence and localisability computations rely on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DomainError
from .params import Constant, ParamFunction

KINDS = ("LTFmSM", "LTmFSM", "LFSM", "LTFSM", "LFmSM", "LmFSM", "YaglomNoise")

# kinds with constant H and possibly varying alpha(x)
_CONSTANT_HURST = {"LTFmSM", "LTFSM", "LFSM", "LFmSM", "YaglomNoise"}
# kinds with constant alpha and time-varying H_t
_MULTIFRACTIONAL = {"LTmFSM", "LmFSM"}
_TEMPERED = {"LTFmSM", "LTmFSM", "LTFSM", "YaglomNoise"}


@dataclass(frozen=True)
class ProcessSpec:
    """Full description of one process: kind, Hurst, stability, tempering rate."""

    kind: str
    hurst: ParamFunction
    stability: ParamFunction
    lam: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown process kind {self.kind!r}")
        ha, hb = self.hurst.bounds
        sa, sb = self.stability.bounds
        if not (0.0 < ha <= hb < 1.0):
            raise ConfigurationError(f"Hurst range ({ha}, {hb}) must lie in (0, 1)")
        if not (0.0 < sa <= sb <= 2.0):
            raise ConfigurationError(f"stability range ({sa}, {sb}) must lie in (0, 2]")
        if self.kind in _CONSTANT_HURST and not self.hurst.is_constant:
            raise ConfigurationError(f"{self.kind} requires a constant Hurst parameter")
        if self.kind in _MULTIFRACTIONAL and not self.stability.is_constant:
            raise ConfigurationError(f"{self.kind} requires a constant stability index")
        if self.kind in {"LFSM", "LTFSM"} and not self.stability.is_constant:
            raise ConfigurationError(f"{self.kind} requires a constant stability index")
        if self.lam < 0:
            raise ConfigurationError("tempering rate must be nonnegative")
        if self.kind in _TEMPERED and self.lam == 0.0:
            raise ConfigurationError(f"{self.kind} requires tempering rate > 0")
        if self.kind not in _TEMPERED and self.lam != 0.0:
            raise ConfigurationError(f"{self.kind} is untempered; use lam=0 or a tempered kind")

    @property
    def alpha_bounds(self):
        return self.stability.bounds

    @property
    def hurst_bounds(self):
        return self.hurst.bounds

    @property
    def is_multifractional(self) -> bool:
        return self.kind in _MULTIFRACTIONAL

    def hurst_at(self, t: float) -> float:
        """Hurst value used by the kernel at process time t."""
        if self.is_multifractional:
            return float(self.hurst(t))
        return self.hurst.bounds[0]

    def with_lambda(self, lam: float) -> "ProcessSpec":
        kind = self.kind
        if lam > 0 and kind not in _TEMPERED:
            kind = {"LFSM": "LTFSM", "LFmSM": "LTFmSM", "LmFSM": "LTmFSM"}[kind]
        elif lam == 0 and kind in _TEMPERED:
            if kind == "YaglomNoise":
                raise DomainError("Yaglom noise requires tempering")
            kind = {"LTFSM": "LFSM", "LTFmSM": "LFmSM", "LTmFSM": "LmFSM"}[kind]
        return replace(self, kind=kind, lam=lam)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "hurst": self.hurst.to_dict(),
                "stability": self.stability.to_dict(), "lambda": self.lam}

    @staticmethod
    def from_dict(d: dict) -> "ProcessSpec":
        try:
            return ProcessSpec(kind=d["kind"],
                               hurst=ParamFunction.from_dict(d["hurst"]),
                               stability=ParamFunction.from_dict(d["stability"]),
                               lam=float(d.get("lambda", d.get("lam", 0.0))))
        except (KeyError, TypeError) as e:
            raise ConfigurationError(f"malformed process spec: {e}") from e

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "ProcessSpec":
        return ProcessSpec.from_dict(json.loads(text))


def constant_spec(kind: str, hurst: float, alpha: float, lam: float) -> ProcessSpec:
    """Convenience constructor for constant-parameter processes."""
    return ProcessSpec(kind, Constant(hurst), Constant(alpha), lam)


def tempered_power(w, lam: float, p):
    """e^{-lam w} w^p on w > 0, zero elsewhere (0^g = 0 convention)."""
    w = np.asarray(w, dtype=float)
    p = np.broadcast_to(np.asarray(p, dtype=float), w.shape)
    out = np.zeros(w.shape)
    m = w > 0
    with np.errstate(over="ignore"):
        out[m] = np.exp(-lam * w[m]) * w[m] ** p[m]
    return out


def _both_terms_region(mx, t, lam, p):
    """G on x < min(t, 0), via the anchor times expm1 of the log-ratio.

    mx = -x > 0. Exact: anchor * expm1(p*log1p(t/mx) - lam*t).
    """
    with np.errstate(over="ignore", divide="ignore"):
        ratio = t / mx
        arg = np.where(p == 0.0, 0.0, p * np.log1p(ratio)) - lam * t
        anchor = np.exp(-lam * mx) * mx ** p
        return anchor * np.expm1(arg)


def kernel(spec: ProcessSpec, t: float, x, hurst_value: Optional[float] = None):
    """Evaluate G(t, x) vectorized over x.

    hurst_value overrides the Hurst parameter (used to freeze H pointwise in
    the multifractional scaling identity). For every kind this is the
    differenced kernel; it vanishes identically at t = 0 and for x > max(t, 0).
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    H = float(hurst_value) if hurst_value is not None else spec.hurst_at(t)
    alpha = spec.stability(x)
    p = H - 1.0 / np.asarray(alpha, dtype=float)
    lam = spec.lam

    out = np.zeros(x.shape)
    lo = min(t, 0.0)
    m_both = x < lo
    if m_both.any():
        pb = p[m_both] if p.ndim else p
        out[m_both] = _both_terms_region(-x[m_both], t, lam, pb)
    if t > 0:
        m_first = (x >= 0.0) & (x < t)
        if m_first.any():
            pf = p[m_first] if p.ndim else p
            out[m_first] = tempered_power(t - x[m_first], lam, pf)
    elif t < 0:
        m_anchor = (x >= t) & (x < 0.0)
        if m_anchor.any():
            pa = p[m_anchor] if p.ndim else p
            out[m_anchor] = -tempered_power(-x[m_anchor], lam, pa)
    return float(out[0]) if scalar else out


def yaglom_kernel(spec: ProcessSpec, t: float, x):
    """Single-term tempered kernel e^{-lam (t-x)_+} (t-x)_+^{H - 1/alpha(x)}.

    Defined for the stationary Yaglom noise; requires tempering.
    """
    if spec.kind != "YaglomNoise":
        raise DomainError("yaglom_kernel requires a YaglomNoise spec")
    if spec.lam <= 0:
        raise DomainError("Yaglom noise requires tempering rate > 0")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    H = spec.hurst_at(t)
    p = H - 1.0 / np.asarray(spec.stability(x), dtype=float)
    out = tempered_power(t - x, spec.lam, p)
    return float(out[0]) if scalar else out


def increment_profile(w_trail, w_lead, alpha, H1: float, H0: float, lam: float,
                      delta: float):
    """Increment kernel from exact distances to the two kernel times.

    w_trail = t - x, w_lead = (t + delta) - x. Passing the distances directly
    keeps full precision when the singular points sit at large coordinates
    (marginal dependence exponents integrate in singularity-centred
    variables). Once w_trail exceeds a couple of deltas the two terms nearly
    cancel and the difference is evaluated in expm1 form.
    """
    w_trail = np.asarray(w_trail, dtype=float)
    w_lead = np.broadcast_to(np.asarray(w_lead, dtype=float), w_trail.shape)
    alpha = np.broadcast_to(np.asarray(alpha, dtype=float), w_trail.shape)
    p1 = H1 - 1.0 / alpha
    p0 = H0 - 1.0 / alpha
    out = np.zeros(w_trail.shape)

    m_far = w_trail >= 2.0 * delta
    if m_far.any():
        wf = w_trail[m_far]
        p1f, p0f = p1[m_far], p0[m_far]
        with np.errstate(over="ignore"):
            g0 = np.exp(-lam * wf) * wf ** p0f
            arg = p1f * np.log1p(delta / wf) + (p1f - p0f) * np.log(wf) - lam * delta
            out[m_far] = g0 * np.expm1(arg)
    m_near = (w_trail > 0.0) & (w_trail < 2.0 * delta)
    if m_near.any():
        out[m_near] = (tempered_power(w_lead[m_near], lam, p1[m_near])
                       - tempered_power(w_trail[m_near], lam, p0[m_near]))
    m_lead = (w_trail <= 0.0) & (w_lead > 0.0)
    if m_lead.any():
        out[m_lead] = tempered_power(w_lead[m_lead], lam, p1[m_lead])
    return out


def increment_kernel(spec: ProcessSpec, t: float, x, delta: float = 1.0):
    """Kernel of the increment X(t + delta) - X(t), delta > 0.

    Equals g_{t+delta}(x) - g_t(x) with
    g_s(x) = e^{-lam(s-x)_+}(s-x)_+^{H_s - 1/alpha(x)}; the t-independent
    anchor terms cancel. For the multifractional kinds the exponent uses
    H_{t+delta} on the leading term and H_t on the trailing one.
    """
    if delta <= 0:
        raise DomainError("increment step must be positive")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    alpha = np.asarray(spec.stability(x), dtype=float)
    out = increment_profile(t - x, (t + delta) - x, alpha,
                            spec.hurst_at(t + delta), spec.hurst_at(t),
                            spec.lam, delta)
    return float(out[0]) if scalar else out


def noise_kernel(spec: ProcessSpec, t: float, x):
    """Kernel of the unit-lag noise Y(t) = X(t+1) - X(t)."""
    return increment_kernel(spec, t, x, 1.0)
