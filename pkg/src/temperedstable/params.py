"""Parameter functions for time/space varying indices.

A handful of closed families (constant, clamped linear, sinusoid, piecewise
linear) so that the exact range [a, b] of every function is available
analytically. Both the stability index alpha(x) and the Hurst function H_t are
represented this way. All families evaluate vectorized over numpy arrays and
are continuous on the whole real line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ConfigurationError


class ParamFunction:
    """Base class. Subclasses implement __call__, bounds and affine reparam."""

    def __call__(self, x):
        raise NotImplementedError

    @property
    def bounds(self) -> Tuple[float, float]:
        """Exact (min, max) of the function over the reals."""
        raise NotImplementedError

    @property
    def is_constant(self) -> bool:
        a, b = self.bounds
        return a == b

    def compose_affine(self, scale: float, shift: float) -> "ParamFunction":
        """Return the same-family function x -> f(shift + scale * x), scale > 0."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_dict(d: dict) -> "ParamFunction":
        try:
            kind = d["type"]
        except (TypeError, KeyError):
            raise ConfigurationError(f"parameter function needs a 'type' tag: {d!r}")
        if kind not in _FAMILIES:
            raise ConfigurationError(f"unknown parameter function type {kind!r}")
        return _FAMILIES[kind]._from_dict(d)


@dataclass(frozen=True)
class Constant(ParamFunction):
    value: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.full(x.shape, self.value) if x.ndim else float(self.value)

    @property
    def bounds(self):
        return (self.value, self.value)

    def compose_affine(self, scale, shift):
        return self

    def to_dict(self):
        return {"type": "constant", "value": self.value}

    @staticmethod
    def _from_dict(d):
        return Constant(float(d["value"]))


@dataclass(frozen=True)
class LinearClamped(ParamFunction):
    """slope * x + intercept, clamped into [lo, hi]."""

    slope: float
    intercept: float
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ConfigurationError("LinearClamped needs lo <= hi")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.clip(self.slope * x + self.intercept, self.lo, self.hi)
        return out if x.ndim else float(out)

    @property
    def bounds(self):
        if self.slope == 0.0:
            v = min(max(self.intercept, self.lo), self.hi)
            return (v, v)
        return (self.lo, self.hi)

    def compose_affine(self, scale, shift):
        return LinearClamped(self.slope * scale, self.intercept + self.slope * shift,
                             self.lo, self.hi)

    def to_dict(self):
        return {"type": "linear_clamped", "slope": self.slope,
                "intercept": self.intercept, "lo": self.lo, "hi": self.hi}

    @staticmethod
    def _from_dict(d):
        return LinearClamped(float(d["slope"]), float(d["intercept"]),
                             float(d["lo"]), float(d["hi"]))


@dataclass(frozen=True)
class Sinusoidal(ParamFunction):
    """mean + amplitude * sin(2 pi x / period + phase)."""

    mean: float
    amplitude: float
    period: float
    phase: float = 0.0

    def __post_init__(self):
        if self.period <= 0:
            raise ConfigurationError("Sinusoidal needs period > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self.mean + self.amplitude * np.sin(2.0 * np.pi * x / self.period + self.phase)
        return out if x.ndim else float(out)

    @property
    def bounds(self):
        a = abs(self.amplitude)
        return (self.mean - a, self.mean + a)

    def compose_affine(self, scale, shift):
        if scale <= 0:
            raise ConfigurationError("compose_affine needs scale > 0")
        return Sinusoidal(self.mean, self.amplitude, self.period / scale,
                          self.phase + 2.0 * np.pi * shift / self.period)

    def to_dict(self):
        return {"type": "sinusoidal", "mean": self.mean, "amplitude": self.amplitude,
                "period": self.period, "phase": self.phase}

    @staticmethod
    def _from_dict(d):
        return Sinusoidal(float(d["mean"]), float(d["amplitude"]),
                          float(d["period"]), float(d.get("phase", 0.0)))


@dataclass(frozen=True)
class PiecewiseLinear(ParamFunction):
    """Interpolates sorted (x, y) knots; extends by the boundary value outside."""

    knots: Tuple[Tuple[float, float], ...]

    def __init__(self, knots: Sequence[Sequence[float]]):
        knots = tuple((float(x), float(y)) for x, y in knots)
        if not knots:
            raise ConfigurationError("PiecewiseLinear needs at least one knot")
        xs = [k[0] for k in knots]
        if any(x1 >= x2 for x1, x2 in zip(xs, xs[1:])):
            raise ConfigurationError("PiecewiseLinear knots must be strictly increasing in x")
        object.__setattr__(self, "knots", knots)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.array([k[0] for k in self.knots])
        ys = np.array([k[1] for k in self.knots])
        out = np.interp(x, xs, ys)
        return out if x.ndim else float(out)

    @property
    def bounds(self):
        ys = [k[1] for k in self.knots]
        return (min(ys), max(ys))

    def compose_affine(self, scale, shift):
        if scale <= 0:
            raise ConfigurationError("compose_affine needs scale > 0")
        return PiecewiseLinear([((x - shift) / scale, y) for x, y in self.knots])

    def to_dict(self):
        return {"type": "piecewise_linear", "knots": [list(k) for k in self.knots]}

    @staticmethod
    def _from_dict(d):
        return PiecewiseLinear(d["knots"])


_FAMILIES = {
    "constant": Constant,
    "linear_clamped": LinearClamped,
    "sinusoidal": Sinusoidal,
    "piecewise_linear": PiecewiseLinear,
}
