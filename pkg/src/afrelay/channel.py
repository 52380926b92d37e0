"""Channel parameters, Nakagami-m power-gain sampling and interferer aggregation.

All SNR and INR values here are linear power ratios; dB conversion lives
at the command-line boundary.
"""

import math
import numbers
from dataclasses import dataclass, replace
from typing import Sequence, Tuple

import numpy as np


def _positive(name, value):
    if not (isinstance(value, numbers.Real) and not isinstance(value, bool) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class HopParams:
    """Fading and interference parameters of one hop.

    alpha, beta: Nakagami shapes of the desired link and of the interferer.
    snr_desired: average SNR of the desired link (linear).
    inr: average INR of the interferer at the receiving node (linear).
    """

    alpha: float
    beta: float
    snr_desired: float
    inr: float

    def __post_init__(self):
        for name in ("alpha", "beta", "snr_desired", "inr"):
            _positive(name, getattr(self, name))


@dataclass(frozen=True)
class SystemConfig:
    hops: Tuple[HopParams, ...]
    power: float = 1.0
    mod_const: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "hops", tuple(self.hops))
        if len(self.hops) < 1:
            raise ValueError("a relay chain needs at least one hop")
        for h in self.hops:
            if not isinstance(h, HopParams):
                raise TypeError(f"hops must be HopParams, got {type(h).__name__}")
        _positive("power", self.power)
        _positive("mod_const", self.mod_const)

    @classmethod
    def symmetric(cls, alpha, beta, snr_desired, inr, n_hops, power=1.0, mod_const=2.0):
        if int(n_hops) != n_hops or n_hops < 1:
            raise ValueError(f"number of hops must be an integer >= 1, got {n_hops!r}")
        hop = HopParams(alpha, beta, snr_desired, inr)
        return cls((hop,) * int(n_hops), power, mod_const)

    @property
    def n_hops(self):
        return len(self.hops)

    @property
    def is_symmetric(self):
        return all(h == self.hops[0] for h in self.hops)

    def with_snr_scale(self, factor):
        """Copy with every hop's desired-link SNR multiplied by ``factor``."""
        hops = tuple(replace(h, snr_desired=h.snr_desired * factor) for h in self.hops)
        return replace(self, hops=hops)


@dataclass(frozen=True)
class InterfererSpec:
    shape: float
    inr: float
    count: int = 1

    def __post_init__(self):
        _positive("shape", self.shape)
        _positive("inr", self.inr)
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"count must be an integer >= 1, got {self.count!r}")


def standard_gamma(shape, size, rng):
    """Gamma(shape, 1) variates by the Marsaglia-Tsang squeeze method.

    For shape < 1 a Gamma(shape + 1) draw is multiplied by U**(1/shape).
    """
    if shape <= 0:
        raise ValueError(f"shape must be positive, got {shape}")
    if shape < 1.0:
        g = standard_gamma(shape + 1.0, size, rng)
        u = rng.random(size)
        return g * u ** (1.0 / shape)

    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(size)
    todo = np.arange(size)
    while todo.size:
        n = todo.size
        x = rng.standard_normal(n)
        v = 1.0 + c * x
        u = rng.random(n)
        ok = v > 0
        v = np.where(ok, v * v * v, 1.0)
        x2 = x * x
        with np.errstate(divide="ignore"):
            ok &= (u < 1.0 - 0.0331 * x2 * x2) | (
                np.log(u) < 0.5 * x2 + d * (1.0 - v + np.log(v))
            )
        out[todo[ok]] = d * v[ok]
        todo = todo[~ok]
    return out


def sample_power_gains(shape, mean_power, size, rng):
    """``size`` draws of a Nakagami-m power gain: Gamma(shape, mean_power/shape)."""
    return standard_gamma(shape, size, rng) * (mean_power / shape)


def sample_power_gain(shape, mean_power, rng):
    """One Nakagami-m power-gain draw with the given shape and mean."""
    return float(sample_power_gains(shape, mean_power, 1, rng)[0])


def aggregate_iid_interferers(spec: InterfererSpec) -> Tuple[float, float]:
    """Exact single-interferer equivalent of ``count`` i.i.d. interferers.

    Returns (shape, inr) = (m * N, N * inr).
    """
    return spec.shape * spec.count, spec.inr * spec.count


def aggregate_nonidentical_interferers(specs: Sequence[InterfererSpec]) -> Tuple[float, float]:
    """Gamma match of the first two moments of a sum of independent interferers."""
    specs = list(specs)
    if not specs:
        raise ValueError("need at least one interferer")
    if all((s.shape, s.inr) == (specs[0].shape, specs[0].inr) for s in specs):
        total = sum(s.count for s in specs)
        return aggregate_iid_interferers(InterfererSpec(specs[0].shape, specs[0].inr, total))
    mean = sum(s.count * s.inr for s in specs)
    var = sum(s.count * s.inr**2 / s.shape for s in specs)
    return mean**2 / var, mean
