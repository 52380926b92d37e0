"""Per-hop and end-to-end signal-to-interference ratios.

Each hop's SIR P|f|^2/|h|^2 is a scaled ratio of Gamma variables, i.e.
beta-prime distributed with shapes (alpha, beta) and scale 1/a2, where
a2 = alpha * inr / (power * beta * snr_desired).
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import specfun
from .channel import HopParams, SystemConfig


class DegenerateInputError(ValueError):
    pass


@dataclass(frozen=True)
class SirBounds:
    lower: float
    upper: float


def hop_sir(power, desired_gain, interferer_gain):
    if interferer_gain <= 0:
        raise DegenerateInputError("interferer gain must be positive")
    if desired_gain < 0:
        raise ValueError(f"desired gain must be non-negative, got {desired_gain}")
    return power * desired_gain / interferer_gain


def end_to_end_sir(hop_sirs: Sequence[float]) -> float:
    """Harmonic combination (sum 1/g_i)^-1 of the per-hop SIRs.

    Evaluated as g_min / sum(g_min / g_i) so that in floating point the
    result always lies in [g_min / K, g_min]; zero if any hop SIR is zero.
    """
    g = [float(v) for v in hop_sirs]
    if not g:
        raise ValueError("need at least one hop SIR")
    if any(v < 0 for v in g):
        raise ValueError("hop SIRs must be non-negative")
    g_min = min(g)
    if g_min == 0.0:
        return 0.0
    return g_min / math.fsum(g_min / v for v in g)


def sir_bounds(hop_sirs: Sequence[float]) -> SirBounds:
    g = [float(v) for v in hop_sirs]
    if not g:
        raise ValueError("need at least one hop SIR")
    upper = min(g)
    return SirBounds(lower=upper / len(g), upper=upper)


def hop_scale(hop: HopParams, power) -> float:
    """The beta-prime rate a2 = alpha * inr / (power * beta * snr_desired)."""
    return (hop.alpha * hop.inr) / (power * hop.beta * hop.snr_desired)


def hop_sir_pdf(hop: HopParams, power, x) -> float:
    if x < 0:
        raise specfun.DomainError(f"x must be non-negative, got {x}")
    a2 = hop_scale(hop, power)
    alpha, beta = hop.alpha, hop.beta
    if x == 0:
        if alpha < 1:
            raise specfun.DomainError("density diverges at 0 when alpha < 1")
        return a2 / specfun.beta(alpha, beta) if alpha == 1 else 0.0
    z = a2 * x
    log_pdf = (
        math.log(a2)
        - specfun.log_beta(alpha, beta)
        + (alpha - 1.0) * math.log(z)
        - (alpha + beta) * math.log1p(z)
    )
    return math.exp(log_pdf)


def sir_cdf_from_scale(alpha, beta, z, route="hypergeometric"):
    """CDF of a beta-prime(alpha, beta) variable at z (unit scale).

    route="hypergeometric" evaluates z^a/(a B(a,b)) 2F1(a, a+b; a+1; -z);
    route="beta" evaluates I_{z/(1+z)}(a, b). The two are independent.
    """
    if z < 0:
        raise specfun.DomainError(f"argument must be non-negative, got {z}")
    if z == 0:
        return 0.0
    if route == "hypergeometric":
        log_f = (
            alpha * math.log(z)
            - math.log(alpha)
            - specfun.log_beta(alpha, beta)
            + specfun.log_gauss_2f1_neg(alpha, alpha + beta, alpha + 1.0, -z)
        )
        return min(math.exp(log_f), 1.0)
    if route == "beta":
        return specfun.reg_inc_beta(z / (1.0 + z), alpha, beta)
    raise ValueError(f"unknown route {route!r}")


def hop_sir_cdf(hop: HopParams, power, x, route="hypergeometric") -> float:
    if x < 0:
        raise specfun.DomainError(f"x must be non-negative, got {x}")
    return sir_cdf_from_scale(hop.alpha, hop.beta, hop_scale(hop, power) * x, route)


def hop_mean_sir(hop: HopParams, power) -> float:
    """Mean per-hop SIR; ``math.inf`` when beta <= 1 (the mean does not exist)."""
    if hop.beta <= 1:
        return math.inf
    return power * hop.beta * hop.snr_desired / ((hop.beta - 1.0) * hop.inr)


def worst_hop(config: SystemConfig) -> int:
    """0-based index of the hop with the smallest mean SIR.

    Hops with beta <= 1 have no finite mean; they outrank every finite-mean
    hop and are ordered among themselves by a2, largest first. Remaining
    ties go to the lowest index.
    """
    best_key, best_i = None, None
    for i, hop in enumerate(config.hops):
        mean = hop_mean_sir(hop, config.power)
        key = (0, -hop_scale(hop, config.power)) if math.isinf(mean) else (1, mean)
        if best_key is None or key < best_key:
            best_key, best_i = key, i
    return best_i


def end_to_end_sir_array(hop_sirs: np.ndarray) -> np.ndarray:
    """Row-wise end-to-end SIR for an array of shape (trials, K)."""
    g_min = hop_sirs.min(axis=1)
    safe = np.where(g_min > 0, g_min, 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = (safe[:, None] / hop_sirs).sum(axis=1)
    return np.where(g_min > 0, g_min / s, 0.0)
