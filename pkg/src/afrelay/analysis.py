"""Closed-form bound CDFs, outage bounds and high-SNR gains.

The end-to-end SIR of a K-hop chain is sandwiched between min(g_i)/K and
min(g_i). The CDF of the minimum follows from order statistics of the
per-hop beta-prime SIRs; the lower-bound CDF is the same function at K*x.
"""

import math
from dataclasses import dataclass

from . import specfun
from .channel import HopParams, SystemConfig
from .sir import hop_scale, hop_sir_cdf, worst_hop

LOG_SPACE_ALPHA = 20.0


@dataclass(frozen=True)
class AsymptoticParams:
    """Small-x behaviour of the bound PDF: f(x) ~ b * x**t."""

    t: float
    b: float


@dataclass(frozen=True)
class GainReport:
    diversity: float
    coding: float


def _min_cdf(cdfs, repeat=1):
    # 1 - prod(1 - F_i), accurate when every F_i is tiny
    log_surv = sum(math.log1p(-f) for f in cdfs) * repeat
    return -math.expm1(log_surv)


def upper_bound_cdf_general(config: SystemConfig, x) -> float:
    """CDF of min_i g_i from the exact product over hops."""
    return _min_cdf(hop_sir_cdf(h, config.power, x) for h in config.hops)


def upper_bound_cdf_symmetric(alpha, beta, snr_desired, inr, power, n_hops, x) -> float:
    hop = HopParams(alpha, beta, snr_desired, inr)
    return _min_cdf([hop_sir_cdf(hop, power, x)], repeat=n_hops)


def upper_bound_cdf_worst_hop(config: SystemConfig, x) -> float:
    """Approximate CDF of min_i g_i treating every hop as the worst one."""
    hop = config.hops[worst_hop(config)]
    return _min_cdf([hop_sir_cdf(hop, config.power, x)], repeat=config.n_hops)


_UPPER = {
    "general": upper_bound_cdf_general,
    "worst_hop": upper_bound_cdf_worst_hop,
}


def upper_bound_cdf(config: SystemConfig, x, method="general") -> float:
    try:
        fn = _UPPER[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {sorted(_UPPER)}") from None
    return fn(config, x)


def lower_bound_cdf(config: SystemConfig, x, method="general") -> float:
    """CDF of min_i g_i / K, i.e. the upper-bound CDF evaluated at K*x."""
    return upper_bound_cdf(config, config.n_hops * x, method)


def lower_bound_cdf_symmetric(alpha, beta, snr_desired, inr, power, n_hops, x) -> float:
    return upper_bound_cdf_symmetric(alpha, beta, snr_desired, inr, power, n_hops, n_hops * x)


def outage_bounds(config: SystemConfig, threshold, method="general"):
    """(low, high) bracket on the outage probability at SIR threshold ``threshold``."""
    if not threshold > 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    low = upper_bound_cdf(config, threshold, method)
    high = lower_bound_cdf(config, threshold, method)
    return low, high


def asymptotic_params(alpha, beta, a3, n_hops) -> AsymptoticParams:
    """Leading term of the bound PDF near zero for a symmetric chain."""
    log_b = math.log(n_hops) + alpha * math.log(a3) - specfun.log_beta(alpha, beta)
    return AsymptoticParams(t=alpha - 1.0, b=math.exp(log_b))


def asymptotic_outage(config: SystemConfig, x) -> float:
    """Leading small-x term of the upper-bound CDF.

    Sums (a2 x)^alpha / (alpha B(alpha, beta)) over the hops with the
    smallest alpha; for a symmetric chain this is b x^(t+1) / (t+1).
    """
    a_min = min(h.alpha for h in config.hops)
    total = 0.0
    for h in config.hops:
        if h.alpha != a_min:
            continue
        z = hop_scale(h, config.power) * x
        total += math.exp(
            h.alpha * math.log(z) - math.log(h.alpha) - specfun.log_beta(h.alpha, h.beta)
        )
    return total


def wang_giannakis_gains(t, b, mod_const) -> GainReport:
    """Diversity and coding gains from a PDF that behaves like b x^t near 0."""
    log_inner = (
        t * math.log(2.0) + math.log(b) + specfun.log_gamma(t + 1.5)
        - 0.5 * math.log(math.pi) - math.log(t + 1.0)
    )
    return GainReport(diversity=t + 1.0, coding=mod_const * math.exp(-log_inner / (t + 1.0)))


def gains(alpha, beta, snr_desired, inr, power, n_hops, mod_const) -> GainReport:
    """Diversity and coding gain of a symmetric chain."""
    if alpha > LOG_SPACE_ALPHA:
        log_inner = (
            0.5 * math.log(math.pi) + math.log(alpha) + specfun.log_beta(alpha, beta)
            - (alpha - 1.0) * math.log(2.0) - math.log(n_hops)
            - specfun.log_gamma(alpha + 0.5)
        )
        inner = math.exp(log_inner / alpha)
    else:
        inner = (
            math.sqrt(math.pi) * alpha * specfun.beta(alpha, beta)
            / (2.0 ** (alpha - 1.0) * n_hops * math.exp(specfun.log_gamma(alpha + 0.5)))
        ) ** (1.0 / alpha)
    scale = mod_const * power * beta * snr_desired / (alpha * inr)
    return GainReport(diversity=alpha, coding=scale * inner)


def gains_rayleigh_desired(snr_desired, inr, power, n_hops, mod_const) -> GainReport:
    """Gains when every desired link is Rayleigh faded (alpha = 1)."""
    return GainReport(
        diversity=1.0,
        coding=2.0 * mod_const * power * snr_desired / (n_hops * inr),
    )


def gains_rayleigh_interference(alpha, snr_desired, inr, power, n_hops, mod_const) -> GainReport:
    """Gains when every interferer is Rayleigh faded (beta = 1)."""
    inner = (
        math.sqrt(math.pi)
        / (2.0 ** (alpha - 1.0) * n_hops * math.exp(specfun.log_gamma(alpha + 0.5)))
    ) ** (1.0 / alpha)
    return GainReport(
        diversity=alpha,
        coding=mod_const * power * snr_desired / (alpha * inr) * inner,
    )


def config_gains(config: SystemConfig) -> GainReport:
    """Gains of a chain; non-symmetric chains use the worst hop for every hop."""
    hop = config.hops[0] if config.is_symmetric else config.hops[worst_hop(config)]
    return gains(hop.alpha, hop.beta, hop.snr_desired, hop.inr,
                 config.power, config.n_hops, config.mod_const)
