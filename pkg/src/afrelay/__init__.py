"""Outage and high-SNR analysis of multi-hop amplify-and-forward relaying
with Nakagami-m fading and co-channel interference."""

from .analysis import (
    AsymptoticParams,
    GainReport,
    asymptotic_params,
    gains,
    lower_bound_cdf,
    outage_bounds,
    upper_bound_cdf,
)
from .channel import HopParams, InterfererSpec, SystemConfig
from .montecarlo import McConfig, McEstimate, simulate_outage
from .sir import SirBounds, end_to_end_sir, hop_sir_cdf, hop_sir_pdf, sir_bounds

__version__ = "0.1.0"

__all__ = [
    "AsymptoticParams",
    "GainReport",
    "HopParams",
    "InterfererSpec",
    "McConfig",
    "McEstimate",
    "SirBounds",
    "SystemConfig",
    "asymptotic_params",
    "end_to_end_sir",
    "gains",
    "hop_sir_cdf",
    "hop_sir_pdf",
    "lower_bound_cdf",
    "outage_bounds",
    "simulate_outage",
    "sir_bounds",
    "upper_bound_cdf",
]
