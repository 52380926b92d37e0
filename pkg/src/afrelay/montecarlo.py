"""Monte-Carlo simulation of the multi-hop chain.

Trials are split into fixed-size chunks. Chunk ``i`` draws from its own
Philox stream keyed by (seed, i), so results do not depend on how many
workers process the chunks. Per-chunk event counts are reduced in chunk
order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .analysis import upper_bound_cdf_general
from .channel import SystemConfig, sample_power_gains
from .sir import end_to_end_sir_array

DEFAULT_CHUNK = 1 << 16
RELIABILITY_EVENTS = 100


class ReliabilityError(ValueError):
    """Requested estimate lies below the Monte-Carlo reliability floor."""


@dataclass(frozen=True)
class McConfig:
    trials: int
    seed: int = 0
    chunk: int = DEFAULT_CHUNK
    workers: int = 1

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be an integer >= 1, got {self.trials!r}")
        if int(self.chunk) != self.chunk or self.chunk < 1:
            raise ValueError(f"chunk must be an integer >= 1, got {self.chunk!r}")
        if self.chunk > self.trials:
            raise ValueError(f"chunk ({self.chunk}) exceeds trials ({self.trials})")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers!r}")

    @classmethod
    def with_default_chunk(cls, trials, seed=0, workers=1):
        return cls(trials, seed, min(DEFAULT_CHUNK, trials), workers)

    def chunk_sizes(self):
        full, rest = divmod(self.trials, self.chunk)
        return [self.chunk] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trials: int

    @classmethod
    def from_count(cls, count, trials):
        p = count / trials
        return cls(p, math.sqrt(p * (1.0 - p) / trials), trials)


class E2eBatch(NamedTuple):
    e2e: np.ndarray
    upper: np.ndarray
    lower: np.ndarray


def chunk_rng(seed, index):
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(ss))


def sample_hop_sirs(config: SystemConfig, n, rng):
    """Per-hop SIR draws, shape (n, K).

    Draw order per hop: n desired gains, then n interferer gains. Gains
    are Gamma(shape, 1) draws rescaled afterwards, so configs that differ
    only in mean powers consume the stream identically.
    """
    out = np.empty((n, config.n_hops))
    for k, hop in enumerate(config.hops):
        f = sample_power_gains(hop.alpha, hop.snr_desired, n, rng)
        h = sample_power_gains(hop.beta, hop.inr, n, rng)
        bad = h <= 0
        while bad.any():
            # probability-zero event; redraw the affected interferer gains
            h[bad] = sample_power_gains(hop.beta, hop.inr, int(bad.sum()), rng)
            bad = h <= 0
        out[:, k] = config.power * f / h
    return out


def _run_chunks(fn, mc: McConfig):
    sizes = mc.chunk_sizes()
    jobs = [(i, n) for i, n in enumerate(sizes)]
    if mc.workers == 1:
        return [fn(i, n) for i, n in jobs]
    with ThreadPoolExecutor(max_workers=mc.workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def sample_e2e_batch(config: SystemConfig, mc: McConfig) -> E2eBatch:
    """Exact end-to-end SIR with its lower and upper bounds for every trial."""
    def one(i, n):
        g = sample_hop_sirs(config, n, chunk_rng(mc.seed, i))
        upper = g.min(axis=1)
        return end_to_end_sir_array(g), upper, upper / config.n_hops

    parts = _run_chunks(one, mc)
    return E2eBatch(*(np.concatenate([p[j] for p in parts]) for j in range(3)))


def _counts(config, thresholds, mc, statistic):
    thresholds = np.asarray(thresholds, dtype=float)

    def one(i, n):
        g = sample_hop_sirs(config, n, chunk_rng(mc.seed, i))
        stats = statistic(g)
        return [np.count_nonzero(s[:, None] < thresholds[None, :], axis=0) for s in stats]

    parts = _run_chunks(one, mc)
    n_stats = len(parts[0])
    return [sum(p[j].astype(np.int64) for p in parts) for j in range(n_stats)]


def _e2e_only(g):
    return (end_to_end_sir_array(g),)


def simulate_outage(config: SystemConfig, threshold, mc: McConfig) -> McEstimate:
    """Empirical P(end-to-end SIR < threshold)."""
    (count,) = _counts(config, [threshold], mc, _e2e_only)
    return McEstimate.from_count(int(count[0]), mc.trials)


def simulate_outage_sweep(config: SystemConfig, threshold, snr_scales: Sequence[float], mc: McConfig):
    """Outage at each scaling of the desired-link SNRs, from one set of draws.

    Scaling every desired SNR by s scales every hop SIR (and the end-to-end
    SIR) by s, so the outage at scale s is P(e2e(1) < threshold / s).
    """
    scales = np.asarray(snr_scales, dtype=float)
    (counts,) = _counts(config, threshold / scales, mc, _e2e_only)
    return [McEstimate.from_count(int(c), mc.trials) for c in counts]


def simulate_bound_outages(config: SystemConfig, threshold, mc: McConfig):
    """Empirical CDFs of the upper and lower SIR bounds at ``threshold``."""
    K = config.n_hops

    def stats(g):
        upper = g.min(axis=1)
        return upper, upper / K

    up, low = _counts(config, [threshold], mc, stats)
    return (McEstimate.from_count(int(up[0]), mc.trials),
            McEstimate.from_count(int(low[0]), mc.trials))


def estimate_diversity_slope(config: SystemConfig, threshold, snr_points_db, mc: McConfig):
    """Least-squares slope of log10(outage) against the desired-link SNR in dB/10.

    ``snr_points_db`` scale every hop's desired SNR by 10**(dB/10). Every
    point must have closed-form outage lower bound of at least
    100 / trials, else :class:`ReliabilityError`.
    """
    pts = np.asarray(snr_points_db, dtype=float)
    if pts.size < 2 or np.unique(pts).size < 2:
        raise ReliabilityError("need at least two distinct SNR points to fit a slope")
    scales = 10.0 ** (pts / 10.0)
    floor = RELIABILITY_EVENTS / mc.trials
    for db, s in zip(pts, scales):
        expected = upper_bound_cdf_general(config.with_snr_scale(s), threshold)
        if expected < floor:
            raise ReliabilityError(
                f"expected outage {expected:.3g} at {db} dB is below the floor {floor:.3g}"
            )
    est = simulate_outage_sweep(config, threshold, scales, mc)
    y = np.log10([e.mean for e in est])
    slope, _ = np.polyfit(pts / 10.0, y, 1)
    return float(slope)
