"""Event-level Monte Carlo of both counting experiments.

Random streams are counter-based (Philox) and split from the master seed
with ``numpy.random.SeedSequence``. Work is cut into fixed-size chunks, and
chunk ``i`` always draws from substream ``i``, so the result does not depend
on how many workers ran it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .hbt import WavepacketConfig, as_eta
from .internal import overlap

HOM_OUTCOMES = ("coincidence", "bunched-D1", "bunched-D2")
CHUNK = 1 << 17
MIN_ACCEPTANCE = 0.01
MIN_EVENTS = 10_000


@dataclass(frozen=True)
class EventBatch:
    """Sampled events. HBT batches hold an (n, 2) array of (x1, x2);
    HOM batches hold integer outcome codes indexing ``HOM_OUTCOMES``."""

    seed: int
    kind: str
    events: np.ndarray
    acceptance_rate: float = 1.0
    params: dict = field(default_factory=dict, compare=False)

    @property
    def count(self) -> int:
        return int(len(self.events))

    def outcome_labels(self) -> list[str]:
        if self.kind != "hom":
            raise ValueError("outcome labels only exist for HOM batches")
        return [HOM_OUTCOMES[i] for i in self.events]


@dataclass(frozen=True)
class HistogramEstimate:
    bin_edges: np.ndarray
    counts: np.ndarray
    visibility: float
    std_error: float
    phase: float = 0.0
    n_events: int = 0


def _streams(seed: int, n_chunks: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(int(seed)).spawn(n_chunks)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _chunk_sizes(n: int) -> list[int]:
    sizes = [CHUNK] * (n // CHUNK)
    if n % CHUNK:
        sizes.append(n % CHUNK)
    return sizes


def _run_chunks(fn, n: int, seed: int, workers: int):
    sizes = _chunk_sizes(n)
    rngs = _streams(seed, len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, rngs, sizes))
    return [fn(r, m) for r, m in zip(rngs, sizes)]


def _check_n(n: int):
    if int(n) != n or n <= 0:
        raise ValueError(f"number of events must be a positive integer, got {n}")


def hom_outcome_probabilities(s: float) -> np.ndarray:
    """(coincidence, bunched at D1, bunched at D2) for overlap modulus ``s``."""
    s2 = s * s
    return np.array([(1.0 - s2) / 2.0, (1.0 + s2) / 4.0, (1.0 + s2) / 4.0])


def sample_hom(dA, dB, n: int, seed: int, workers: int = 1) -> EventBatch:
    _check_n(n)
    s = overlap(dA, dB).modulus
    cdf = np.cumsum(hom_outcome_probabilities(s))

    def draw(rng, m):
        return np.searchsorted(cdf, rng.random(m), side="right").clip(0, 2).astype(np.int8)

    events = np.concatenate(_run_chunks(draw, n, seed, workers))
    return EventBatch(seed=int(seed), kind="hom", events=events, params={"s": s})


def _hbt_chunk(cfg: WavepacketConfig, eta: int, s: float):
    # proposal: equal mixture of the two packet products (envelope x cosh
    # majorizes the full density by a factor of two); acceptance
    # probability (1 + eta s^2 cos(k v) / cosh(kappa v)) / 2
    sd = math.sqrt(1.0 / (4.0 * cfg.envelope_rate))
    k, kappa, x0 = cfg.fringe_wavenumber, cfg.cosh_rate, cfg.x0
    s2 = s * s

    def draw(rng, m):
        out = np.empty((m, 2))
        filled = proposed = 0
        while filled < m:
            want = m - filled
            batch = max(2 * want + 64, 1024)
            sign = np.where(rng.random(batch) < 0.5, 1.0, -1.0)
            z = rng.standard_normal((batch, 2)) * sd
            x1 = sign * x0 + z[:, 0]
            x2 = -sign * x0 + z[:, 1]
            v = x1 - x2
            accept_p = 0.5 * (1.0 + eta * s2 * np.cos(k * v) / np.cosh(kappa * v))
            kept = np.flatnonzero(rng.random(batch) < accept_p)
            take = kept[:want]
            proposed += int(kept[want - 1]) + 1 if len(kept) >= want else batch
            out[filled:filled + len(take), 0] = x1[take]
            out[filled:filled + len(take), 1] = x2[take]
            filled += len(take)
            if proposed > 1000 and filled / proposed < MIN_ACCEPTANCE:
                raise RuntimeError(f"acceptance rate {filled / proposed:.3g} below {MIN_ACCEPTANCE}")
        return out, proposed

    return draw


def sample_hbt(cfg: WavepacketConfig, eta, s: float, n: int, seed: int, workers: int = 1) -> EventBatch:
    """Rejection-sample coincidence positions from the normalized HBT density."""
    _check_n(n)
    eta = int(as_eta(eta))
    if not 0.0 <= s <= 1.0 + 1e-12:
        raise ValueError(f"overlap modulus must lie in [0, 1], got {s}")
    s = min(float(s), 1.0)
    parts = _run_chunks(_hbt_chunk(cfg, eta, s), n, seed, workers)
    events = np.concatenate([p[0] for p in parts])
    proposed = sum(p[1] for p in parts)
    rate = n / proposed
    if rate < MIN_ACCEPTANCE:
        raise RuntimeError(f"acceptance rate {rate:.3g} below {MIN_ACCEPTANCE}")
    return EventBatch(seed=int(seed), kind="hbt", events=events, acceptance_rate=rate,
                      params={"cfg": cfg, "eta": eta, "s": s})


# ---------------------------------------------------------------- estimator

def separation_bins(cfg: WavepacketConfig, bins_per_period: int = 50, periods: int = 3) -> np.ndarray:
    """Bin edges in x1 - x2 with one bin centred on zero, symmetric about it."""
    w = cfg.fringe_period / bins_per_period
    half = periods * bins_per_period // 2
    return (np.arange(-half, half + 2) - 0.5) * w


def _fit_design(cfg: WavepacketConfig, edges: np.ndarray) -> np.ndarray:
    """Expected per-bin probabilities of the two model components.

    Column 0: incoherent baseline (exact via the normal CDF, since the
    separation marginal is an equal mixture of N(+-2 x0, 1 / (2c))).
    Column 1: envelope * cos(k v) integrated across the bin.
    """
    c, k, x0 = cfg.envelope_rate, cfg.fringe_wavenumber, cfg.x0
    sd = math.sqrt(1.0 / (2.0 * c))
    base = 0.5 * (np.diff(stats.norm.cdf(edges, 2 * x0, sd)) + np.diff(stats.norm.cdf(edges, -2 * x0, sd)))
    mid = 0.5 * (edges[1:] + edges[:-1])
    w = np.diff(edges)
    # the separation marginal is Z^-1 exp(-c v^2 - 4 c x0^2)[cosh + V cos], Z = sqrt(pi / c)
    env = np.exp(-c * mid**2 - 4.0 * c * x0**2) / math.sqrt(math.pi / c)
    fringe = env * np.cos(k * mid) * w * np.sinc(k * w / (2.0 * math.pi))
    return np.column_stack([base, fringe])


def _fit(counts: np.ndarray, design: np.ndarray, sweeps: int = 3) -> tuple[float, float]:
    """Weighted linear least squares of counts on A * (baseline + b * fringe).

    Poisson weights come from the model expectation, refined over a few
    sweeps; weighting by the observed counts biases sparse bins.
    """
    mu = design[:, 0].copy()
    for _ in range(sweeps):
        weights = 1.0 / np.sqrt(np.maximum(mu, 1e-3 * mu.max()))
        coef, *_ = np.linalg.lstsq(design * weights[:, None], counts * weights, rcond=None)
        if not np.isfinite(coef).all() or coef[0] <= 0:
            raise RuntimeError("fringe fit did not converge")
        mu = design @ coef
    a, ab = coef
    return float(a), float(ab / a)


def estimate_visibility(batch: EventBatch, cfg: WavepacketConfig, bins_per_period: int = 50,
                        periods: int = 3, n_boot: int = 200, seed: int | None = None) -> HistogramEstimate:
    """Fit I(v) = A (1 + V cos(k v + phi)) to the histogram of x1 - x2.

    The envelope and incoherent cosh baseline are taken from ``cfg``; the
    fringe wavenumber k is fixed. Exchange symmetry makes the pattern even
    in v, so phi is 0 or pi and V is the modulus of the signed cosine
    amplitude. ``std_error`` is the bootstrap spread of that signed
    amplitude over ``n_boot`` resamples of the events.
    """
    if batch.kind != "hbt":
        raise ValueError("visibility estimation needs an HBT batch")
    n = batch.count
    if n < MIN_EVENTS:
        raise ValueError(f"need at least {MIN_EVENTS} events, got {n}")
    edges = separation_bins(cfg, bins_per_period, periods)
    v = batch.events[:, 0] - batch.events[:, 1]
    counts, _ = np.histogram(v, bins=edges)
    design = _fit_design(cfg, edges) * n
    a, signed = _fit(counts.astype(float), design)

    # resampling all n events = multinomial over (bins, outside range)
    p = np.append(counts, n - counts.sum()) / n
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(
        [int(batch.seed), 0xB007] if seed is None else int(seed))))
    boots = np.empty(n_boot)
    for i, draw in enumerate(rng.multinomial(n, p, size=n_boot)):
        boots[i] = _fit(draw[:-1].astype(float), design)[1]
    return HistogramEstimate(
        bin_edges=edges,
        counts=counts,
        visibility=abs(signed),
        std_error=float(np.std(boots, ddof=1)),
        phase=0.0 if signed >= 0 else math.pi,
        n_events=n,
    )
