"""Seeded Monte-Carlo estimation.

Two procedures live here:

* ``mcs_estimate`` samples joint failure states of the basic events and
  counts how often the target event occurs.
* ``ttf_ttr_study`` runs the alternating time-to-fail / time-to-repair
  renewal simulation for one component and reports its unavailability.

Random numbers come from numpy's PCG64 bit generator, which produces the
same stream on every platform.  Samples are drawn in fixed-size chunks;
chunk ``i`` uses the substream ``SeedSequence(seed, spawn_key=(i,))``, so
results do not depend on how many workers evaluate the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .ccd import ConsequenceBox, ConsequencePath, DecisionBox, Selector
from .errors import NonPositiveRate, UnknownEvent
from .eventtree import Branch, EtAtomic, Node
from .faulttree import And, Atomic, Not, Or, fold
from .oracle import target_leaves

ALGORITHM = "numpy.PCG64"
DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 20_200_101
CHUNK = 1 << 16
Z95 = 1.959963984540054


@dataclass(frozen=True)
class McsEstimate:
    mean: float
    stderr: float
    n: int
    seed: int
    hits: int
    ci95: tuple[float, float]
    algorithm: str = ALGORITHM

    @classmethod
    def from_counts(cls, hits: int, n: int, seed: int) -> "McsEstimate":
        mean = hits / n
        stderr = math.sqrt(mean * (1.0 - mean) / n)
        half = Z95 * stderr
        return cls(mean, stderr, n, seed, hits, (max(0.0, mean - half), min(1.0, mean + half)))

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "n": self.n,
            "seed": self.seed,
            "ci95": list(self.ci95),
            "algorithm": self.algorithm,
        }


def merge_estimates(estimates: Sequence[McsEstimate], seed: int | None = None) -> McsEstimate:
    hits = sum(e.hits for e in estimates)
    n = sum(e.n for e in estimates)
    return McsEstimate.from_counts(hits, n, estimates[0].seed if seed is None else seed)


def substream(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & ((1 << 64) - 1), spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


def indicator(target, cols: Mapping[str, np.ndarray], m: int) -> np.ndarray:
    """Boolean occurrence vector of ``target`` over ``m`` sampled states."""
    ones = lambda: np.ones(m, dtype=bool)  # noqa: E731
    zeros = lambda: np.zeros(m, dtype=bool)  # noqa: E731
    if isinstance(target, (Atomic, And, Or, Not)):
        return fold(target, cols.__getitem__, ones, zeros)
    if isinstance(target, DecisionBox):
        if target.selector == Selector.IRRELEVANT:
            return ones()
        failed = fold(target.failure, cols.__getitem__, ones, zeros)
        return failed if target.selector == Selector.NO else ~failed
    if isinstance(target, ConsequencePath):
        acc = ones()
        for b in target.boxes:
            acc &= indicator(b, cols, m)
        return acc
    if isinstance(target, ConsequenceBox):
        acc = zeros()
        for p in target.paths:
            acc |= indicator(p, cols, m)
        return acc
    if isinstance(target, EtAtomic):
        return indicator(target.event, cols, m)
    if isinstance(target, Node):
        acc = zeros()
        for c in target.children:
            acc |= indicator(c, cols, m)
        return acc
    if isinstance(target, Branch):
        acc = zeros()
        for c in target.children:
            acc |= indicator(c, cols, m)
        return indicator(target.condition, cols, m) & acc
    raise TypeError(f"cannot sample target {target!r}")


def _chunk_hits(target, ids: list[str], probs: np.ndarray, seed: int, index: int, m: int) -> int:
    rng = substream(seed, index)
    u = rng.random((m, len(ids)))
    failed = u < probs
    cols = {e: failed[:, k] for k, e in enumerate(ids)}
    return int(np.count_nonzero(indicator(target, cols, m)))


def mcs_estimate(target, assign: Mapping[str, float], n: int = DEFAULT_SAMPLES,
                 seed: int = DEFAULT_SEED, workers: int = 1) -> McsEstimate:
    """Estimate P(target) from ``n`` independent joint states."""
    n = int(n)
    if n < 1:
        raise ValueError("need at least one sample")
    ids = sorted(target_leaves(target))
    missing = [e for e in ids if e not in assign]
    if missing:
        raise UnknownEvent(f"no probability assigned to event(s) {', '.join(missing)}")
    probs = np.array([assign[e] for e in ids], dtype=float)
    sizes = [CHUNK] * (n // CHUNK) + ([n % CHUNK] if n % CHUNK else [])
    jobs = [(target, ids, probs, seed, i, m) for i, m in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda a: _chunk_hits(*a), jobs))
    else:
        counts = [_chunk_hits(*a) for a in jobs]
    return McsEstimate.from_counts(sum(counts), n, seed)


# --- renewal (TTF/TTR) simulation -----------------------------------------

def time_to_event(u: float, rate: float) -> float:
    """Inverse-transform exponential draw ``-ln(u) / rate``."""
    return -math.log(u) / rate


@dataclass(frozen=True)
class RenewalEstimate:
    unavailability: float
    cycles: int
    downtime: float
    horizon: float
    seed: int
    corrected: bool = False
    algorithm: str = field(default=ALGORITHM)

    def to_dict(self) -> dict:
        return {
            "unavailability": self.unavailability,
            "cycles": self.cycles,
            "downtime_h": self.downtime,
            "horizon_h": self.horizon,
            "seed": self.seed,
            "ttr_mode": "mean-time" if self.corrected else "repair-rate",
            "algorithm": self.algorithm,
        }


def ttf_ttr_study(rate: float, repair: float, horizon: float, seed: int = DEFAULT_SEED,
                  corrected: bool = False, batch: int = 4096) -> RenewalEstimate:
    """Fraction of ``[0, horizon]`` spent under repair.

    Up times are ``-ln(U) / rate`` (``rate`` in failures per hour).  By
    default repair times are ``-ln(U) / repair``, which treats ``repair`` as
    a repair rate; ``corrected=True`` uses ``-repair * ln(U)`` instead, with
    ``repair`` a mean repair time in hours.
    """
    if not rate > 0:
        raise NonPositiveRate(f"failure rate must be > 0, got {rate!r}")
    if not repair > 0:
        raise NonPositiveRate(f"repair parameter must be > 0, got {repair!r}")
    if not horizon > 0:
        raise ValueError(f"horizon must be > 0, got {horizon!r}")
    rng = substream(seed, 0)
    clock = 0.0
    down = 0.0
    cycles = 0
    while clock < horizon:
        u = 1.0 - rng.random((batch, 2))  # in (0, 1]
        ttf = -np.log(u[:, 0]) / rate
        ttr = -np.log(u[:, 1]) * repair if corrected else -np.log(u[:, 1]) / repair
        ends = clock + np.cumsum(ttf + ttr)
        starts = ends - ttr  # start of each repair interval
        overlap = np.clip(np.minimum(ends, horizon) - starts, 0.0, None)
        done = np.searchsorted(ends, horizon, side="left")  # cycles that end before horizon
        take = min(done + 1, batch)
        down += float(overlap[:take].sum())
        cycles += take
        clock = float(ends[take - 1])
    return RenewalEstimate(down / horizon, int(cycles), float(down), float(horizon), seed, corrected)


def renewal_unavailability(rate: float, repair: float, corrected: bool = False) -> float:
    """Long-run unavailability of the alternating renewal process above."""
    mean_up = 1.0 / rate
    mean_down = repair if corrected else 1.0 / repair
    return mean_down / (mean_up + mean_down)
