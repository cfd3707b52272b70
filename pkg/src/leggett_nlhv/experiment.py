"""Finite-statistics simulation of the polarization-correlation experiment.

Pairs are split into fixed-size blocks; block ``k`` draws from the Philox
substream keyed by ``(seed, k)``.  Counts are summed in block order, so the
result depends only on ``(seed, pairs, settings)`` and never on how many
workers processed the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ._random import check_seed, substream
from .errors import InvalidConfigError, InvalidDirectionError
from .leggett import analyzer_pair, bounds_closed_form, check_angle
from .poincare import BlochVector, require_unit
from .twophoton import PARITIES, OutcomeProbabilities, Parity, joint_probabilities, state_for

BLOCK_SIZE = 1 << 16
# joint probabilities at or below this are rounding residue of exact zeros
_ZERO_PROB = 1e-15


@dataclass(frozen=True)
class RunConfig:
    parity: Parity
    a: BlochVector
    b: BlochVector
    pairs: int
    seed: int = 0

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise InvalidConfigError(f"parity must be 'odd' or 'even', got {self.parity!r}")
        if isinstance(self.pairs, bool) or int(self.pairs) != self.pairs or self.pairs < 1:
            raise InvalidConfigError(f"pairs must be a positive integer, got {self.pairs!r}")
        try:
            a = BlochVector(*require_unit(self.a, "a"))
            b = BlochVector(*require_unit(self.b, "b"))
            check_seed(self.seed)
        except (InvalidDirectionError, TypeError, ValueError) as exc:
            raise InvalidConfigError(str(exc)) from None
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "pairs", int(self.pairs))
        object.__setattr__(self, "seed", int(self.seed))


class SampleCounts(NamedTuple):
    n_pp: int
    n_pm: int
    n_mp: int
    n_mm: int

    @property
    def total(self) -> int:
        return self.n_pp + self.n_pm + self.n_mp + self.n_mm


@dataclass(frozen=True)
class EstimateReport:
    e_hat: float
    std_err: float
    violation_sigma: Optional[float] = None


def sampling_cdf(probs: OutcomeProbabilities) -> np.ndarray:
    """Cumulative distribution over ``(++, +-, -+, --)`` with zero-probability outcomes unreachable."""
    p = np.clip(probs.as_array(), 0.0, None)
    p[p <= _ZERO_PROB] = 0.0
    cdf = np.cumsum(p / p.sum())
    # everything from the last reachable outcome on is pinned to exactly 1
    cdf[int(np.flatnonzero(p)[-1]):] = 1.0
    return cdf


def _block_counts(cdf: np.ndarray, seed: int, block: int, size: int) -> np.ndarray:
    u = substream(seed, block).random(size)
    # side="right": an outcome k is drawn iff cdf[k-1] <= u < cdf[k]
    return np.bincount(np.searchsorted(cdf, u, side="right"), minlength=4)


def sample_run(cfg: RunConfig, workers: int = 1) -> SampleCounts:
    """Draw ``cfg.pairs`` outcome pairs from the quantum joint distribution."""
    if workers < 1:
        raise InvalidConfigError(f"workers must be >= 1, got {workers!r}")
    cdf = sampling_cdf(joint_probabilities(state_for(cfg.parity), cfg.a, cfg.b))
    n_blocks = -(-cfg.pairs // BLOCK_SIZE)
    sizes = [min(BLOCK_SIZE, cfg.pairs - k * BLOCK_SIZE) for k in range(n_blocks)]

    def job(k):
        return _block_counts(cdf, cfg.seed, k, sizes[k])

    if workers == 1 or n_blocks == 1:
        parts = [job(k) for k in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(n_blocks)))
    total = np.sum(parts, axis=0)
    return SampleCounts(*(int(c) for c in total))


def estimate_E(counts: SampleCounts) -> EstimateReport:
    """Correlation estimate and its binomial standard error.

    ``std_err = sqrt((1 - e_hat^2) / N)``, except that a run with
    ``|e_hat| = 1`` reports ``1/N`` instead of zero.
    """
    n = counts.total
    if n < 1:
        raise InvalidConfigError("cannot estimate a correlation from zero pairs")
    e_hat = (counts.n_pp - counts.n_pm - counts.n_mp + counts.n_mm) / n
    var = max(0.0, 1.0 - e_hat * e_hat)
    std_err = math.sqrt(var / n) if var > 0.0 else 1.0 / n
    return EstimateReport(e_hat, std_err)


def significance(phi: float, estimate: EstimateReport) -> float:
    """Excess of ``-e_hat`` beyond the closed-form bound, in standard errors.

    Positive means outside ``[lower, upper]``; the larger of the two one-sided
    exceedances is returned, so values inside the interval come out negative.
    """
    return bounds_closed_form(phi).signed_excess(-estimate.e_hat) / estimate.std_err


def simulate(
    phi: float,
    pairs: int,
    seed: int,
    *,
    parity: Parity = "odd",
    degrees: bool = False,
    workers: int = 1,
) -> tuple[SampleCounts, EstimateReport]:
    """Run with linear analyzers at relative angle ``phi``; return the counts and the scored estimate."""
    phi = check_angle(phi, degrees)
    a, b = analyzer_pair(phi)
    counts = sample_run(RunConfig(parity, a, b, pairs, seed), workers=workers)
    est = estimate_E(counts)
    return counts, EstimateReport(est.e_hat, est.std_err, significance(phi, est))


def violation_significance(phi: float, pairs: int, seed: int, **kwargs) -> EstimateReport:
    return simulate(phi, pairs, seed, **kwargs)[1]


def repeat_runs(phi: float, pairs: int, seeds: Sequence[int], parity: Parity = "odd") -> tuple[np.ndarray, np.ndarray]:
    """``(e_hat, std_err)`` arrays for one run per seed at analyzer angle ``phi`` (radians)."""
    a, b = analyzer_pair(check_angle(phi))
    e, se = [], []
    for s in seeds:
        est = estimate_E(sample_run(RunConfig(parity, a, b, pairs, s)))
        e.append(est.e_hat)
        se.append(est.std_err)
    return np.array(e), np.array(se)
