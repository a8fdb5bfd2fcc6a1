"""Click-level Monte Carlo of the four-detector coincidence experiment.

Every pair produces exactly one joint click (ideal detectors), drawn from
the categorical law ``joint_probabilities``.  The joint outcome is sampled
as a whole.  Routing each photon independently through its own PBS would
lose the correlations entirely.

Seeding: event ``i`` of a run uses uniform ``i`` of ``OUTCOME_STREAM`` under
``config.seed`` (see :mod:`polcoherence.ensemble`).  The CHSH estimator runs
its four settings ``k = 0..3`` under ``derive_seed(config.seed, CHSH_SEED_KEY, k)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .coincidence import CANONICAL_CHSH, DetectorPair, joint_probabilities
from .ensemble import (
    OUTCOME_STREAM,
    EnsembleConfig,
    PairState,
    chunk_bounds,
    derive_seed,
    uniforms,
)
from .singles import AnalyzerSettings

CHSH_SEED_KEY = 2
# Order of the four settings inside S and their signs.
CHSH_TERMS = ((0, 0, +1), (0, 1, -1), (1, 0, +1), (1, 1, +1))


@dataclass(frozen=True)
class OutcomeCounts:
    n_ab: int
    n_ad: int
    n_cb: int
    n_cd: int

    def __post_init__(self):
        if min(self.n_ab, self.n_ad, self.n_cb, self.n_cd) < 0:
            raise ValueError("counts must be non-negative")

    @classmethod
    def from_array(cls, arr) -> "OutcomeCounts":
        return cls(*(int(x) for x in arr))

    @property
    def n_total(self) -> int:
        return self.n_ab + self.n_ad + self.n_cb + self.n_cd

    def as_array(self) -> np.ndarray:
        return np.array([self.n_ab, self.n_ad, self.n_cb, self.n_cd], dtype=np.int64)

    def get(self, pair) -> int:
        return getattr(self, "n_" + DetectorPair(pair).value.lower())

    def __add__(self, other: "OutcomeCounts") -> "OutcomeCounts":
        return OutcomeCounts.from_array(self.as_array() + other.as_array())


class RateEstimate(NamedTuple):
    value: float
    stderr: float
    n: int


class Marginals(NamedTuple):
    """Click probabilities of detectors D1..D4."""

    d1: float
    d2: float
    d3: float
    d4: float


def sample_outcomes(
    settings: AnalyzerSettings,
    state: PairState,
    config: EnsembleConfig,
    chunks: int = 1,
    workers: int | None = None,
) -> OutcomeCounts:
    """Tally ``config.n`` joint clicks at fixed analyzer settings.

    The result depends only on ``(settings, state, config)``, not on
    ``chunks`` or ``workers``.
    """
    cum = joint_probabilities(settings, state).cumulative()

    def run(bounds):
        a, b = bounds
        return kernels.tally(uniforms(config.seed, OUTCOME_STREAM, a, b), cum)

    bounds = chunk_bounds(config.n, chunks)
    if chunks == 1 or workers == 1:
        parts = map(run, bounds)
        total = sum(parts, np.zeros(4, dtype=np.int64))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            total = sum(pool.map(run, bounds), np.zeros(4, dtype=np.int64))
    return OutcomeCounts.from_array(total)


def estimate_rates(counts: OutcomeCounts, state: PairState) -> dict[DetectorPair, RateEstimate]:
    """Rates in ``I0**2`` units: click fraction times the flat total ``I0**2/2``."""
    n = counts.n_total
    if n == 0:
        raise ValueError("no events counted")
    scale = 0.5 * state.i0**2
    out = {}
    for pair in DetectorPair:
        p = counts.get(pair) / n
        out[pair] = RateEstimate(p * scale, math.sqrt(p * (1.0 - p) / n) * scale, n)
    return out


def correlation_estimate(counts: OutcomeCounts) -> RateEstimate:
    """``E = (n_ab + n_cd - n_ad - n_cb) / n`` with its binomial standard error."""
    n = counts.n_total
    if n == 0:
        raise ValueError("no events counted")
    e = (counts.n_ab + counts.n_cd - counts.n_ad - counts.n_cb) / n
    return RateEstimate(e, math.sqrt(max(1.0 - e * e, 0.0) / n), n)


def estimate_chsh(
    a: float = CANONICAL_CHSH[0],
    a2: float = CANONICAL_CHSH[1],
    b: float = CANONICAL_CHSH[2],
    b2: float = CANONICAL_CHSH[3],
    state: PairState | None = None,
    config: EnsembleConfig | None = None,
) -> RateEstimate:
    """Monte Carlo CHSH value from four independent runs of ``config.n`` pairs.

    ``n`` of the result is the total number of pairs over all four settings.
    """
    if state is None:
        state = PairState()
    if config is None:
        raise ValueError("config is required")
    ups, lows = (a, a2), (b, b2)
    s, var = 0.0, 0.0
    for k, (i, j, sign) in enumerate(CHSH_TERMS):
        sub = EnsembleConfig(config.n, derive_seed(config.seed, CHSH_SEED_KEY, k))
        est = correlation_estimate(sample_outcomes(AnalyzerSettings(ups[i], lows[j]), state, sub))
        s += sign * est.value
        var += est.stderr**2
    return RateEstimate(s, math.sqrt(var), 4 * config.n)


def singles_marginals(counts: OutcomeCounts) -> Marginals:
    n = counts.n_total
    if n == 0:
        raise ValueError("no events counted")
    return Marginals(
        (counts.n_ab + counts.n_ad) / n,
        (counts.n_ab + counts.n_cb) / n,
        (counts.n_cb + counts.n_cd) / n,
        (counts.n_ad + counts.n_cd) / n,
    )
