"""Pair-state preparation and seeded ensembles of pair events.

Random streams
--------------
Every stochastic quantity is drawn from a fixed-layout stream of uniforms.
Event ``i`` of stream ``s`` under master seed ``seed`` lives in block
``b = i // BLOCK_SIZE``; block ``b`` is generated by
``PCG64(SeedSequence(seed, spawn_key=(s, b)))`` and never depends on any
other block.  Any partition of ``[0, n)`` into chunks therefore reproduces
the monolithic stream bit for bit, whatever the chunk count or the number
of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .jones import JonesVector

TAU = 2.0 * math.pi
BLOCK_SIZE = 1 << 16

# Stream identifiers; distinct streams under the same seed are independent.
PHASE_STREAM = 0
OUTCOME_STREAM = 1


def _reduce_angle(x: float) -> float:
    r = math.fmod(x, TAU)
    if r < 0.0:
        r += TAU
    return 0.0 if r >= TAU else r


def _finite(name: str, x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return x


# ---------------------------------------------------------------- streams


def derive_seed(seed: int, *key: int) -> int:
    """Deterministic 64-bit child seed of ``seed`` for the integer path ``key``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _block(seed: int, stream: int, block: int) -> np.ndarray:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(block)))
    return np.random.Generator(np.random.PCG64(ss)).random(BLOCK_SIZE)


def uniforms(seed: int, stream: int, start: int, stop: int) -> np.ndarray:
    """Uniforms on [0, 1) for event indices ``start <= i < stop``."""
    if not 0 <= start <= stop:
        raise ValueError(f"bad event range [{start}, {stop})")
    if start == stop:
        return np.empty(0)
    first, last = start // BLOCK_SIZE, (stop - 1) // BLOCK_SIZE
    parts = []
    for b in range(first, last + 1):
        lo = max(start - b * BLOCK_SIZE, 0)
        hi = min(stop - b * BLOCK_SIZE, BLOCK_SIZE)
        parts.append(_block(seed, stream, b)[lo:hi])
    return np.concatenate(parts)


def chunk_bounds(n: int, chunks: int) -> list[tuple[int, int]]:
    """Split ``[0, n)`` into ``chunks`` contiguous, nearly equal pieces."""
    if chunks < 1:
        raise ValueError("chunks must be >= 1")
    edges = [n * k // chunks for k in range(chunks + 1)]
    return [(edges[k], edges[k + 1]) for k in range(chunks)]


def uniforms_chunked(
    seed: int, stream: int, n: int, chunks: int = 1, workers: int | None = None
) -> np.ndarray:
    """Same values as ``uniforms(seed, stream, 0, n)``, generated chunk-wise."""
    bounds = chunk_bounds(n, chunks)
    if chunks == 1 or workers == 1:
        parts = [uniforms(seed, stream, a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: uniforms(seed, stream, *ab), bounds))
    return np.concatenate(parts) if parts else np.empty(0)


# ---------------------------------------------------------------- state


@dataclass(frozen=True)
class PairState:
    """Prepared pair ``e0 (|HH> + exp(i psi) |VV>) / sqrt(2)``.

    ``zeta`` is the fixed phase shared by both photons of every pair.
    """

    psi: float = math.pi
    zeta: float = 0.0
    e0: float = 1.0

    @property
    def i0(self) -> float:
        return self.e0 * self.e0


def make_pair_state(psi: float = math.pi, zeta: float = 0.0, e0: float = 1.0) -> PairState:
    psi = _finite("psi", psi)
    zeta = _finite("zeta", zeta)
    e0 = _finite("e0", e0)
    if e0 <= 0.0:
        raise ValueError(f"e0 must be positive, got {e0}")
    return PairState(_reduce_angle(psi), _reduce_angle(zeta), e0)


def state_from_i0(i0: float, psi: float = math.pi, zeta: float = 0.0) -> PairState:
    i0 = _finite("i0", i0)
    if i0 <= 0.0:
        raise ValueError(f"i0 must be positive, got {i0}")
    return make_pair_state(psi, zeta, math.sqrt(i0))


# ---------------------------------------------------------------- events


@dataclass(frozen=True)
class PairEvent:
    index: int
    eta: float


@dataclass(frozen=True)
class EnsembleConfig:
    n: int
    seed: int = 0
    phase_distribution: str = "uniform"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.phase_distribution != "uniform":
            raise ValueError(
                f"unsupported phase distribution {self.phase_distribution!r}; only 'uniform'"
            )


class Ensemble(Sequence[PairEvent]):
    """Immutable sequence of pair events backed by an array of phases.

    ``ensemble.eta`` is the read-only phase array; indexing yields
    :class:`PairEvent` values.
    """

    def __init__(self, eta: np.ndarray, start: int = 0):
        eta = np.array(eta, dtype=float)
        if eta.ndim != 1:
            raise ValueError("eta must be one-dimensional")
        eta.setflags(write=False)
        self._eta = eta
        self._start = start

    @classmethod
    def shared_phase(cls, n: int, phase: float) -> "Ensemble":
        """``n`` pairs that all carry the same phase, i.e. a coherent ensemble."""
        if n < 1:
            raise ValueError("n must be >= 1")
        return cls(np.full(n, _reduce_angle(_finite("phase", phase))))

    @property
    def eta(self) -> np.ndarray:
        return self._eta

    def __len__(self) -> int:
        return self._eta.size

    def __getitem__(self, i):
        if isinstance(i, slice):
            start, _, step = i.indices(len(self))
            if step != 1:
                raise ValueError("only contiguous slices are supported")
            return Ensemble(self._eta[i], self._start + start)
        i = range(len(self))[i]
        return PairEvent(self._start + i, float(self._eta[i]))

    def __iter__(self) -> Iterator[PairEvent]:
        for i, e in enumerate(self._eta.tolist()):
            yield PairEvent(self._start + i, e)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ensemble):
            return NotImplemented
        return self._start == other._start and np.array_equal(self._eta, other._eta)

    def __repr__(self) -> str:
        return f"Ensemble(n={len(self)})"


def _phases(u: np.ndarray) -> np.ndarray:
    eta = TAU * u
    eta[eta >= TAU] = 0.0
    return eta


def draw_ensemble(
    config: EnsembleConfig, chunks: int = 1, workers: int | None = None
) -> Ensemble:
    """Draw ``config.n`` pair events with phases uniform on [0, 2*pi)."""
    u = uniforms_chunked(config.seed, PHASE_STREAM, config.n, chunks, workers)
    return Ensemble(_phases(u))


def draw_ensemble_chunk(config: EnsembleConfig, start: int, stop: int) -> Ensemble:
    """Events ``start <= i < stop`` of the ensemble ``draw_ensemble(config)``."""
    if not 0 <= start <= stop <= config.n:
        raise ValueError(f"chunk [{start}, {stop}) outside ensemble of size {config.n}")
    return Ensemble(_phases(uniforms(config.seed, PHASE_STREAM, start, stop)), start)


class Arm(str, Enum):
    UPPER = "upper"
    LOWER = "lower"


def arm_field(state: PairState, event, arm: Arm | str = Arm.UPPER) -> JonesVector:
    """Field entering an analyzer: ``(e0/sqrt 2) (H + exp(i(psi + eta)) V)``.

    For the reference preparation ``psi = pi`` this is ``(e0/sqrt 2)(H - exp(i eta) V)``.
    Both arms of one pair see the same field.  ``event`` may be a
    :class:`PairEvent` or a whole :class:`Ensemble` (batched).
    """
    Arm(arm)
    eta = np.asarray(event.eta, dtype=float)
    amp = state.e0 / math.sqrt(2.0)
    return JonesVector.from_components(
        np.full(eta.shape, amp, dtype=complex), amp * np.exp(1j * (state.psi + eta))
    )


def phase_washout(ensemble: Ensemble) -> float:
    """``|sum_j cos eta_j| / n``; vanishes for a fully incoherent ensemble."""
    if len(ensemble) == 0:
        raise ValueError("empty ensemble")
    return abs(kernels.cos_sum(ensemble.eta, 0.0)) / len(ensemble)
