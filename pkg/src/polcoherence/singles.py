"""First-order (singles) intensities at the four PBS ports.

Ports A and C are the transmitted/reflected outputs of the upper analyzer
(rotation ``theta``), B and D those of the lower analyzer (rotation ``xi``).
Detectors D1..D4 watch A, B, C, D respectively.

For a pair carrying ensemble phase ``eta`` the upper transmitted intensity
is ``I0 (1 + sin 2theta cos(psi + eta)) / 2``, i.e. ``I0 (1 - sin 2theta cos eta) / 2``
for the reference state ``psi = pi``.  The ``cos`` factor is the interference
between H-origin and V-origin amplitudes.

Two kinds of ensemble are contrasted:

* incoherent: every pair has its own random ``eta``; the cross term averages
  to zero and every port sits at ``I0/2`` for all analyzer angles;
* coherent (counterfactual): every pair shares one phase ``zeta``; the port
  intensity keeps the full ``sin 2theta`` fringe with visibility ``|cos(psi + zeta)|``.

Both are computed with the same per-event formula; only the phase assignment
differs.  The washout does not come from averaging amplitudes before
squaring.  Intensities are always squared per event first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import kernels
from .ensemble import Arm, Ensemble, PairState

__all__ = [
    "AnalyzerSettings",
    "SinglesPort",
    "PortValues",
    "SinglesReport",
    "transmitted_amplitude",
    "reflected_amplitude",
    "singles_intensity_event",
    "singles_ensemble",
    "coherent_singles_prediction",
    "visibility",
]


@dataclass(frozen=True)
class AnalyzerSettings:
    """Net polarization rotations of the upper (``theta``) and lower (``xi``) analyzers.

    Angles are stored as given (no reduction).  Array values are allowed and
    broadcast through every function in this package.
    """

    theta: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        for name in ("theta", "xi"):
            val = getattr(self, name)
            if not np.all(np.isfinite(np.asarray(val, dtype=float))):
                raise ValueError(f"{name} must be finite, got {val!r}")

    def angle(self, arm: Arm | str):
        return self.theta if Arm(arm) is Arm.UPPER else self.xi


class SinglesPort(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def arm(self) -> Arm:
        return Arm.UPPER if self in (SinglesPort.A, SinglesPort.C) else Arm.LOWER

    @property
    def transmitted(self) -> bool:
        return self in (SinglesPort.A, SinglesPort.B)


class PortValues(NamedTuple):
    a: float
    b: float
    c: float
    d: float

    def port(self, port):
        return getattr(self, SinglesPort(port).value.lower())


def _event_phase(state: PairState, event) -> np.ndarray | float:
    return state.psi + np.asarray(event.eta, dtype=float)


def transmitted_amplitude(settings: AnalyzerSettings, arm, event, state: PairState):
    """Amplitude at the H port: ``(e0/sqrt 2)(cos t + exp(i(psi+eta)) sin t)``."""
    t = settings.angle(arm)
    phase = np.exp(1j * _event_phase(state, event))
    return state.e0 / math.sqrt(2.0) * (np.cos(t) + phase * np.sin(t))


def reflected_amplitude(settings: AnalyzerSettings, arm, event, state: PairState):
    """Amplitude at the V port: ``(e0/sqrt 2)(sin t - exp(i(psi+eta)) cos t)``."""
    t = settings.angle(arm)
    phase = np.exp(1j * _event_phase(state, event))
    return state.e0 / math.sqrt(2.0) * (np.sin(t) - phase * np.cos(t))


def _port_intensity(i0, angle, phase, transmitted: bool):
    sign = 1.0 if transmitted else -1.0
    return 0.5 * i0 * (1.0 + sign * np.sin(2.0 * angle) * np.cos(phase))


def singles_intensity_event(settings: AnalyzerSettings, port, event, state: PairState):
    """Intensity at one port for a single event (or every event of an ensemble)."""
    port = SinglesPort(port)
    return _port_intensity(
        state.i0, settings.angle(port.arm), _event_phase(state, event), port.transmitted
    )


@dataclass(frozen=True)
class SinglesReport:
    """Ensemble-averaged port intensities, in the same units as ``I0``."""

    mean: PortValues
    stderr: PortValues
    n: int

    @property
    def total(self) -> float:
        return float(sum(self.mean))

    @property
    def mean_IA(self) -> float:
        return self.mean.a

    @property
    def mean_IB(self) -> float:
        return self.mean.b

    @property
    def mean_IC(self) -> float:
        return self.mean.c

    @property
    def mean_ID(self) -> float:
        return self.mean.d


def singles_ensemble(
    settings: AnalyzerSettings, ensemble: Ensemble, state: PairState
) -> SinglesReport:
    """Per-port sample means and standard errors over the events of ``ensemble``.

    ``settings`` must be scalar here; loop over settings for sweeps.
    """
    n = len(ensemble)
    if n == 0:
        raise ValueError("empty ensemble")
    s_up = math.sin(2.0 * float(settings.theta))
    s_lo = math.sin(2.0 * float(settings.xi))
    sums, sumsq = kernels.singles_moments(ensemble.eta, state.psi, s_up, s_lo, state.i0)
    half = 0.5 * state.i0
    means = half + sums / n
    if n > 1:
        var = np.maximum(sumsq - sums * sums / n, 0.0) / (n - 1)
        se = np.sqrt(var / n)
    else:
        se = np.full(4, np.nan)
    return SinglesReport(PortValues(*means.tolist()), PortValues(*se.tolist()), n)


def coherent_singles_prediction(
    settings: AnalyzerSettings, zeta: float | None, state: PairState
) -> PortValues:
    """Port intensities if every pair shared the single phase ``zeta``.

    This is the fringe a phase-coherent ensemble would show; ``zeta=None``
    uses ``state.zeta``.
    """
    zeta = state.zeta if zeta is None else zeta
    phase = state.psi + zeta
    return PortValues(
        _port_intensity(state.i0, settings.theta, phase, True),
        _port_intensity(state.i0, settings.xi, phase, True),
        _port_intensity(state.i0, settings.theta, phase, False),
        _port_intensity(state.i0, settings.xi, phase, False),
    )


def visibility(values) -> float:
    """Fringe visibility ``(max - min) / (max + min)`` of a sampled curve."""
    values = np.asarray(values, dtype=float)
    hi, lo = values.max(), values.min()
    if hi + lo == 0.0:
        return 0.0
    return float((hi - lo) / (hi + lo))
