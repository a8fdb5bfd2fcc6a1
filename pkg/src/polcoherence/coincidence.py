"""Second-order (coincidence) correlations between the two analyzers.

The coincidence amplitude is built as a polynomial in origin tags.  Each
arm's projected amplitude is split into its H-origin and V-origin parts
(obtained by pushing ``H`` and ``-V`` separately through the HWP and PBS).
The product of the two arms gives HH, HV, VH and VV terms.  A pair is
born either H-H or V-V, so coincidence detection keeps only HH and VV, and
the mixed HV/VH terms are deleted before squaring.  What survives is
``cos(theta - xi)`` for equal-polarization port pairs (AB, CD) and
``+-sin(theta - xi)`` for crossed ones (AD, CB).

The shared pair phase ``zeta`` multiplies the surviving amplitude as a
whole and drops out of every rate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .ensemble import Arm, PairState
from .jones import H, V, analyzer, pbs_project
from .singles import AnalyzerSettings, SinglesPort

__all__ = [
    "CANONICAL_CHSH",
    "DetectorPair",
    "CoincidenceRates",
    "JointProbabilities",
    "origin_tags",
    "tag_product",
    "coincidence_amplitude",
    "rate_hh",
    "rate_hv",
    "symmetric_rates",
    "joint_probabilities",
    "correlation_e",
    "chsh_s",
]

# (a, a2, b, b2) in net-rotation radians.
CANONICAL_CHSH = (0.0, math.pi / 4, math.pi / 8, 3 * math.pi / 8)

# The source field in each arm is (H - V)/sqrt 2; the V-origin tag carries the sign.
_V_ORIGIN = -1.0 * V


class DetectorPair(str, Enum):
    """Joint outcome, named by (upper port, lower port); D1..D4 watch A..D."""

    AB = "AB"
    AD = "AD"
    CB = "CB"
    CD = "CD"

    @property
    def ports(self) -> tuple[SinglesPort, SinglesPort]:
        return SinglesPort(self.value[0]), SinglesPort(self.value[1])


def _pbs_port(port: SinglesPort) -> str:
    return "transmit_H" if port.transmitted else "reflect_V"


def origin_tags(settings: AnalyzerSettings, port):
    """``(c_H, c_V)``: H-origin and V-origin amplitude coefficients at ``port``.

    Unit field scale; the ``1/sqrt 2`` of the source is not included.
    """
    port = SinglesPort(port)
    m = analyzer(settings.angle(port.arm))
    pbs = _pbs_port(port)
    return pbs_project(m @ H, pbs), pbs_project(m @ _V_ORIGIN, pbs)


def tag_product(settings: AnalyzerSettings, port_u, port_l) -> dict[str, complex]:
    """Expanded product of the two arms' tag polynomials."""
    port_u, port_l = SinglesPort(port_u), SinglesPort(port_l)
    if port_u.arm is not Arm.UPPER or port_l.arm is not Arm.LOWER:
        raise ValueError("port_u must be A or C and port_l must be B or D")
    uh, uv = origin_tags(settings, port_u)
    lh, lv = origin_tags(settings, port_l)
    return {"HH": uh * lh, "HV": uh * lv, "VH": uv * lh, "VV": uv * lv}


def coincidence_amplitude(
    settings: AnalyzerSettings, port_u, port_l, state: PairState, vv_phase: float = 0.0
):
    """Surviving two-photon amplitude after the HV/VH terms are removed.

    ``vv_phase`` is an optional extra phase on the VV term; 0 reproduces the
    ``cos(theta - xi)`` law.  Scaled so that ``|amplitude|**2`` is a rate in
    units of ``I0**2``.
    """
    terms = tag_product(settings, port_u, port_l)
    surviving = terms["HH"] + cmath.exp(1j * vv_phase) * terms["VV"]
    return 0.5 * state.i0 * cmath.exp(1j * state.zeta) * surviving


def rate_hh(settings: AnalyzerSettings, state: PairState):
    """D1-D2 coincidence rate ``I0**2 cos**2(theta - xi) / 4``."""
    return 0.25 * state.i0**2 * np.cos(settings.theta - settings.xi) ** 2


def rate_hv(settings: AnalyzerSettings, state: PairState):
    """D1-D4 coincidence rate ``I0**2 sin**2(xi - theta) / 4``."""
    return 0.25 * state.i0**2 * np.sin(settings.xi - settings.theta) ** 2


@dataclass(frozen=True)
class CoincidenceRates:
    """Rates for detector pairs (D1,D2), (D1,D4), (D3,D2), (D3,D4), units ``I0**2``."""

    r_ab: float
    r_ad: float
    r_cb: float
    r_cd: float

    @property
    def total(self):
        return self.r_ab + self.r_ad + self.r_cb + self.r_cd

    def get(self, pair) -> float:
        return getattr(self, "r_" + DetectorPair(pair).value.lower())


@dataclass(frozen=True)
class JointProbabilities:
    p_ab: float
    p_ad: float
    p_cb: float
    p_cd: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p_ab, self.p_ad, self.p_cb, self.p_cd], dtype=float)

    def cumulative(self) -> np.ndarray:
        """Cumulative distribution in AB, AD, CB, CD order, last entry pinned to 1."""
        cum = np.cumsum(self.as_array())
        cum[-1] = 1.0
        return cum


def symmetric_rates(settings: AnalyzerSettings, state: PairState) -> CoincidenceRates:
    """All four rates, using R_CD = R_AB and R_CB = R_AD."""
    hh = rate_hh(settings, state)
    hv = rate_hv(settings, state)
    return CoincidenceRates(r_ab=hh, r_ad=hv, r_cb=hv, r_cd=hh)


def joint_probabilities(settings: AnalyzerSettings, state: PairState) -> JointProbabilities:
    """Rates normalised by the settings-independent total ``I0**2 / 2``."""
    r = symmetric_rates(settings, state)
    norm = 0.5 * state.i0**2
    return JointProbabilities(r.r_ab / norm, r.r_ad / norm, r.r_cb / norm, r.r_cd / norm)


def correlation_e(settings: AnalyzerSettings, state: PairState):
    """``(R_AB + R_CD - R_AD - R_CB) / total``; equals ``cos 2(theta - xi)``."""
    r = symmetric_rates(settings, state)
    return (r.r_ab + r.r_cd - r.r_ad - r.r_cb) / r.total


def chsh_s(a: float, a2: float, b: float, b2: float, state: PairState):
    """``S = E(a,b) - E(a,b2) + E(a2,b) + E(a2,b2)``."""

    def e(x, y):
        return correlation_e(AnalyzerSettings(x, y), state)

    return e(a, b) - e(a, b2) + e(a2, b) + e(a2, b2)
