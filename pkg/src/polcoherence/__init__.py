"""Coherence analysis of polarization-entangled photon pairs.

Closed-form singles and coincidence laws for a two-arm HWP/PBS analyzer
setup, a Jones-calculus pipeline that rederives them, and a seeded
Monte Carlo of the four-detector coincidence counter.
"""

__version__ = "0.1.0"

from .coincidence import (  # noqa: E402
    CANONICAL_CHSH,
    CoincidenceRates,
    DetectorPair,
    JointProbabilities,
    chsh_s,
    coincidence_amplitude,
    correlation_e,
    joint_probabilities,
    rate_hh,
    rate_hv,
    symmetric_rates,
)
from .ensemble import (  # noqa: E402
    Arm,
    Ensemble,
    EnsembleConfig,
    PairEvent,
    PairState,
    arm_field,
    draw_ensemble,
    make_pair_state,
    phase_washout,
)
from .kernels import BACKEND  # noqa: E402
from .montecarlo import (  # noqa: E402
    OutcomeCounts,
    RateEstimate,
    estimate_chsh,
    estimate_rates,
    sample_outcomes,
    singles_marginals,
)
from .singles import (  # noqa: E402
    AnalyzerSettings,
    SinglesReport,
    coherent_singles_prediction,
    reflected_amplitude,
    singles_ensemble,
    singles_intensity_event,
    transmitted_amplitude,
)
