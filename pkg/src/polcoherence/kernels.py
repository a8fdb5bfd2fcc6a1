"""Hot-loop dispatch: the compiled extension when it was built, numpy otherwise.

``BACKEND`` names the implementation in use ("cython" or "python").  Both
backends stay importable as :mod:`._kernels_py` and (if built)
:mod:`._kernels` so they can be compared directly.
"""

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    _impl = _kernels_py
    BACKEND = "python"


def _as_f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def cos_sum(eta, offset: float) -> float:
    """``sum(cos(offset + eta))``."""
    return float(_impl.cos_sum(_as_f64(eta), float(offset)))


def singles_moments(eta, offset: float, s_upper: float, s_lower: float, i0: float):
    """Shifted sums and sums of squares of the A, B, C, D port intensities."""
    return _impl.singles_moments(
        _as_f64(eta), float(offset), float(s_upper), float(s_lower), float(i0)
    )


def tally(u, cum) -> np.ndarray:
    """Categorical counts for uniforms ``u`` against cumulative probabilities ``cum``."""
    cum = _as_f64(cum)
    if cum.ndim != 1 or cum.size < 1:
        raise ValueError("cum must be a non-empty 1-d array")
    return _impl.tally(_as_f64(u), cum)
