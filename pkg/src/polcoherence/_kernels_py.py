"""Pure-numpy versions of the hot loops; reference for the compiled module."""

import numpy as np


def cos_sum(eta, offset):
    return float(np.sum(np.cos(offset + np.asarray(eta, dtype=float))))


def singles_moments(eta, offset, s_upper, s_lower, i0):
    """Shifted first and second moments of the four port intensities.

    Port order A, B, C, D.  Each event contributes ``I_p - i0/2`` to
    ``sums[p]`` and its square to ``sumsq[p]``.
    """
    c = np.cos(offset + np.asarray(eta, dtype=float))
    half = 0.5 * i0
    ia = half * (1.0 + s_upper * c)
    ib = half * (1.0 + s_lower * c)
    ic = half * (1.0 - s_upper * c)
    id_ = half * (1.0 - s_lower * c)
    dev = np.stack([ia, ib, ic, id_]) - half
    return np.sum(dev, axis=1), np.sum(dev * dev, axis=1)


def tally(u, cum):
    """Count categorical outcomes: event ``i`` lands in the first ``k`` with ``u[i] < cum[k]``."""
    cum = np.asarray(cum, dtype=float)
    idx = np.searchsorted(cum[:-1], np.asarray(u, dtype=float), side="right")
    return np.bincount(idx, minlength=cum.size).astype(np.int64)
