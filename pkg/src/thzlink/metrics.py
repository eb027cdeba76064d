"""Curve post-processing: locating the received power at which a BER target is met."""

import numpy as np
from scipy.optimize import brentq

from .exceptions import EstimationError


def crossing(x, ber, target):
    """First ``x`` at which ``ber`` falls through ``target``, interpolated in log BER.

    ``x`` must be ascending. Points with zero errors are treated as lying below
    any positive target.
    """
    x = np.asarray(x, dtype=float)
    ber = np.asarray(ber, dtype=float)
    logt = np.log10(target)
    for i in range(len(x) - 1):
        b0, b1 = ber[i], ber[i + 1]
        if b0 >= target > b1:
            l0 = np.log10(b0)
            l1 = np.log10(b1) if b1 > 0 else l0 - 3.0
            return float(x[i] + (logt - l0) / (l1 - l0) * (x[i + 1] - x[i]))
    raise EstimationError(f"BER curve never crosses {target:g}")


def analytic_crossing(ber_of_x, target, lo, hi):
    """Root of ``log BER(x) = log target`` for a smooth analytic curve on ``[lo, hi]``."""
    tiny = np.finfo(float).tiny
    return float(brentq(lambda v: np.log10(max(ber_of_x(v), tiny)) - np.log10(target), lo, hi))
