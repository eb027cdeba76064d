"""Physical constants and decibel helpers used across the package."""

import numpy as np

#: Planck constant in J*s.
PLANCK = 6.62607015e-34
#: Boltzmann constant in J/K.
BOLTZMANN = 1.380649e-23
#: Elementary charge in C.
ELEMENTARY_CHARGE = 1.602176634e-19
#: Speed of light in vacuum in m/s.
SPEED_OF_LIGHT = 299_792_458.0

#: Floor reported in place of minus infinity for log-scale quantities.
DB_FLOOR = -300.0
#: Cap reported in place of plus infinity for log-scale quantities.
DB_CAP = 300.0


def db_to_lin(value_db):
    """Convert a power ratio in dB to a linear factor."""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def lin_to_db(value):
    """Convert a linear power ratio to dB, clipped to finite bounds at zero and infinity."""
    value = np.asarray(value, dtype=float)
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(value)
    out = np.clip(out, DB_FLOOR, DB_CAP)
    return float(out) if out.ndim == 0 else out


def dbm_to_watt(value_dbm):
    """Convert a power in dBm to watts."""
    return 1e-3 * db_to_lin(value_dbm)


def watt_to_dbm(value_w):
    """Convert a power in watts to dBm."""
    return lin_to_db(np.asarray(value_w, dtype=float) / 1e-3)
