"""Closed-form variances of every noise source in both transceivers.

All results are powers in watts into 1 ohm, except the oscillator floor which is
relative to a unit-power carrier.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import require_nonnegative, require_positive
from .constants import BOLTZMANN, ELEMENTARY_CHARGE, PLANCK, db_to_lin, lin_to_db
from .exceptions import ParameterError


def ase_power(gain, nu, b_opt, n_sp=1.0, simplified=True):
    """Amplified spontaneous emission power of an optical amplifier.

    The exact form is ``2 n_sp (G - 1) h nu B_opt``; ``simplified=True`` uses the
    high-gain approximation ``2 G h nu B_opt`` that the link models rely on.
    """
    if not gain >= 1:
        raise ParameterError(f"amplifier gain must be >= 1 (linear), got {gain!r}")
    require_positive("optical bandwidth", b_opt)
    factor = gain if simplified else n_sp * (gain - 1.0)
    return 2.0 * factor * PLANCK * nu * b_opt


def rin_power(rin, powers, b_opt, gain=1.0):
    """Intensity noise ``G * P^2 * RIN * B_opt`` summed over lasers.

    ``rin`` is linear (1/Hz) and ``powers`` holds each laser's mean power before
    the amplifier.
    """
    require_nonnegative("RIN", rin)
    powers = np.atleast_1d(np.asarray(powers, dtype=float))
    if np.any(powers < 0):
        raise ParameterError("laser powers must be nonnegative")
    return float(gain * np.sum(powers**2) * rin * b_opt)


def shot_power(mean_optical_power, responsivity, bandwidth):
    """Shot-noise power ``2 q R P_in B`` for mean incident optical power ``P_in``."""
    require_nonnegative("incident power", mean_optical_power)
    return 2.0 * ELEMENTARY_CHARGE * responsivity * mean_optical_power * bandwidth


def thermal_power(temperature, bandwidth, nf_db, ge_db):
    """Thermal noise ``k T B F G_e`` with noise figure and amplifier gain in dB."""
    require_positive("temperature", temperature)
    require_positive("bandwidth", bandwidth)
    return float(BOLTZMANN * temperature * bandwidth * db_to_lin(nf_db) * db_to_lin(ge_db))


def oscillator_floor_power(level_dbc_hz, b_osc, sideband_factor=2.0):
    """Integrated floor ``factor * 10^(L/10) * B_osc`` relative to a unit carrier."""
    require_positive("oscillator noise bandwidth", b_osc)
    return float(sideband_factor * db_to_lin(level_dbc_hz) * b_osc)


@dataclass(frozen=True)
class OpticalNoiseParams:
    """Inputs of the optical noise budget of an amplified pair of lasers."""

    gain: float
    nu: float
    b_opt: float
    rin: float
    powers: tuple
    n_sp: float = 1.0

    def __post_init__(self):
        if not self.gain >= 1:
            raise ParameterError("amplifier gain must be >= 1")
        require_positive("optical bandwidth", self.b_opt)
        require_nonnegative("RIN", self.rin)

    def sigma2_ase(self):
        return ase_power(self.gain, self.nu, self.b_opt, self.n_sp)

    def sigma2_rin(self):
        return rin_power(self.rin, self.powers, self.b_opt, self.gain)

    def sigma2_opt(self):
        return self.sigma2_ase() + self.sigma2_rin()


@dataclass(frozen=True)
class ElectricalNoiseParams:
    """Receiver front-end constants for shot and thermal noise."""

    temperature: float
    bandwidth: float
    nf_db: float
    ge_db: float
    responsivity: float = 0.7

    def __post_init__(self):
        require_positive("temperature", self.temperature)
        require_positive("bandwidth", self.bandwidth)

    def sigma2_thermal(self):
        return thermal_power(self.temperature, self.bandwidth, self.nf_db, self.ge_db)

    def sigma2_shot(self, mean_optical_power):
        return shot_power(mean_optical_power, self.responsivity, self.bandwidth)


@dataclass(frozen=True)
class NoiseBreakdown:
    """Noise powers at the receiver split into signal-independent and signal-dependent parts."""

    signal: float
    sin: float
    sdn: float
    terms: dict = field(default_factory=dict)

    @property
    def total(self):
        return self.sin + self.sdn

    @property
    def sdn_fraction(self):
        return self.sdn / self.total if self.total > 0 else 0.0

    @property
    def sin_fraction(self):
        return 1.0 - self.sdn_fraction

    @property
    def snr_db(self):
        return lin_to_db(self.signal / self.total) if self.total > 0 else float("inf")
