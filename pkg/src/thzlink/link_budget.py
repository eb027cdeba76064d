"""Free-space link budget: antenna gains set against propagation and pointing losses."""

from dataclasses import dataclass

import numpy as np

from ._validation import require_nonnegative, require_positive
from .constants import SPEED_OF_LIGHT, db_to_lin, lin_to_db
from .exceptions import ParameterError


def friis_loss(distance, frequency):
    """Free-space spreading loss ``(4 pi d f / c)^2`` as a linear factor."""
    require_positive("distance", distance)
    require_positive("frequency", frequency)
    return (4.0 * np.pi * distance * frequency / SPEED_OF_LIGHT) ** 2


def atmospheric_loss(kappa, distance):
    """Beer-Lambert power loss for a field absorption coefficient ``kappa`` in 1/m.

    The field decays as ``exp(-kappa d)``, so the power loss is ``exp(2 kappa d)``;
    0.058 1/m corresponds to about 0.5 dB per metre.
    """
    require_nonnegative("kappa", kappa)
    require_positive("distance", distance)
    return float(np.exp(2.0 * kappa * distance))


def alignment_loss(offset, divergence, distance):
    """Power loss of a Gaussian beam displaced laterally by ``offset``.

    ``divergence * distance`` is the beam width ``w`` at which the field falls to
    ``1/e``; the received power then drops as ``exp(-2 r^2 / w^2)``.
    """
    require_nonnegative("offset", offset)
    width = divergence * distance
    if not width > 0:
        raise ParameterError(f"beam width must be positive, got {width!r}")
    return float(np.exp(2.0 * offset**2 / width**2))


@dataclass(frozen=True)
class ChannelParams:
    """Geometry and antennas of a line-of-sight THz hop. Gains are in dBi."""

    gain_tx_dbi: float
    gain_rx_dbi: float
    distance: float
    frequency: float
    kappa: float = 0.0
    offset: float = 0.0
    divergence: float = 1.0

    def __post_init__(self):
        require_positive("distance", self.distance)
        require_positive("frequency", self.frequency)
        require_nonnegative("kappa", self.kappa)
        require_nonnegative("offset", self.offset)
        require_positive("divergence", self.divergence)


@dataclass(frozen=True)
class LinkBudget:
    """Every term of the budget in dB plus the resulting amplitude gain."""

    free_space_db: float
    atmospheric_db: float
    alignment_db: float
    antenna_db: float

    @property
    def excess_loss_db(self):
        """Losses other than free-space spreading."""
        return self.atmospheric_db + self.alignment_db

    @property
    def net_gain_db(self):
        return self.antenna_db - self.free_space_db - self.atmospheric_db - self.alignment_db

    @property
    def alpha(self):
        return float(np.sqrt(db_to_lin(self.net_gain_db)))


def link_budget(p: ChannelParams) -> LinkBudget:
    return LinkBudget(
        free_space_db=lin_to_db(friis_loss(p.distance, p.frequency)),
        atmospheric_db=lin_to_db(atmospheric_loss(p.kappa, p.distance)),
        alignment_db=lin_to_db(alignment_loss(p.offset, p.divergence, p.distance)),
        antenna_db=p.gain_tx_dbi + p.gain_rx_dbi,
    )


def propagation_gain(p: ChannelParams) -> float:
    """Amplitude gain ``alpha = sqrt(G_tx G_rx / (L_fs L_atm L_align))``."""
    g = db_to_lin(p.gain_tx_dbi + p.gain_rx_dbi)
    loss = (
        friis_loss(p.distance, p.frequency)
        * atmospheric_loss(p.kappa, p.distance)
        * alignment_loss(p.offset, p.divergence, p.distance)
    )
    return float(np.sqrt(g / loss))
