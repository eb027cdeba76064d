"""Link-level simulation and closed-form SNR analysis of photonics and electronics THz links."""

from .electronics import ElectronicsLinkParams, snr_rx_elec, snr_tx_elec
from .estimators import (
    CfoCompensator,
    IqImbalanceTransformer,
    MatchedFilter,
    NoiseChannel,
    PhaseLockedLoop,
    PulseShaper,
    QamDetector,
    QamMapper,
)
from .exceptions import ConfigError, EstimationError, NumericalError, ParameterError
from .link_budget import ChannelParams, link_budget
from .photonics import PhotonicsLinkParams, sin_sdn_split, snr_rx, snr_tx
from .rx_dsp import IqImbalance, PllConfig, estimate_cfo_4th_power, pll_track
from .signal import ComplexWaveform, make_constellation, make_rrc, qam_ber_awgn
from .simulation import LinkScenario, simulate_link

__version__ = "0.1.0"

__all__ = [
    "CfoCompensator",
    "ChannelParams",
    "ComplexWaveform",
    "ConfigError",
    "ElectronicsLinkParams",
    "EstimationError",
    "IqImbalance",
    "IqImbalanceTransformer",
    "LinkScenario",
    "MatchedFilter",
    "NoiseChannel",
    "NumericalError",
    "ParameterError",
    "PhaseLockedLoop",
    "PhotonicsLinkParams",
    "PllConfig",
    "PulseShaper",
    "QamDetector",
    "QamMapper",
    "estimate_cfo_4th_power",
    "link_budget",
    "make_constellation",
    "make_rrc",
    "pll_track",
    "qam_ber_awgn",
    "simulate_link",
    "sin_sdn_split",
    "snr_rx",
    "snr_rx_elec",
    "snr_tx",
    "snr_tx_elec",
]
