"""End-to-end Monte Carlo of one link operating point.

Closed-form noise powers are referred to the symbol-rate (Nyquist) bandwidth:
noise is drawn white at the waveform rate with ``sps`` times the closed-form
variance, so after the matched filter the symbol SNR equals the analytic SNR
and simulated BER lines up with the analytic reference at the same axis value.
"""

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ._validation import complex_normal, make_rng, require_finite
from .constants import lin_to_db
from .electronics import ElectronicsLinkParams, noise_components_elec, snr_rx_elec
from .exceptions import ParameterError
from .phase_noise import LaserPhaseModel, RfPhaseModel, rotation
from .photonics import PhotonicsLinkParams, noise_components, snr_rx
from .rx_dsp import IqImbalance, PllConfig, estimate_cfo_4th_power, pll_track
from .signal import (
    BerResult,
    ber_count,
    make_constellation,
    make_rrc,
    matched_filter_and_decimate,
    ml_detect,
    pulse_shape,
    qam_ber_awgn,
)

NOISE_MODES = ("full", "thermal", "none")


@dataclass(frozen=True)
class LinkScenario:
    """Everything needed to simulate one point; ``params.alpha`` sets the received power."""

    params: Union[PhotonicsLinkParams, ElectronicsLinkParams]
    order: int = 16
    n_symbols: int = 100_000
    sps: int = 4
    rolloff: float = 0.2
    span: int = 32
    symbol_rate: float = 32e9
    noise: str = "full"
    phase_model: Optional[Union[LaserPhaseModel, RfPhaseModel]] = None
    cfo: float = 0.0
    estimate_cfo: bool = False
    iq_tx: Optional[IqImbalance] = None
    iq_rx: Optional[IqImbalance] = None
    pll: Optional[PllConfig] = None

    def __post_init__(self):
        if self.noise not in NOISE_MODES:
            raise ParameterError(f"noise mode must be one of {NOISE_MODES}, got {self.noise!r}")
        if self.n_symbols < 1:
            raise ParameterError("need at least one symbol")

    @property
    def sample_rate(self):
        return self.symbol_rate * self.sps

    @property
    def is_photonics(self):
        return isinstance(self.params, PhotonicsLinkParams)

    @property
    def signal_gain(self):
        """Amplitude of the noiseless received constellation."""
        p = self.params
        if self.is_photonics:
            return p.alpha * p.g1 * p.g2
        return p.alpha * np.sqrt(p.p_s * p.p_lo)

    @property
    def received_power(self):
        return self.params.received_power

    def thermal_power(self):
        """Signal-independent thermal noise only, the AWGN reference's denominator."""
        p = self.params
        if self.is_photonics:
            return p.sigma2_th
        return p.alpha**2 * p.p_lo * p.sigma2_th_tx + p.sigma2_th_rx

    def analytic_snr_db(self):
        return (snr_rx(self.params) if self.is_photonics else snr_rx_elec(self.params))[0]

    def reference_ber(self):
        """Gray-QAM BER on AWGN at the thermal-only SNR."""
        return float(qam_ber_awgn(self.order, self.received_power / self.thermal_power()))


@dataclass(frozen=True)
class LinkResult:
    ber: BerResult
    snr_db: float
    reference_ber: float
    cfo_estimate: Optional[float] = None
    symbols: Optional[np.ndarray] = field(default=None, repr=False)


def _noise(scn: LinkScenario, x, rng):
    p = scn.params
    if scn.noise == "none":
        return np.zeros_like(x)
    if scn.noise == "thermal":
        return complex_normal(rng, scn.thermal_power(), x.size)
    parts = noise_components(p, x, rng) if scn.is_photonics else noise_components_elec(p, x, rng)
    return sum(parts.values())


def simulate_link(scn: LinkScenario, seed=None, keep_symbols=False) -> LinkResult:
    """Run one scenario end to end and count its bit errors."""
    rng = make_rng(seed)
    const = make_constellation(scn.order)
    filt = make_rrc(scn.rolloff, scn.span, scn.sps)
    idx = const.random_indices(scn.n_symbols, rng)
    tx = const.points[idx]
    wave = pulse_shape(tx, filt, scn.symbol_rate)
    x = wave.samples
    if scn.iq_tx is not None:
        x = scn.iq_tx.apply(x)

    y = scn.signal_gain * x + np.sqrt(scn.sps) * _noise(scn, x, rng)
    phase = scn.phase_model.sample(x.size, rng) if scn.phase_model is not None else None
    if phase is not None or scn.cfo:
        y = y * rotation(x.size, scn.sample_rate, scn.cfo, phase)
    if scn.iq_rx is not None:
        y = scn.iq_rx.apply(y)

    cfo_hat = None
    if scn.estimate_cfo:
        # The estimator reports where the spectrum sits; the channel rotation
        # exp(-j 2 pi cfo t) moves it to -cfo.
        line = estimate_cfo_4th_power(wave.with_samples(y))
        y = y * rotation(y.size, scn.sample_rate, line)
        cfo_hat = -line

    # The channel gain is known exactly, so symbols are normalized before tracking.
    z = matched_filter_and_decimate(wave.with_samples(y), filt) / scn.signal_gain
    if scn.pll is not None:
        z, _ = pll_track(z, tx, scn.pll)
    require_finite("received symbols", z)
    rx_idx = ml_detect(z, 1.0, const, return_indices=True)
    result = ber_count(const.indices_to_bits(idx), const.indices_to_bits(rx_idx))
    return LinkResult(
        ber=result,
        snr_db=scn.analytic_snr_db(),
        reference_ber=scn.reference_ber(),
        cfo_estimate=cfo_hat,
        symbols=z if keep_symbols else None,
    )


def p_rx_dbm(scn: LinkScenario):
    return float(lin_to_db(scn.received_power / 1e-3))
