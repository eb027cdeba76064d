"""Receiver DSP: carrier recovery (fourth-power CFO estimate plus PLL) and I/Q imbalance."""

import math
from dataclasses import dataclass

import numpy as np

from .constants import DB_FLOOR, db_to_lin
from .exceptions import EstimationError, ParameterError
from .signal import ml_detect


def estimate_cfo_4th_power(waveform, n_fft=None, min_peak_ratio=20.0):
    """Frequency offset from the spectral line of the fourth power of ``waveform``.

    The result is the frequency the spectrum is shifted to, so ``x exp(j 2 pi f t)``
    yields ``f``.

    Square QAM has a nonzero fourth moment, so ``x^4`` carries a tone at four
    times the offset. ``n_fft`` defaults to at least ``2**20`` points; the result
    is quantized to ``sample_rate / (4 n_fft)``.
    """
    x = np.asarray(waveform.samples)
    if n_fft is None:
        n_fft = max(2**20, 1 << (x.size - 1).bit_length())
    spectrum = np.abs(np.fft.fft(x**4, int(n_fft)))
    peak = int(np.argmax(spectrum))
    median = float(np.median(spectrum))
    if median == 0 or spectrum[peak] < min_peak_ratio * median:
        raise EstimationError("no dominant line in the fourth-power spectrum")
    return float(np.fft.fftfreq(int(n_fft), 1.0 / waveform.sample_rate)[peak] / 4.0)


@dataclass(frozen=True)
class PllConfig:
    """Second-order loop described by its gains together with damping and noise bandwidth.

    ``noise_bandwidth`` is normalized to the update rate (one update per symbol).
    """

    detector_gain: float = 1.0 / 15.0
    oscillator_gain: float = 1.0
    damping: float = 1.0
    noise_bandwidth: float = 0.0045

    def __post_init__(self):
        if self.detector_gain <= 0 or self.oscillator_gain <= 0:
            raise ParameterError("loop gains must be positive")
        if not 0 < self.noise_bandwidth < 0.5:
            raise ParameterError("normalized loop bandwidth must lie in (0, 0.5)")

    def gains(self):
        """Proportional and integral gains of the loop filter."""
        z = self.damping
        theta = self.noise_bandwidth / (z + 1.0 / (4.0 * z))
        den = (1.0 + 2.0 * z * theta + theta**2) * self.detector_gain * self.oscillator_gain
        return 4.0 * z * theta / den, 4.0 * theta**2 / den


def pll_track(z, reference=None, config=PllConfig(), constellation=None):
    """Track carrier phase symbol by symbol.

    With ``reference`` the loop is data aided. Otherwise decisions against
    ``constellation`` drive the cross-product detector. Returns the de-rotated
    symbols and the phase estimate applied to each.
    """
    z = np.asarray(z, dtype=complex)
    if reference is None and constellation is None:
        raise ParameterError("need reference symbols or a constellation for decisions")
    if reference is not None:
        reference = np.asarray(reference, dtype=complex)
        if reference.shape != z.shape:
            raise ParameterError("reference and received symbols differ in length")
    kp, ki = config.gains()
    out = np.empty_like(z)
    trace = np.empty(z.size)
    theta = 0.0
    integ = 0.0
    zr, zi = z.real.tolist(), z.imag.tolist()
    if reference is not None:
        dr, di = reference.real.tolist(), reference.imag.tolist()
    for k in range(z.size):
        c, s = math.cos(theta), math.sin(theta)
        yr = zr[k] * c + zi[k] * s
        yi = zi[k] * c - zr[k] * s
        out[k] = complex(yr, yi)
        trace[k] = theta
        if reference is not None:
            ar, ai = dr[k], di[k]
        else:
            d = constellation.points[ml_detect(np.array([out[k]]), 1.0, constellation, True)[0]]
            ar, ai = d.real, d.imag
        err = yi * ar - yr * ai
        integ += ki * err
        theta += kp * err + integ
    return out, trace


@dataclass(frozen=True)
class IqImbalance:
    """Frequency-flat amplitude (dB) and phase (rad) mismatch between I and Q."""

    amplitude_db: float = 0.0
    phase_rad: float = 0.0

    @property
    def amplitude(self):
        return float(np.sqrt(db_to_lin(self.amplitude_db)))

    @property
    def g1(self):
        return (1 + self.amplitude * np.exp(-1j * self.phase_rad)) / 2

    @property
    def g2(self):
        return (1 - self.amplitude * np.exp(1j * self.phase_rad)) / 2

    def apply(self, x):
        x = np.asarray(x, dtype=complex)
        return self.g1 * x + self.g2 * np.conj(x)


def apply_iq_imbalance(waveform, imbalance: IqImbalance):
    return waveform.with_samples(imbalance.apply(waveform.samples))


def image_rejection_ratio(imbalance: IqImbalance) -> float:
    """Image level ``10 log10(|g2|^2 / |g1|^2)`` in dB."""
    g1, g2 = abs(imbalance.g1), abs(imbalance.g2)
    if g1 == 0:
        raise ParameterError("degenerate imbalance: direct-path coefficient vanishes")
    if g2 == 0:
        return DB_FLOOR
    return float(20 * np.log10(g2 / g1))
