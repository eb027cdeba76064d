"""Laser and RF-oscillator phase noise: sample paths plus their spectra.

Lasers follow a Wiener process. RF oscillators follow a three-slope model
``S(f) = K0 + K2/f^2 + K3/f^3`` (two-sided, rad^2/Hz), synthesized from white
noise shaped by fractional-integration FIR filters.

By default the filters are as long as the requested path and start from a zero
state, which realizes the ``1/f^a`` processes exactly. A shorter ``n_taps``
switches to a truncated filter run in steady state; that variant is stationary
but adds power above ``1/(n_taps tau)`` (3 dB for the ``1/f^2`` part, and a
spurious ``1/f^2`` tail from the truncated ``1/f^3`` filter).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import signal as sps_signal

from ._validation import make_rng, require_nonnegative, require_positive
from .constants import db_to_lin, lin_to_db
from .exceptions import ParameterError



@dataclass(frozen=True)
class LaserPhaseModel:
    """Wiener phase of ``n_lasers`` independent lasers, each of linewidth ``linewidth`` Hz."""

    linewidth: float
    n_lasers: int = 4
    tau: float = 1 / 128e9

    def __post_init__(self):
        require_nonnegative("linewidth", self.linewidth)
        require_positive("tau", self.tau)

    @property
    def increment_variance(self):
        return self.n_lasers * 2 * np.pi * self.linewidth * self.tau

    def sample(self, n, seed=None):
        return wiener_phase(self.linewidth, self.n_lasers, self.tau, n, seed)


def wiener_phase(linewidth, n_lasers, tau, n, seed=None):
    """Cumulative sum of i.i.d. Gaussian increments of variance ``n_lasers 2 pi dnu tau``."""
    require_nonnegative("linewidth", linewidth)
    var = n_lasers * 2 * np.pi * linewidth * tau
    if var == 0:
        return np.zeros(int(n))
    rng = make_rng(seed)
    return np.cumsum(rng.normal(0.0, np.sqrt(var), int(n)))


def fir_coeffs(a, n_taps):
    """Taps of the ``1/f^a`` shaping filter: ``h[k] = (a/2 + k - 1) h[k-1] / k``."""
    if n_taps < 1:
        raise ParameterError("need at least one tap")
    k = np.arange(1, int(n_taps))
    ratios = (a / 2.0 + k - 1.0) / k
    return np.concatenate([[1.0], np.cumprod(ratios)])


@dataclass(frozen=True)
class RfPhaseModel:
    """Three-slope oscillator phase noise. ``k0`` is linear (rad^2/Hz).

    ``n_taps=None`` (or 0) uses full-length filters; see the module notes.
    """

    k0: float = 0.0
    k2: float = 0.0
    k3: float = 0.0
    tau: float = 1 / 128e9
    n_taps: Optional[int] = None

    def __post_init__(self):
        for name in ("k0", "k2", "k3"):
            require_nonnegative(name, getattr(self, name))
        require_positive("tau", self.tau)

    @classmethod
    def from_db(cls, k0_db, k2, k3, **kwargs):
        return cls(k0=float(db_to_lin(k0_db)), k2=k2, k3=k3, **kwargs)

    @property
    def var_w0(self):
        return self.k0 / self.tau

    @property
    def var_w2(self):
        return 4 * self.k2 * self.tau * np.pi**2

    @property
    def var_w3(self):
        return 8 * self.k3 * self.tau**2 * np.pi**3

    def psd(self, f):
        """Model PSD at offset ``f`` (Hz), two-sided."""
        f = np.asarray(f, dtype=float)
        return self.k0 + self.k2 / f**2 + self.k3 / f**3

    def sample(self, n, seed=None):
        return rf_phase(self, n, seed)


def _coloured(rng, variance, a, n, n_taps):
    if variance == 0:
        return np.zeros(n)
    if not n_taps or n_taps >= n:
        white = rng.normal(0.0, np.sqrt(variance), n)
        return sps_signal.fftconvolve(white, fir_coeffs(a, n))[:n]
    white = rng.normal(0.0, np.sqrt(variance), n + n_taps)
    # Steady-state truncated filter: drop the outputs that see a partially filled window.
    return sps_signal.oaconvolve(white, fir_coeffs(a, n_taps))[n_taps : n_taps + n]


def rf_phase(model: RfPhaseModel, n, seed=None):
    """Sum of white, ``1/f^2`` and ``1/f^3`` phase components, ``n`` samples long."""
    rng = make_rng(seed)
    n = int(n)
    phi0 = rng.normal(0.0, np.sqrt(model.var_w0), n) if model.var_w0 > 0 else np.zeros(n)
    phi2 = _coloured(rng, model.var_w2, 2, n, model.n_taps)
    phi3 = _coloured(rng, model.var_w3, 3, n, model.n_taps)
    return phi0 + phi2 + phi3


def ssb_from_psd(s_phi):
    """Single-sideband phase noise ``L(f) = 10 log10(S/2)`` in dBc/Hz."""
    s_phi = np.asarray(s_phi, dtype=float)
    if np.any(s_phi < 0):
        raise ParameterError("PSD values must be nonnegative")
    return lin_to_db(s_phi / 2.0)


def estimate_psd(x, sample_rate, nperseg=2**16):
    """Welch estimate (Hann window, 50% overlap) returned as a two-sided density.

    For real input only the nonnegative frequencies are returned; complex input
    yields the full, frequency-sorted spectrum.
    """
    x = np.asarray(x)
    nperseg = min(int(nperseg), x.size)
    if np.iscomplexobj(x):
        f, p = sps_signal.welch(x, sample_rate, window="hann", nperseg=nperseg, return_onesided=False)
        order = np.argsort(f)
        return f[order], p[order]
    f, p = sps_signal.welch(x, sample_rate, window="hann", nperseg=nperseg)
    p = p / 2.0
    p[0] *= 2.0
    if nperseg % 2 == 0:
        p[-1] *= 2.0
    return f, p


def band_average(f, p, centre, rel_width=0.1):
    """Mean of ``p`` over ``centre * (1 +/- rel_width)``."""
    mask = (f >= centre * (1 - rel_width)) & (f <= centre * (1 + rel_width))
    if not np.any(mask):
        raise ParameterError(f"no PSD bins near {centre} Hz")
    return float(np.mean(p[mask]))


def rotation(n, sample_rate, cfo=0.0, phase=None):
    """Unit-modulus factors ``exp(-j(2 pi cfo t + phase))``."""
    t = np.arange(int(n)) / sample_rate
    total = 2 * np.pi * cfo * t
    if phase is not None:
        phase = np.asarray(phase, dtype=float)
        if phase.shape != (int(n),):
            raise ParameterError(f"phase path length {phase.shape} does not match {n} samples")
        total = total + phase
    return np.exp(-1j * total)


def apply_cfo_and_phase(waveform, cfo=0.0, phase=None):
    """Rotate a :class:`ComplexWaveform` by a frequency offset and a phase path."""
    rot = rotation(len(waveform), waveform.sample_rate, cfo, phase)
    return waveform.with_samples(waveform.samples * rot)
