"""Photonics transceiver: two-laser photomixing transmitter with a two-laser coherent receiver.

The transmitter beats a modulated laser (power ``p1``) against an unmodulated one
(``p2``) after a shared optical amplifier of gain ``gain``. The receiver LO beats
two further lasers (``p3``, ``p4``) without amplification. Noise powers follow the
closed forms below and the samplers reproduce them term by term.
"""

from dataclasses import dataclass, replace

import numpy as np

from ._validation import as_complex_1d, complex_normal, make_rng, require_nonnegative
from .constants import db_to_lin, dbm_to_watt, lin_to_db
from .exceptions import ParameterError
from .noise import NoiseBreakdown, ase_power, rin_power, shot_power, thermal_power
from .phase_noise import rotation


@dataclass(frozen=True)
class PhotonicsLinkParams:
    """Every input of the photonics SNR model, in SI units.

    ``p1`` and ``p2`` are the amplifier output powers of the modulated and the
    unmodulated laser; ``p3`` and ``p4`` the two receiver lasers. ``rin`` is
    linear (1/Hz) and ``gain`` the linear amplifier gain.
    """

    p1: float
    p2: float
    p3: float
    p4: float
    gain: float = 10 ** 1.8
    responsivity: float = 0.7
    rin: float = 10 ** -14.5
    nu: float = 193.4e12
    b_opt: float = 2e12
    bandwidth: float = 40e9
    nf_db: float = 5.0
    ge_db: float = 5.0
    temperature: float = 290.0
    alpha: float = 1.0
    n_sp: float = 1.0

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "p4", "alpha", "rin"):
            require_nonnegative(name, getattr(self, name))
        if not self.gain >= 1:
            raise ParameterError(f"amplifier gain must be >= 1 (linear), got {self.gain!r}")

    @classmethod
    def from_levels(
        cls,
        edfa_input_dbm=5.0,
        edfa_gain_db=18.0,
        lo_total_dbm=19.25,
        rin_db=-145.0,
        **kwargs,
    ):
        """Build parameters from total powers in dBm, split equally between each laser pair."""
        gain = db_to_lin(edfa_gain_db)
        p_tx = dbm_to_watt(edfa_input_dbm) / 2 * gain
        p_lo = dbm_to_watt(lo_total_dbm) / 2
        return cls(
            p1=float(p_tx), p2=float(p_tx), p3=float(p_lo), p4=float(p_lo),
            gain=float(gain), rin=float(db_to_lin(rin_db)), **kwargs,
        )

    def with_(self, **changes):
        return replace(self, **changes)

    # Optical noise -----------------------------------------------------------------
    @property
    def sigma2_opt(self):
        """ASE plus amplified RIN at the transmitter."""
        pre_amp = (self.p1 / self.gain, self.p2 / self.gain)
        return ase_power(self.gain, self.nu, self.b_opt, self.n_sp) + rin_power(
            self.rin, pre_amp, self.b_opt, self.gain
        )

    @property
    def sigma2_opt_lo(self):
        """RIN of the unamplified receiver lasers; no ASE at the LO."""
        return rin_power(self.rin, (self.p3, self.p4), self.b_opt)

    # Electrical noise --------------------------------------------------------------
    @property
    def sigma2_sh_tx(self):
        return shot_power(0.5 * (self.p1 + self.p2 + self.sigma2_opt), self.responsivity, self.bandwidth)

    @property
    def sigma2_sh_lo(self):
        return shot_power(0.5 * (self.p3 + self.p4 + self.sigma2_opt_lo), self.responsivity, self.bandwidth)

    @property
    def sigma2_th(self):
        return thermal_power(self.temperature, self.bandwidth, self.nf_db, self.ge_db)

    # Beat amplitudes and aggregate terms --------------------------------------------
    @property
    def g1(self):
        return self.responsivity * np.sqrt(self.p1 * self.p2)

    @property
    def g2(self):
        return self.responsivity * np.sqrt(self.p3 * self.p4)

    @property
    def beta_a(self):
        return self.responsivity**2 * self.sigma2_opt / 4

    @property
    def beta_b(self):
        return self.responsivity**2 * self.sigma2_opt_lo / 4

    @property
    def noise_tx_power(self):
        """Mean power of the transmitter noise for a unit-power waveform."""
        s = self.sigma2_opt
        return self.sigma2_sh_tx + self.beta_a * (s + 2 * self.p2 + 2 * self.p1)

    @property
    def noise_lo_power(self):
        s = self.sigma2_opt_lo
        return self.sigma2_sh_lo + self.beta_b * (s + 2 * self.p3 + 2 * self.p4)

    @property
    def received_power(self):
        """Power of the down-converted THz signal, ``(alpha G1 G2)^2``."""
        return (self.alpha * self.g1 * self.g2) ** 2

    def alpha_for_received_power(self, p_rx_watt):
        return float(np.sqrt(p_rx_watt) / (self.g1 * self.g2))


def snr_tx(p: PhotonicsLinkParams) -> float:
    """SNR of the photomixed THz signal at the transmitter, in dB."""
    if p.p1 <= 0 or p.p2 <= 0:
        raise ParameterError("transmitter laser powers must be positive")
    r2, s = p.responsivity**2, p.sigma2_opt
    num = 4 * r2 * p.p1 * p.p2
    den = 4 * p.sigma2_sh_tx + r2 * s**2 + 2 * r2 * s * (p.p1 + p.p2)
    return lin_to_db(num / den) if den > 0 else float("inf")


def noise_breakdown(p: PhotonicsLinkParams) -> NoiseBreakdown:
    """Evaluate the receiver noise and classify every addend as SIN or SDN.

    Terms proportional to the modulated laser power ``p1`` are signal dependent;
    ``p2`` takes the place of the full transmit power in the remaining addends.
    """
    a2 = p.alpha**2
    g1s, g2s = p.g1**2, p.g2**2
    ba, bb = p.beta_a, p.beta_b
    s_a, s_b = p.sigma2_opt, p.sigma2_opt_lo
    sh_a, sh_b = p.sigma2_sh_tx, p.sigma2_sh_lo
    p_b = p.p3 + p.p4
    n_tx, n_lo = p.noise_tx_power, p.noise_lo_power
    n_tx_sin = sh_a + ba * s_a + 2 * ba * p.p2
    sdn = a2 * (
        2 * g2s * p.p1 * ba
        + g1s * sh_b
        + g1s * bb * s_b
        + 2 * g1s * p_b * bb
        + 2 * p.p1 * sh_b * ba
        + 2 * ba * bb * p.p1 * s_b
        + 4 * ba * bb * p.p1 * p_b
    )
    sin = p.sigma2_th + a2 * (g2s * n_tx_sin + n_lo * n_tx_sin)
    terms = {
        "n1_tx": a2 * g2s * n_tx,
        "n2_lo": a2 * g1s * n_lo,
        "n3_product": a2 * n_lo * n_tx,
        "n4_thermal": p.sigma2_th,
    }
    return NoiseBreakdown(signal=p.received_power, sin=sin, sdn=sdn, terms=terms)


def snr_rx(p: PhotonicsLinkParams):
    """Received SNR in dB together with its :class:`NoiseBreakdown`."""
    if min(p.p1, p.p2, p.p3, p.p4) <= 0:
        raise ParameterError("all four laser powers must be positive")
    if p.alpha <= 0:
        raise ParameterError("propagation gain must be positive")
    nb = noise_breakdown(p)
    return nb.snr_db, nb


@dataclass(frozen=True)
class SinSdnSplit:
    sin: float
    sdn: float

    @property
    def sdn_percent(self):
        total = self.sin + self.sdn
        return 100.0 * self.sdn / total if total > 0 else 0.0

    @property
    def sin_percent(self):
        return 100.0 - self.sdn_percent


def sin_sdn_split(p: PhotonicsLinkParams) -> SinSdnSplit:
    nb = noise_breakdown(p)
    return SinSdnSplit(sin=nb.sin, sdn=nb.sdn)


# Sample-path generation --------------------------------------------------------------

def _beat_term(rng, scale_variance, n):
    """Mean-removed self-beat of optical noise with total variance ``scale_variance``.

    Real and imaginary parts are independent unit-mean exponentials (a chi-square
    with two degrees of freedom scaled by one half), centred and rescaled.
    """
    if scale_variance == 0:
        return np.zeros(n, dtype=complex)
    s = np.sqrt(scale_variance / 2.0)
    return s * ((rng.exponential(1.0, n) - 1.0) + 1j * (rng.exponential(1.0, n) - 1.0))


def sample_tx_noise(p: PhotonicsLinkParams, x, seed=None):
    """Transmitter noise path for waveform ``x``.

    Three independent parts: the optical self-beat, a signal-independent Gaussian
    from shot noise and the unmodulated laser, and a Gaussian scaled by ``x``
    from the modulated laser's beat with the optical noise.
    """
    x = as_complex_1d("x", x)
    rng = make_rng(seed)
    n = x.size
    r2, s = p.responsivity**2, p.sigma2_opt
    beat = _beat_term(rng, r2 * s**2 / 4, n)
    flat = complex_normal(rng, p.sigma2_sh_tx + r2 * p.p2 * s / 2, n)
    scaled = x * complex_normal(rng, r2 * p.p1 * s / 2, n)
    return beat + flat + scaled


def sample_lo_noise(p: PhotonicsLinkParams, n, seed=None):
    """LO noise path; RIN-driven only, as the receiver lasers are not amplified."""
    rng = make_rng(seed)
    r2, s = p.responsivity**2, p.sigma2_opt_lo
    beat = _beat_term(rng, r2 * s**2 / 4, int(n))
    flat = complex_normal(rng, p.sigma2_sh_lo + (p.p3 + p.p4) * r2 * s / 2, int(n))
    return beat + flat


def noise_components(p: PhotonicsLinkParams, x, seed=None):
    """The four additive receiver noise terms for waveform ``x``.

    Transmitter and LO paths are drawn independently; their product forms the
    third term.
    """
    x = as_complex_1d("x", x)
    rng = make_rng(seed)
    n_tx = sample_tx_noise(p, x, rng)
    n_lo = sample_lo_noise(p, x.size, rng)
    a = p.alpha
    return {
        "n1_tx": a * p.g2 * n_tx,
        "n2_lo": a * p.g1 * x * n_lo,
        "n3_product": a * n_lo * n_tx,
        "n4_thermal": complex_normal(rng, p.sigma2_th, x.size),
    }


def receive(p: PhotonicsLinkParams, x, sample_rate, cfo=0.0, phase=None, seed=None, noise_scale=1.0):
    """Received baseband waveform: rotated, scaled signal plus aggregate noise.

    ``noise_scale`` multiplies the noise amplitude, e.g. to refer the closed-form
    noise powers to a bandwidth other than the sample rate.
    """
    x = as_complex_1d("x", x)
    rot = rotation(x.size, sample_rate, cfo, phase)
    noise = sum(noise_components(p, x, seed).values())
    return p.alpha * p.g1 * p.g2 * x * rot + noise_scale * noise

