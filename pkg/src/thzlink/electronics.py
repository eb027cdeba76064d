"""Electronics transceiver built around a frequency-multiplied base oscillator.

Oscillator floors enter as variances relative to a unit-power carrier. The
transmit carrier floor scales the signal power and the LO floor scales the LO
power, both multiplied by ``N^2`` through the multiplier chain.
"""

from dataclasses import dataclass, replace

import numpy as np

from ._validation import as_complex_1d, complex_normal, make_rng, require_nonnegative
from .constants import dbm_to_watt, lin_to_db
from .exceptions import ParameterError
from .noise import NoiseBreakdown, oscillator_floor_power, thermal_power
from .phase_noise import rotation


def multiply_carrier(sigma2_base, n):
    """Floor variance and phase/frequency scale after an ``xN`` multiplier."""
    if n < 1:
        raise ParameterError(f"multiplication factor must be >= 1, got {n!r}")
    return n**2 * sigma2_base, n


@dataclass(frozen=True)
class FloorConvention:
    """How a quoted oscillator floor in dBc/Hz becomes a relative variance.

    ``sideband_factor`` multiplies ``10^(L/10) * B_osc``. With
    ``after_multiplier=True`` the quoted floor already describes the multiplied
    carrier, so the base variance is divided by ``N^2`` before the chain scales
    it back up.
    """

    sideband_factor: float = 2.0
    after_multiplier: bool = False

    def base_variance(self, level_dbc_hz, b_osc, n):
        v = oscillator_floor_power(level_dbc_hz, b_osc, self.sideband_factor)
        return v / n**2 if self.after_multiplier else v


#: Transmit-floor convention that reproduces 34.6 dB at -135.4 dBc/Hz.
TX_FLOOR_CONVENTION = FloorConvention(sideband_factor=2.0, after_multiplier=True)
#: LO-floor convention: a base-oscillator floor raised by the multiplier.
RX_FLOOR_CONVENTION = FloorConvention(sideband_factor=1.0, after_multiplier=False)


@dataclass(frozen=True)
class ElectronicsLinkParams:
    """Inputs of the electronics SNR model.

    ``sigma2_base`` and ``sigma2_base_rx`` are relative floor variances of the
    transmit and LO base oscillators; ``sigma2_th_tx`` and ``sigma2_th_rx`` are
    thermal powers in watts.
    """

    p_s: float
    p_lo: float
    n: int = 20
    sigma2_base: float = 0.0
    sigma2_base_rx: float = 0.0
    sigma2_th_tx: float = 0.0
    sigma2_th_rx: float = 0.0
    alpha: float = 1.0
    n_rx: int = None

    def __post_init__(self):
        for name in ("p_s", "p_lo", "sigma2_base", "sigma2_base_rx", "sigma2_th_tx", "sigma2_th_rx", "alpha"):
            require_nonnegative(name, getattr(self, name))
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"multiplication factor must be a positive integer, got {self.n!r}")
        if self.n_rx is None:
            object.__setattr__(self, "n_rx", self.n)

    @classmethod
    def from_levels(
        cls,
        p_s_dbm=6.9,
        p_lo_dbm=20.0,
        n=20,
        floor_tx_dbc=-135.4,
        floor_rx_dbc=-155.0,
        b_osc=6e9,
        bandwidth=40e9,
        nf_db=5.0,
        ge_db=5.0,
        ge_rx_db=None,
        temperature=290.0,
        alpha=1.0,
        tx_convention=TX_FLOOR_CONVENTION,
        rx_convention=RX_FLOOR_CONVENTION,
    ):
        ge_rx_db = ge_db if ge_rx_db is None else ge_rx_db
        return cls(
            p_s=float(dbm_to_watt(p_s_dbm)),
            p_lo=float(dbm_to_watt(p_lo_dbm)),
            n=n,
            sigma2_base=tx_convention.base_variance(floor_tx_dbc, b_osc, n),
            sigma2_base_rx=rx_convention.base_variance(floor_rx_dbc, b_osc, n),
            sigma2_th_tx=thermal_power(temperature, bandwidth, nf_db, ge_db),
            sigma2_th_rx=thermal_power(temperature, bandwidth, nf_db, ge_rx_db),
            alpha=alpha,
        )

    def with_(self, **changes):
        return replace(self, **changes)

    @property
    def sigma2_c(self):
        """Relative floor variance of the multiplied carrier."""
        return multiply_carrier(self.sigma2_base, self.n)[0]

    @property
    def sigma2_lo(self):
        """Absolute floor power on the multiplied LO, in watts."""
        return self.p_lo * multiply_carrier(self.sigma2_base_rx, self.n_rx)[0]

    @property
    def received_power(self):
        """Power of the down-converted signal, ``alpha^2 P_s P_LO``."""
        return self.alpha**2 * self.p_s * self.p_lo

    def alpha_for_received_power(self, p_rx_watt):
        return float(np.sqrt(p_rx_watt / (self.p_s * self.p_lo)))


def snr_tx_elec(p: ElectronicsLinkParams) -> float:
    """Transmit SNR in dB: carrier floor scales with the signal, thermal noise does not."""
    if p.p_s <= 0:
        raise ParameterError("signal power must be positive")
    den = p.p_s * p.sigma2_c + p.sigma2_th_tx
    return lin_to_db(p.p_s / den) if den > 0 else float("inf")


def noise_breakdown_elec(p: ElectronicsLinkParams) -> NoiseBreakdown:
    a2 = p.alpha**2
    sc, slo = p.sigma2_c, p.sigma2_lo
    n_e1 = a2 * p.p_lo * p.sigma2_th_tx + p.sigma2_th_rx
    n_e2 = a2 * slo * p.sigma2_th_tx
    n_e3 = a2 * p.p_s * (p.p_lo * sc + slo)
    n_e4 = a2 * p.p_s * slo * sc
    terms = {"ne1_thermal": n_e1, "ne2_product": n_e2, "ne3_floor": n_e3, "ne4_product": n_e4}
    return NoiseBreakdown(signal=p.received_power, sin=n_e1 + n_e2, sdn=n_e3 + n_e4, terms=terms)


def snr_rx_elec(p: ElectronicsLinkParams):
    """Received SNR in dB together with its :class:`NoiseBreakdown`."""
    if p.p_s <= 0 or p.p_lo <= 0:
        raise ParameterError("signal and LO powers must be positive")
    nb = noise_breakdown_elec(p)
    return nb.snr_db, nb


def noise_components_elec(p: ElectronicsLinkParams, x, seed=None):
    """The four receiver noise terms; the product terms are literal products of Gaussians."""
    x = as_complex_1d("x", x)
    rng = make_rng(seed)
    n = x.size
    a = p.alpha
    sc, slo = p.sigma2_c, p.sigma2_lo
    return {
        "ne1_thermal": complex_normal(rng, a**2 * p.p_lo * p.sigma2_th_tx + p.sigma2_th_rx, n),
        "ne2_product": complex_normal(rng, slo, n) * complex_normal(rng, a**2 * p.sigma2_th_tx, n),
        "ne3_floor": a * np.sqrt(p.p_s) * x * complex_normal(rng, p.p_lo * sc + slo, n),
        "ne4_product": a * np.sqrt(p.p_s) * x * complex_normal(rng, sc, n) * complex_normal(rng, slo, n),
    }


def sample_noise_elec(p: ElectronicsLinkParams, x, seed=None):
    """Aggregate electronics receiver noise for waveform ``x``."""
    return sum(noise_components_elec(p, x, seed).values())


def receive_elec(p: ElectronicsLinkParams, x, sample_rate, cfo=0.0, phase=None, seed=None, noise_scale=1.0):
    """Received baseband waveform of the electronics link."""
    x = as_complex_1d("x", x)
    rot = rotation(x.size, sample_rate, cfo, phase)
    return p.alpha * np.sqrt(p.p_s * p.p_lo) * x * rot + noise_scale * sample_noise_elec(p, x, seed)
