"""Two published link demonstrations expressed as model inputs.

Values not reported by the experiments are filled in with the typical figures
used elsewhere in the package. Each scenario records which inputs were assumed.
"""

from dataclasses import dataclass, field

from .electronics import ElectronicsLinkParams, snr_rx_elec
from .photonics import PhotonicsLinkParams, snr_rx
from .signal import evm_to_snr


@dataclass(frozen=True)
class ValidationScenario:
    name: str
    predicted_reference_db: float
    measured_db: float
    params: object
    assumptions: dict = field(default_factory=dict)

    def model_snr_db(self):
        fn = snr_rx if isinstance(self.params, PhotonicsLinkParams) else snr_rx_elec
        return fn(self.params)[0]


def photonics_maekawa():
    """300 GHz photonic link at 20 GBd, roll-off 0.35, with a 150 mW receiver laser budget."""
    symbol_rate, rolloff = 20e9, 0.35
    params = PhotonicsLinkParams.from_levels(
        edfa_input_dbm=-7.0,  # two lasers at -10 dBm each
        edfa_gain_db=27.0,
        lo_total_dbm=21.8,
        rin_db=-145.0,
        bandwidth=(1 + rolloff) * symbol_rate,
        nf_db=8.0,
        ge_db=10.0,
        temperature=290.0,
        alpha=1.0,
    )
    return ValidationScenario(
        name="photonics-maekawa",
        predicted_reference_db=20.6,
        measured_db=evm_to_snr(0.113),
        params=params,
        assumptions={
            "alpha": 1.0,
            "lo_total_dbm": 21.8,
            "bandwidth_hz": (1 + rolloff) * symbol_rate,
            "responsivity": 0.7,
        },
    )


def electronics_hamada():
    """300 GHz electronic link at 20 GBd 16QAM with x18 multipliers and 5 dBm oscillators."""
    symbol_rate, rolloff = 20e9, 0.2
    params = ElectronicsLinkParams.from_levels(
        p_s_dbm=5.0,
        p_lo_dbm=5.0,
        n=18,
        floor_tx_dbc=-147.0,
        floor_rx_dbc=-147.0,
        b_osc=6e9,
        bandwidth=(1 + rolloff) * symbol_rate,
        nf_db=5.0,
        ge_db=5.0,
        ge_rx_db=21.0,
        temperature=290.0,
        alpha=1.0,
    )
    return ValidationScenario(
        name="electronics-hamada",
        predicted_reference_db=21.35,
        measured_db=19.9,
        params=params,
        assumptions={
            "alpha": 1.0,
            "rolloff": rolloff,
            "bandwidth_hz": (1 + rolloff) * symbol_rate,
            "nf_db": 5.0,
            "ge_tx_db": 5.0,
            "b_osc_hz": 6e9,
        },
    )


SCENARIOS = {
    "photonics-maekawa": photonics_maekawa,
    "electronics-hamada": electronics_hamada,
}
