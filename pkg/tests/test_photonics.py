import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thzlink.constants import ELEMENTARY_CHARGE, PLANCK
from thzlink.exceptions import ParameterError
from thzlink.photonics import (
    PhotonicsLinkParams,
    noise_breakdown,
    noise_components,
    sample_lo_noise,
    sample_tx_noise,
    sin_sdn_split,
    snr_rx,
    snr_tx,
)


def _snr_tx_oracle(p_in_dbm, gain_db, rin_db, R=0.7, B=40e9, b_opt=2e12, nu=193.4e12):
    """Transmit SNR written out from raw constants, independent of the package helpers."""
    g = 10 ** (gain_db / 10)
    each_in = 10 ** (p_in_dbm / 10) * 1e-3 / 2
    p1 = p2 = each_in * g
    s = 2 * g * PLANCK * nu * b_opt + g * 2 * each_in**2 * 10 ** (rin_db / 10) * b_opt
    shot = ELEMENTARY_CHARGE * R * B * (p1 + p2 + s)
    snr = 4 * R**2 * p1 * p2 / (4 * shot + R**2 * s**2 + 2 * R**2 * s * (p1 + p2))
    return 10 * np.log10(snr)


@pytest.mark.parametrize("p_in,gain,rin", [(5, 18, -145), (3, 20, -145), (10, 20, -150), (-5, 25, -140)])
def test_snr_tx_matches_oracle(p_in, gain, rin):
    p = PhotonicsLinkParams.from_levels(edfa_input_dbm=p_in, edfa_gain_db=gain, rin_db=rin)
    assert snr_tx(p) == pytest.approx(_snr_tx_oracle(p_in, gain, rin), abs=1e-9)


def test_operating_point_snr(photonics_point):
    assert snr_tx(photonics_point) == pytest.approx(34.6, abs=0.1)
    db, nb = snr_rx(photonics_point)
    assert db == pytest.approx(29.0, abs=0.1)
    assert nb.total == pytest.approx(sum(nb.terms.values()), rel=1e-12)


def test_sin_plus_sdn_equals_total(photonics_point):
    for alpha in (1e-3, 0.1, 1.0):
        nb = noise_breakdown(photonics_point.with_(alpha=alpha))
        assert nb.sin + nb.sdn == pytest.approx(nb.total, rel=1e-12)


def test_received_snr_below_transmit_snr(photonics_point):
    for alpha in np.geomspace(1e-3, 10, 9):
        assert snr_rx(photonics_point.with_(alpha=alpha))[0] < snr_tx(photonics_point)


def test_received_snr_saturates_to_below_transmit():
    p = PhotonicsLinkParams.from_levels(alpha=1e4)
    assert snr_rx(p)[0] < snr_tx(p)


def test_received_power_and_alpha_inverse(photonics_point):
    a = photonics_point.alpha_for_received_power(1e-6)
    assert photonics_point.with_(alpha=a).received_power == pytest.approx(1e-6)


def test_zero_lasers_rejected():
    with pytest.raises(ParameterError):
        snr_tx(PhotonicsLinkParams(0.0, 0.1, 0.1, 0.1))
    with pytest.raises(ParameterError):
        PhotonicsLinkParams(-1.0, 0.1, 0.1, 0.1)


def test_transmit_noise_power_oracle(photonics_point):
    rng = np.random.default_rng(11)
    x = np.exp(2j * np.pi * rng.random(1_000_000))
    n = sample_tx_noise(photonics_point, x, rng)
    assert np.mean(np.abs(n) ** 2) == pytest.approx(photonics_point.noise_tx_power, rel=0.01)


def test_x_scaled_term_conditional_variance(photonics_point):
    p = photonics_point
    rng = np.random.default_rng(5)
    n = 1_000_000
    lo = sample_tx_noise(p, np.full(n, 0.2 + 0j), rng)
    hi = sample_tx_noise(p, np.full(n, 1.4 + 0j), rng)
    slope = (np.mean(np.abs(hi) ** 2) - np.mean(np.abs(lo) ** 2)) / (1.4**2 - 0.2**2)
    assert slope == pytest.approx(p.responsivity**2 * p.p1 * p.sigma2_opt / 2, rel=0.02)


def test_lo_noise_power_oracle(photonics_point):
    n = sample_lo_noise(photonics_point, 1_000_000, 3)
    assert np.mean(np.abs(n) ** 2) == pytest.approx(photonics_point.noise_lo_power, rel=0.01)
    assert abs(np.mean(n)) < 5 * np.sqrt(photonics_point.noise_lo_power / 1e6)


def test_aggregate_noise_oracle(photonics_point):
    rng = np.random.default_rng(8)
    x = np.exp(2j * np.pi * rng.random(1_000_000))
    total = sum(noise_components(photonics_point, x, rng).values())
    assert np.mean(np.abs(total) ** 2) == pytest.approx(noise_breakdown(photonics_point).total, rel=0.01)


def test_sampler_is_seed_deterministic(photonics_point):
    x = np.ones(100, complex)
    a = sample_tx_noise(photonics_point, x, 42)
    b = sample_tx_noise(photonics_point, x, 42)
    np.testing.assert_array_equal(a, b)


@settings(max_examples=40, deadline=None)
@given(
    p_in=st.floats(-10, 15),
    lo=st.floats(5, 25),
    alpha=st.floats(1e-3, 10),
    rin=st.floats(-160, -130),
)
def test_split_is_a_partition(p_in, lo, alpha, rin):
    p = PhotonicsLinkParams.from_levels(edfa_input_dbm=p_in, lo_total_dbm=lo, rin_db=rin, alpha=alpha)
    split = sin_sdn_split(p)
    assert split.sdn_percent + split.sin_percent == pytest.approx(100.0)
    assert 0 <= split.sdn_percent <= 100


def test_sdn_share_grows_with_received_power(photonics_point):
    shares = [sin_sdn_split(photonics_point.with_(alpha=a)).sdn_percent for a in np.geomspace(1e-3, 1, 10)]
    assert np.all(np.diff(shares) > 0)
