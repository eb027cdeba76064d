import numpy as np
import pytest

from thzlink.electronics import ElectronicsLinkParams
from thzlink.exceptions import ParameterError
from thzlink.photonics import PhotonicsLinkParams
from thzlink.simulation import LinkScenario, p_rx_dbm, simulate_link


def test_noiseless_chain_is_error_free():
    for params in (PhotonicsLinkParams.from_levels(), ElectronicsLinkParams.from_levels()):
        for order in (4, 256):
            res = simulate_link(LinkScenario(params, order=order, n_symbols=50_000, noise="none"), 1)
            assert res.ber.errors == 0


def test_seed_determinism():
    scn = LinkScenario(PhotonicsLinkParams.from_levels(alpha=0.15), order=16, n_symbols=5000)
    a = simulate_link(scn, 3, keep_symbols=True)
    b = simulate_link(scn, 3, keep_symbols=True)
    np.testing.assert_array_equal(a.symbols, b.symbols)
    assert a.ber == b.ber


def test_thermal_mode_matches_reference():
    p = PhotonicsLinkParams.from_levels()
    p = p.with_(alpha=p.alpha_for_received_power(10 ** (-4.2) * 1e-3))
    scn = LinkScenario(p, order=16, n_symbols=100_000, noise="thermal")
    res = simulate_link(scn, 2)
    lo, hi = res.ber.wilson_interval()
    assert lo <= scn.reference_ber() <= hi


def test_received_power_in_dbm():
    p = PhotonicsLinkParams.from_levels()
    scn = LinkScenario(p.with_(alpha=p.alpha_for_received_power(1e-6)))
    assert p_rx_dbm(scn) == pytest.approx(-30.0)


def test_bad_noise_mode():
    with pytest.raises(ParameterError):
        LinkScenario(PhotonicsLinkParams.from_levels(), noise="pink")


def test_cfo_removed_by_estimator():
    p = PhotonicsLinkParams.from_levels()
    scn = LinkScenario(p, order=16, n_symbols=20_000, noise="none", cfo=7.5e8, estimate_cfo=True)
    res = simulate_link(scn, 1)
    assert abs(res.cfo_estimate - 7.5e8) < 128e9 / (4 * 2**20)
    assert res.ber.errors == 0
