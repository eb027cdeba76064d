import numpy as np
import pytest
from scipy import signal as sps_signal

from thzlink.constants import lin_to_db
from thzlink.exceptions import ParameterError
from thzlink.phase_noise import (
    LaserPhaseModel,
    RfPhaseModel,
    apply_cfo_and_phase,
    band_average,
    estimate_psd,
    fir_coeffs,
    rf_phase,
    rotation,
    ssb_from_psd,
    wiener_phase,
)
from thzlink.signal import ComplexWaveform


def test_fir_recurrence_a3():
    np.testing.assert_allclose(fir_coeffs(3, 4), [1, 1.5, 1.875, 2.1875])


def test_fir_a2_is_running_sum():
    np.testing.assert_allclose(fir_coeffs(2, 50), np.ones(50))


def test_fir_a3_positive_increasing():
    h = fir_coeffs(3, 4096)
    assert np.all(h > 0) and np.all(np.diff(h) > 0)


def test_wiener_increment_std():
    m = LaserPhaseModel(1e5, 4, 2.5e-10)
    assert np.sqrt(m.increment_variance) == pytest.approx(np.sqrt(8 * np.pi * 1e5 * 2.5e-10), rel=1e-12)
    assert np.sqrt(m.increment_variance) == pytest.approx(2.507e-2, rel=1e-3)
    steps = np.diff(m.sample(200_001, 1))
    assert np.std(steps) == pytest.approx(np.sqrt(m.increment_variance), rel=0.01)


def test_four_lasers_have_four_times_the_variance():
    one = np.var(np.diff(wiener_phase(1e5, 1, 1e-10, 10**6, 1)))
    four = np.var(np.diff(wiener_phase(1e5, 4, 1e-10, 10**6, 2)))
    assert four / one == pytest.approx(4.0, rel=0.05)


def test_zero_linewidth_is_zero_phase():
    np.testing.assert_array_equal(wiener_phase(0.0, 4, 1e-10, 100, 0), np.zeros(100))


def test_laser_spectrum_is_lorentzian():
    """|E(f)|^2 of exp(j phi) has full width at half maximum n_lasers * linewidth."""
    fs = 1e8
    model = LaserPhaseModel(2e4, 4, 1 / fs)
    phi = model.sample(2**22, 9)
    f, p = sps_signal.welch(np.exp(1j * phi), fs, nperseg=2**18, return_onesided=False)
    order = np.argsort(f)
    f, p = f[order], p[order]
    half = p.max() / 2
    above = f[p >= half]
    fwhm = above.max() - above.min()
    assert fwhm == pytest.approx(4 * 2e4, rel=0.25)


def test_model_psd_at_1mhz():
    for k2, expect in [(10, -110), (100, -100), (1000, -90)]:
        m = RfPhaseModel.from_db(-145, k2, 1e4)
        assert lin_to_db(m.psd(1e6)) == pytest.approx(expect, abs=0.1)


def test_ssb_relation():
    assert ssb_from_psd(2e-11) == pytest.approx(-110.0)
    with pytest.raises(ParameterError):
        ssb_from_psd(-1.0)


def test_white_component_floor():
    fs = 1e9
    m = RfPhaseModel.from_db(-130, 0, 0, tau=1 / fs, n_taps=16)
    f, p = estimate_psd(rf_phase(m, 2**20, 2), fs, 2**12)
    assert lin_to_db(np.mean(p[10:-10])) == pytest.approx(-130, abs=0.3)


def test_k2_component_slope():
    fs = 1e9
    m = RfPhaseModel.from_db(-300, 100, 0, tau=1 / fs)
    f, p = estimate_psd(rf_phase(m, 2**21, 3), fs, 2**16)
    at1 = band_average(f, p, 1e6)
    at4 = band_average(f, p, 4e6)
    assert lin_to_db(at1 / at4) == pytest.approx(20 * np.log10(4), abs=1.0)
    assert lin_to_db(at1) == pytest.approx(-100, abs=1.0)


def _loglog_slope(f, p, lo, hi):
    sel = (f >= lo) & (f <= hi)
    return np.polyfit(np.log10(f[sel]), np.log10(p[sel]), 1)[0]


def test_slope_exponents():
    fs = 1e9
    f, p = estimate_psd(rf_phase(RfPhaseModel(k3=1e4, tau=1 / fs), 2**21, 4), fs, 2**16)
    assert _loglog_slope(f, p, 1e5, 1e7) == pytest.approx(-3.0, abs=0.15)
    f, p = estimate_psd(rf_phase(RfPhaseModel(k2=100, tau=1 / fs), 2**21, 5), fs, 2**16)
    assert _loglog_slope(f, p, 1e5, 1e7) == pytest.approx(-2.0, abs=0.15)


def test_truncated_filter_adds_3db_to_k2_part():
    """Steady-state moving sum: |1 - z^N|^2 averages 2 above 1/(N tau)."""
    fs = 1e9
    m = RfPhaseModel(k2=100, tau=1 / fs, n_taps=2**12)
    f, p = estimate_psd(rf_phase(m, 2**21, 6), fs, 2**16)
    assert lin_to_db(band_average(f, p, 1e7, 0.3) / m.psd(1e7)) == pytest.approx(3.0, abs=0.5)


def test_zero_model_gives_zero_path():
    np.testing.assert_array_equal(rf_phase(RfPhaseModel(), 64, 0), np.zeros(64))


def test_increment_variances():
    m = RfPhaseModel(k0=1e-14, k2=10, k3=1e4, tau=1e-9)
    assert m.var_w0 == pytest.approx(1e-5)
    assert m.var_w2 == pytest.approx(4 * 10 * 1e-9 * np.pi**2)
    assert m.var_w3 == pytest.approx(8 * 1e4 * 1e-18 * np.pi**3)


def test_complex_psd_two_sided_integral():
    rng = np.random.default_rng(0)
    x = (rng.standard_normal(2**16) + 1j * rng.standard_normal(2**16)) / np.sqrt(2)
    f, p = estimate_psd(x, 10.0, 1024)
    assert np.sum(p) * (f[1] - f[0]) == pytest.approx(1.0, rel=0.03)


def test_rotation_and_apply():
    r = rotation(8, 8.0, cfo=1.0)
    np.testing.assert_allclose(r, np.exp(-2j * np.pi * np.arange(8) / 8.0))
    w = ComplexWaveform(np.ones(8, complex), 8.0, 1)
    np.testing.assert_allclose(apply_cfo_and_phase(w, 0.0, np.full(8, np.pi / 2)).samples, -1j * np.ones(8), atol=1e-15)
    with pytest.raises(ParameterError):
        rotation(8, 1.0, phase=np.zeros(3))


def test_rf_phase_deterministic():
    m = RfPhaseModel.from_db(-140, 10, 1e4, n_taps=256)
    np.testing.assert_array_equal(rf_phase(m, 1000, 5), rf_phase(m, 1000, 5))
