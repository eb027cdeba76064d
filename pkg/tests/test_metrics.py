import numpy as np
import pytest

from thzlink.exceptions import EstimationError
from thzlink.metrics import analytic_crossing, crossing
from thzlink.signal import qam_ber_awgn


def test_crossing_log_interpolation():
    assert crossing([0, 1], [1e-2, 1e-4], 1e-3) == pytest.approx(0.5)


def test_crossing_zero_error_point():
    assert crossing([0, 1], [1e-2, 0.0], 1e-3) == pytest.approx(1 / 3)


def test_crossing_missing():
    with pytest.raises(EstimationError):
        crossing([0, 1, 2], [0.1, 0.05, 0.02], 1e-3)


def test_analytic_crossing_inverts_ber():
    x = analytic_crossing(lambda s: qam_ber_awgn(16, 10 ** (s / 10)), 1e-3, 0, 40)
    assert qam_ber_awgn(16, 10 ** (x / 10)) == pytest.approx(1e-3, rel=1e-6)


def test_analytic_crossing_handles_underflow():
    x = analytic_crossing(lambda s: qam_ber_awgn(4, 10 ** (s / 10)), 1e-3, 0, 200)
    assert np.isfinite(x)
