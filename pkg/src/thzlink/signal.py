"""QAM constellations with root-raised-cosine shaping and the matching detectors.

Every waveform here is a complex baseband sequence whose mean power is the mean
symbol power, so a unit-power constellation yields a unit-power waveform.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import signal as sps_signal
from scipy import special, stats
from scipy.optimize import brentq

from ._validation import as_complex_1d, require_positive
from .exceptions import ParameterError

SUPPORTED_ORDERS = (4, 16, 64, 256)


def _gray(n):
    return n ^ (n >> 1)


@dataclass(frozen=True)
class Constellation:
    """Unit-power square QAM with reflected-Gray labels on each rail.

    ``points[i]`` carries the label ``bits[i]``; the first half of each label
    selects the in-phase level and the second half the quadrature level.
    """

    order: int
    points: np.ndarray = field(repr=False)
    bits: np.ndarray = field(repr=False)
    levels: np.ndarray = field(repr=False)

    @property
    def bits_per_symbol(self):
        return self.bits.shape[1]

    @property
    def side(self):
        return len(self.levels)

    @property
    def min_distance(self):
        return float(self.levels[1] - self.levels[0])

    def indices_to_bits(self, indices):
        return self.bits[np.asarray(indices)].reshape(-1)

    def bits_to_indices(self, bits):
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1, self.bits_per_symbol)
        weights = 1 << np.arange(self.bits_per_symbol - 1, -1, -1)
        codes = bits @ weights
        lookup = np.empty(self.order, dtype=np.int64)
        lookup[self.bits @ weights] = np.arange(self.order)
        return lookup[codes]

    def random_indices(self, n, rng):
        return rng.integers(0, self.order, size=int(n))


def make_constellation(order):
    """Build the Gray-coded unit-power square QAM of the given order."""
    if order not in SUPPORTED_ORDERS:
        raise ParameterError(f"modulation order must be one of {SUPPORTED_ORDERS}, got {order!r}")
    side = int(round(np.sqrt(order)))
    k_rail = side.bit_length() - 1
    raw = 2.0 * np.arange(side) - (side - 1)
    # Mean power of the raw grid is 2 (L^2 - 1) / 3.
    levels = raw / np.sqrt(2.0 * (order - 1) / 3.0)
    i_idx, q_idx = np.divmod(np.arange(order), side)
    points = levels[i_idx] + 1j * levels[q_idx]
    shifts = np.arange(k_rail - 1, -1, -1)
    i_bits = (_gray(i_idx)[:, None] >> shifts) & 1
    q_bits = (_gray(q_idx)[:, None] >> shifts) & 1
    bits = np.hstack([i_bits, q_bits]).astype(np.uint8)
    for arr in (points, bits, levels):
        arr.setflags(write=False)
    return Constellation(order=order, points=points, bits=bits, levels=levels)


@dataclass(frozen=True)
class RrcFilter:
    """Root-raised-cosine taps with unit energy, ``span * sps + 1`` long."""

    rolloff: float
    span: int
    sps: int
    taps: np.ndarray = field(repr=False)

    @property
    def delay(self):
        """Group delay in samples."""
        return (len(self.taps) - 1) // 2


def make_rrc(rolloff=0.2, span=32, sps=4):
    """Design a unit-energy root-raised-cosine filter."""
    if not 0 < rolloff <= 1:
        raise ParameterError(f"roll-off must lie in (0, 1], got {rolloff!r}")
    if sps < 2 or span < 1:
        raise ParameterError("need sps >= 2 and span >= 1")
    t = np.arange(-span * sps / 2, span * sps / 2 + 1) / sps
    b = rolloff
    taps = np.empty_like(t)
    singular = np.isclose(np.abs(t), 1.0 / (4.0 * b))
    centre = np.isclose(t, 0.0)
    regular = ~(singular | centre)
    tr = t[regular]
    taps[regular] = (
        np.sin(np.pi * tr * (1 - b)) + 4 * b * tr * np.cos(np.pi * tr * (1 + b))
    ) / (np.pi * tr * (1 - (4 * b * tr) ** 2))
    taps[centre] = 1 + b * (4 / np.pi - 1)
    taps[singular] = (b / np.sqrt(2)) * (
        (1 + 2 / np.pi) * np.sin(np.pi / (4 * b)) + (1 - 2 / np.pi) * np.cos(np.pi / (4 * b))
    )
    taps /= np.sqrt(np.sum(taps**2))
    taps.setflags(write=False)
    return RrcFilter(rolloff=float(rolloff), span=int(span), sps=int(sps), taps=taps)


@dataclass
class ComplexWaveform:
    """Sampled complex baseband signal.

    ``samples`` holds ``(n_symbols + span) * sps`` values when produced by
    :func:`pulse_shape`; the extra ``span`` symbols are filter tails.
    """

    samples: np.ndarray
    sample_rate: float
    sps: int

    def __post_init__(self):
        self.samples = as_complex_1d("samples", self.samples)
        require_positive("sample_rate", self.sample_rate)
        if len(self.samples) % self.sps:
            raise ParameterError("waveform length must be a multiple of sps")

    def __len__(self):
        return len(self.samples)

    @property
    def time(self):
        return np.arange(len(self.samples)) / self.sample_rate

    def power(self):
        return float(np.mean(np.abs(self.samples) ** 2))

    def with_samples(self, samples):
        return ComplexWaveform(samples, self.sample_rate, self.sps)


def pulse_shape(symbols, filt, symbol_rate=1.0):
    """Upsample by ``filt.sps`` and filter with the RRC taps.

    The output is scaled by ``sqrt(sps)`` so that the waveform's mean power
    equals the mean symbol power.
    """
    symbols = as_complex_1d("symbols", symbols)
    if symbols.size == 0:
        raise ParameterError("symbol stream is empty")
    up = np.zeros(symbols.size * filt.sps, dtype=complex)
    up[:: filt.sps] = symbols
    shaped = sps_signal.oaconvolve(up, filt.taps) * np.sqrt(filt.sps)
    total = (symbols.size + filt.span) * filt.sps
    out = np.zeros(total, dtype=complex)
    out[: shaped.size] = shaped
    return ComplexWaveform(out, symbol_rate * filt.sps, filt.sps)


def matched_filter_and_decimate(waveform, filt):
    """Apply the matched RRC filter and sample once per symbol at the peak."""
    if waveform.sps != filt.sps:
        raise ParameterError(f"waveform sps {waveform.sps} differs from filter sps {filt.sps}")
    n_symbols = len(waveform) // filt.sps - filt.span
    if n_symbols <= 0:
        raise ParameterError("waveform is shorter than the filter span")
    filtered = sps_signal.oaconvolve(waveform.samples, filt.taps[::-1])
    start = len(filt.taps) - 1
    picks = filtered[start : start + n_symbols * filt.sps : filt.sps]
    return picks / np.sqrt(filt.sps)


def ml_detect(z, alpha, constellation, return_indices=False):
    """Minimum-distance decision of ``z`` against the scaled constellation ``alpha * c``.

    Square QAM decision regions factor into independent rails, so slicing each
    rail reproduces the exhaustive argmin exactly.
    """
    if not np.isfinite(alpha) or alpha <= 0:
        raise ParameterError(f"channel gain must be positive, got {alpha!r}")
    z = np.asarray(z, dtype=complex) / alpha
    levels = constellation.levels
    step = levels[1] - levels[0]
    side = len(levels)

    def rail(values):
        return np.clip(np.rint((values - levels[0]) / step), 0, side - 1).astype(np.int64)

    idx = rail(z.real) * side + rail(z.imag)
    return idx if return_indices else constellation.points[idx]


@dataclass(frozen=True)
class BerResult:
    """Bit-error ratio with the counts needed for confidence intervals."""

    errors: int
    bits: int

    @property
    def ber(self):
        return self.errors / self.bits if self.bits else float("nan")

    def wilson_interval(self, confidence=0.95):
        if self.bits == 0:
            return (0.0, 1.0)
        ci = stats.binomtest(self.errors, self.bits).proportion_ci(confidence, method="wilson")
        return (float(ci.low), float(ci.high))


def ber_count(tx_bits, rx_bits):
    """Count differing bits between two equal-length streams."""
    tx_bits = np.asarray(tx_bits).reshape(-1)
    rx_bits = np.asarray(rx_bits).reshape(-1)
    if tx_bits.shape != rx_bits.shape:
        raise ParameterError(f"bit streams differ in length: {tx_bits.size} vs {rx_bits.size}")
    return BerResult(errors=int(np.count_nonzero(tx_bits != rx_bits)), bits=int(tx_bits.size))


def evm(z, reference):
    """RMS error-vector magnitude relative to the RMS of the reference symbols."""
    z = np.asarray(z, dtype=complex)
    reference = np.asarray(reference, dtype=complex)
    if z.size == 0 or reference.size == 0:
        raise ParameterError("EVM needs at least one symbol")
    if z.shape != reference.shape:
        raise ParameterError("received and reference symbols differ in shape")
    return float(np.sqrt(np.mean(np.abs(z - reference) ** 2) / np.mean(np.abs(reference) ** 2)))


def evm_to_snr(evm_value):
    """SNR in dB implied by an EVM fraction, ``-20 log10(EVM)``."""
    require_positive("EVM", evm_value)
    return float(-20.0 * np.log10(evm_value))


def group_by_power(constellation, decimals=9):
    """Partition symbol indices by symbol power, ascending."""
    power = np.round(np.abs(constellation.points) ** 2, decimals)
    levels = np.unique(power)
    return [(float(p), np.flatnonzero(power == p)) for p in levels]


def qam_ber_awgn(order, snr):
    """Exact bit-error probability of Gray square QAM on AWGN.

    ``snr`` is the linear symbol SNR Es/N0. The sum enumerates every decision
    boundary crossing on one rail of the equivalent sqrt(M)-PAM.
    """
    if order not in SUPPORTED_ORDERS:
        raise ParameterError(f"modulation order must be one of {SUPPORTED_ORDERS}")
    snr = np.asarray(snr, dtype=float)
    side = int(round(np.sqrt(order)))
    k_rail = side.bit_length() - 1
    arg = np.sqrt(3.0 * snr / (2.0 * (order - 1)))
    total = np.zeros_like(snr)
    for k in range(1, k_rail + 1):
        stop = int((1 - 2.0**-k) * side)
        for i in range(stop):
            w = (-1) ** int(i * 2 ** (k - 1) / side) * (
                2 ** (k - 1) - int(i * 2 ** (k - 1) / side + 0.5)
            )
            total = total + w * special.erfc((2 * i + 1) * arg)
    out = total / (side * k_rail)
    return float(out) if out.ndim == 0 else out


def snr_for_ber(order, target_ber, lo_db=-10.0, hi_db=60.0):
    """Invert :func:`qam_ber_awgn` for the symbol SNR in dB reaching ``target_ber``."""
    tiny = np.finfo(float).tiny

    def gap(snr_db):
        return np.log(max(qam_ber_awgn(order, 10 ** (snr_db / 10)), tiny)) - np.log(target_ber)

    return brentq(gap, lo_db, hi_db)
