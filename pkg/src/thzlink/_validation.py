"""Small argument checks that raise :class:`ParameterError` with uniform wording."""

import numpy as np

from .exceptions import NumericalError, ParameterError


def require_positive(name, value):
    if not np.isfinite(value) or value <= 0:
        raise ParameterError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def require_nonnegative(name, value):
    if not np.isfinite(value) or value < 0:
        raise ParameterError(f"{name} must be a nonnegative finite number, got {value!r}")
    return float(value)


def require_finite(name, array):
    array = np.asarray(array)
    if not np.all(np.isfinite(array)):
        raise NumericalError(f"{name} contains NaN or infinite values")
    return array


def as_complex_1d(name, values):
    array = np.asarray(values, dtype=complex)
    if array.ndim != 1:
        raise ParameterError(f"{name} must be one-dimensional, got shape {array.shape}")
    return array


def make_rng(seed):
    """Return a numpy Generator from a seed-like value or pass an existing Generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_normal(rng, variance, size):
    """Draw circularly symmetric complex Gaussian samples with the given total variance."""
    scale = np.sqrt(np.asarray(variance, dtype=float) / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
