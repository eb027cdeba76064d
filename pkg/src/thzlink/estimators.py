"""scikit-learn style wrappers around the signal chain.

Inputs are one-dimensional complex arrays (one row per sample or symbol), which
lets the stages compose in a :class:`sklearn.pipeline.Pipeline`. Stateless stages
accept ``fit`` as a no-op so they can sit anywhere in a pipeline.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_complex_1d, make_rng
from .rx_dsp import IqImbalance, PllConfig, estimate_cfo_4th_power, pll_track
from .phase_noise import rotation
from .signal import (
    ComplexWaveform,
    make_constellation,
    make_rrc,
    matched_filter_and_decimate,
    ml_detect,
    pulse_shape,
)


def _complex(X):
    X = np.asarray(X)
    if X.ndim == 2 and X.shape[1] == 1:
        X = X[:, 0]
    return as_complex_1d("X", X)


class QamMapper(TransformerMixin, BaseEstimator):
    """Map symbol indices to unit-power Gray square-QAM points and back."""

    def __init__(self, order=16):
        self.order = order

    def fit(self, X=None, y=None):
        self.constellation_ = make_constellation(self.order)
        return self

    def transform(self, X):
        check_is_fitted(self, "constellation_")
        return self.constellation_.points[np.asarray(X, dtype=int)]

    def inverse_transform(self, X):
        check_is_fitted(self, "constellation_")
        return ml_detect(_complex(X), 1.0, self.constellation_, return_indices=True)


class PulseShaper(TransformerMixin, BaseEstimator):
    """Root-raised-cosine transmit filter; output has ``(n + span) * sps`` samples."""

    def __init__(self, rolloff=0.2, span=32, sps=4):
        self.rolloff = rolloff
        self.span = span
        self.sps = sps

    def fit(self, X=None, y=None):
        self.filter_ = make_rrc(self.rolloff, self.span, self.sps)
        return self

    def transform(self, X):
        check_is_fitted(self, "filter_")
        return pulse_shape(_complex(X), self.filter_).samples


class MatchedFilter(TransformerMixin, BaseEstimator):
    def __init__(self, rolloff=0.2, span=32, sps=4):
        self.rolloff = rolloff
        self.span = span
        self.sps = sps

    def fit(self, X=None, y=None):
        self.filter_ = make_rrc(self.rolloff, self.span, self.sps)
        return self

    def transform(self, X):
        check_is_fitted(self, "filter_")
        return matched_filter_and_decimate(ComplexWaveform(_complex(X), 1.0, self.sps), self.filter_)


class IqImbalanceTransformer(TransformerMixin, BaseEstimator):
    def __init__(self, amplitude_db=0.0, phase_deg=0.0):
        self.amplitude_db = amplitude_db
        self.phase_deg = phase_deg

    def fit(self, X=None, y=None):
        self.imbalance_ = IqImbalance(self.amplitude_db, np.deg2rad(self.phase_deg))
        return self

    def transform(self, X):
        check_is_fitted(self, "imbalance_")
        return self.imbalance_.apply(_complex(X))


class NoiseChannel(TransformerMixin, BaseEstimator):
    """Scale by the link's signal gain and add its receiver noise.

    ``params`` is a photonics or electronics parameter object. ``noise_scale``
    multiplies the noise amplitude (``sqrt(sps)`` refers closed-form powers to the
    symbol bandwidth).
    """

    def __init__(self, params=None, noise_scale=1.0, random_state=None):
        self.params = params
        self.noise_scale = noise_scale
        self.random_state = random_state

    def fit(self, X=None, y=None):
        from .simulation import LinkScenario

        self.gain_ = LinkScenario(self.params).signal_gain
        self._rng = make_rng(self.random_state)
        return self

    def transform(self, X):
        from .electronics import sample_noise_elec
        from .photonics import PhotonicsLinkParams, noise_components

        check_is_fitted(self, "gain_")
        x = _complex(X)
        if isinstance(self.params, PhotonicsLinkParams):
            noise = sum(noise_components(self.params, x, self._rng).values())
        else:
            noise = sample_noise_elec(self.params, x, self._rng)
        return self.gain_ * x + self.noise_scale * noise


class CfoCompensator(TransformerMixin, BaseEstimator):
    """Estimate a carrier frequency offset with the fourth-power method and remove it.

    ``cfo_`` is the frequency of the received spectrum's centre, positive when the
    signal is shifted up.
    """

    def __init__(self, sample_rate=128e9, n_fft=None):
        self.sample_rate = sample_rate
        self.n_fft = n_fft

    def fit(self, X, y=None):
        x = _complex(X)
        self.cfo_ = estimate_cfo_4th_power(ComplexWaveform(x, self.sample_rate, 1), self.n_fft)
        return self

    def transform(self, X):
        check_is_fitted(self, "cfo_")
        x = _complex(X)
        return x * rotation(x.size, self.sample_rate, self.cfo_)


class PhaseLockedLoop(TransformerMixin, BaseEstimator):
    """Second-order carrier phase tracker.

    ``fit_transform(z, reference)`` runs data aided; ``transform(z)`` runs
    decision directed on ``order``-QAM.
    """

    def __init__(self, detector_gain=1 / 15, oscillator_gain=1.0, damping=1.0, noise_bandwidth=0.0045, order=16):
        self.detector_gain = detector_gain
        self.oscillator_gain = oscillator_gain
        self.damping = damping
        self.noise_bandwidth = noise_bandwidth
        self.order = order

    def _config(self):
        return PllConfig(self.detector_gain, self.oscillator_gain, self.damping, self.noise_bandwidth)

    def fit(self, X, y=None):
        self.config_ = self._config()
        self.gains_ = self.config_.gains()
        return self

    def fit_transform(self, X, y=None, **fit_params):
        self.fit(X, y)
        out, self.phase_trace_ = pll_track(_complex(X), None if y is None else _complex(y), self.config_,
                                          make_constellation(self.order))
        return out

    def transform(self, X):
        check_is_fitted(self, "config_")
        out, self.phase_trace_ = pll_track(_complex(X), None, self.config_, make_constellation(self.order))
        return out


class QamDetector(ClassifierMixin, BaseEstimator):
    """Minimum-distance detector; ``fit`` estimates the channel gain from mean power."""

    def __init__(self, order=16, gain=None):
        self.order = order
        self.gain = gain

    def fit(self, X, y=None):
        self.constellation_ = make_constellation(self.order)
        self.classes_ = np.arange(self.order)
        self.gain_ = float(self.gain) if self.gain is not None else float(np.sqrt(np.mean(np.abs(_complex(X)) ** 2)))
        return self

    def predict(self, X):
        check_is_fitted(self, "gain_")
        return ml_detect(_complex(X), self.gain_, self.constellation_, return_indices=True)

    def predict_bits(self, X):
        return self.constellation_.indices_to_bits(self.predict(X))
