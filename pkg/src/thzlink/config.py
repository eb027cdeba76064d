"""Experiment configuration: TOML files layered over defaults, plus ``key=value`` overrides."""

import copy
import hashlib
import json
import math

import numpy as np
import tomli

from .exceptions import ConfigError

DEFAULTS = {
    "experiment": {
        "chain": "photonics",
        "seed": 1,
        "symbols": 100_000,
        "min_errors": 100,
        "workers": 1,
    },
    "signal": {
        "modulations": [4, 16, 64, 256],
        "sps": 4,
        "rolloff": 0.2,
        "span": 32,
        "symbol_rate": 32e9,
    },
    "photonics": {
        "case": "fixed-gain",
        "edfa_input_dbm": 5.0,
        "edfa_gain_db": 18.0,
        "edfa_output_dbm": 23.0,
        "lo_total_dbm": 19.25,
        "rin_db": -145.0,
        "responsivity": 0.7,
        "nu": 193.4e12,
        "b_opt": 2e12,
        "bandwidth": 40e9,
        "nf_db": 5.0,
        "ge_db": 5.0,
        "temperature": 290.0,
        "alpha": 1.0,
    },
    "electronics": {
        "p_s_dbm": 6.9,
        "p_lo_dbm": 20.0,
        "n": 20,
        "floor_tx_dbc": -135.4,
        "floor_rx_dbc": -155.0,
        "b_osc": 6e9,
        "bandwidth": 40e9,
        "nf_db": 5.0,
        "ge_db": 5.0,
        "temperature": 290.0,
        "alpha": 1.0,
        "tx_sideband_factor": 2.0,
        "tx_after_multiplier": True,
        "rx_sideband_factor": 1.0,
        "rx_after_multiplier": False,
    },
    "impairments": {
        "noise": "full",
        "phase_noise": "none",
        "linewidth_hz": 0.0,
        "n_lasers": 4,
        "k0_db": -145.0,
        "k2": 10.0,
        "k3": 1e4,
        "fir_taps": 0,
        "cfo_hz": 0.0,
        "estimate_cfo": False,
        "iq_amplitude_db": 0.0,
        "iq_phase_deg": 0.0,
        "pll": False,
        "pll_detector_gain": 1.0 / 15.0,
        "pll_oscillator_gain": 1.0,
        "pll_damping": 1.0,
        "pll_bandwidth": 0.0045,
    },
    "sweep": {
        "axis": "p_rx_dbm",
        "values": [],
        "start": -50.0,
        "stop": -20.0,
        "step": 1.0,
    },
    "suite": {
        "axis": "linewidth_hz",
        "values": [0.0, 1e4, 1e5, 1e6],
        "target_ber": 1e-2,
        "offsets_db": [],
    },
    "noise_stats": {
        "samples": 1_000_000,
        "order": 256,
        "bins": 61,
    },
    "psd": {
        "sample_rate": 1e9,
        "samples": 2**21,
        "nperseg": 2**16,
        "fir_taps": 0,
        "floor_sample_rate": 128e9,
        "floor_samples": 2**18,
        "floor_nperseg": 2**12,
        "k0_db": [-145.0],
        "k2": [10.0, 100.0, 1000.0],
        "k3": [1e4],
    },
    "validation": {"scenarios": ["photonics-maekawa", "electronics-hamada"]},
    "budget": {
        "gain_tx_dbi": 40.0,
        "gain_rx_dbi": 40.0,
        "distance": 1.0,
        "frequency": 300e9,
        "kappa": 0.058,
        "offset": 2e-3,
        "divergence": 10e-3,
    },
}

#: Keys that change where or how fast results are produced, never their values.
NON_SEMANTIC = {("experiment", "workers")}


def _merge(base, override, path=()):
    for key, value in override.items():
        if key not in base:
            raise ConfigError(f"unknown configuration key {'.'.join(path + (key,))!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{'.'.join(path + (key,))!r} must be a table")
            _merge(base[key], value, path + (key,))
        else:
            base[key] = _coerce(base[key], value, path + (key,))
    return base


def _coerce(default, value, path):
    name = ".".join(path)
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{name!r} must be true or false")
        return value
    if isinstance(default, (int, float)) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name!r} must be a number, got {value!r}")
        return type(default)(value) if isinstance(default, float) or float(value).is_integer() else value
    if isinstance(default, list):
        if not isinstance(value, list):
            value = [value]
        return value
    if isinstance(default, str) and not isinstance(value, str):
        raise ConfigError(f"{name!r} must be a string")
    return value


def parse_override(text):
    """Split ``section.key=value`` and parse the value as a TOML literal when possible."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    try:
        value = tomli.loads(f"v = {raw}")["v"]
    except tomli.TOMLDecodeError:
        value = raw
    parts = key.strip().split(".")
    tree = value
    for part in reversed(parts):
        tree = {part: tree}
    return tree


def load_config(path=None, overrides=(), **top_level):
    """Resolve a full configuration from defaults layered under an optional TOML file and overrides.

    ``top_level`` accepts ``seed``, ``symbols`` and ``workers`` shortcuts for the
    ``experiment`` table.
    """
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            with open(path, "rb") as fh:
                _merge(cfg, tomli.load(fh))
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    for text in overrides:
        _merge(cfg, parse_override(text))
    for key, value in top_level.items():
        if value is not None:
            _merge(cfg, {"experiment": {key: value}})
    validate(cfg)
    return cfg


def validate(cfg):
    exp = cfg["experiment"]
    if exp["chain"] not in ("photonics", "electronics"):
        raise ConfigError(f"chain must be photonics or electronics, got {exp['chain']!r}")
    if exp["symbols"] < 1 or exp["workers"] < 1:
        raise ConfigError("symbols and workers must be positive")
    if not 0 <= exp["seed"] < 2**64:
        raise ConfigError("seed must fit in an unsigned 64-bit integer")
    for m in cfg["signal"]["modulations"]:
        if m not in (4, 16, 64, 256):
            raise ConfigError(f"unsupported modulation order {m!r}")
    grid = sweep_values(cfg)
    if len(grid) == 0:
        raise ConfigError("sweep grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise ConfigError("sweep grid must be strictly increasing")


def sweep_values(cfg):
    sw = cfg["sweep"]
    if sw["values"]:
        return np.asarray(sw["values"], dtype=float)
    if sw["step"] <= 0:
        raise ConfigError("sweep step must be positive")
    n = int(math.floor((sw["stop"] - sw["start"]) / sw["step"] + 1e-9)) + 1
    return sw["start"] + sw["step"] * np.arange(max(n, 0))


def param_hash(cfg):
    """Short SHA-256 digest of every setting that influences results."""
    trimmed = copy.deepcopy(cfg)
    for section, key in NON_SEMANTIC:
        trimmed[section].pop(key, None)
    blob = json.dumps(trimmed, sort_keys=True, default=float).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def point_seed(master, index):
    """Seed of sweep point ``index``: a hash of the master seed and the index."""
    return int(np.random.SeedSequence([int(master), int(index)]).generate_state(1, np.uint64)[0])
