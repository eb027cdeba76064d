import pytest

from thzlink.config import (
    DEFAULTS,
    load_config,
    param_hash,
    parse_override,
    point_seed,
    sweep_values,
)
from thzlink.exceptions import ConfigError


def test_defaults_resolve():
    cfg = load_config()
    assert cfg["experiment"]["chain"] == "photonics"
    assert cfg == load_config()
    assert cfg is not DEFAULTS


def test_toml_file_and_override(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text('[experiment]\nchain = "electronics"\n[sweep]\nvalues = [-40.0, -30.0]\n')
    cfg = load_config(path, ["electronics.floor_rx_dbc=-160", "signal.modulations=[64]"], seed=9)
    assert cfg["experiment"]["chain"] == "electronics"
    assert cfg["electronics"]["floor_rx_dbc"] == -160.0
    assert cfg["signal"]["modulations"] == [64]
    assert cfg["experiment"]["seed"] == 9
    assert list(sweep_values(cfg)) == [-40.0, -30.0]


def test_override_parsing():
    assert parse_override("a.b=3") == {"a": {"b": 3}}
    assert parse_override('a="x"') == {"a": "x"}
    assert parse_override("a=word") == {"a": "word"}
    with pytest.raises(ConfigError):
        parse_override("novalue")


@pytest.mark.parametrize(
    "override",
    [
        "photonics.nonsense=1",
        "experiment.chain=\"optical\"",
        "signal.modulations=[32]",
        "sweep.values=[1.0, 0.0]",
        "photonics.rin_db=\"loud\"",
        "experiment.seed=-1",
        "impairments.pll=1",
    ],
)
def test_invalid_configs(override):
    with pytest.raises(ConfigError):
        load_config(overrides=[override])


def test_unreadable_and_malformed(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("[experiment\n")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_range_grid():
    cfg = load_config(overrides=["sweep.start=-3", "sweep.stop=0", "sweep.step=0.5"])
    assert list(sweep_values(cfg)) == [-3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0]


def test_hash_ignores_workers_only():
    base = load_config()
    assert param_hash(base) == param_hash(load_config(workers=4))
    assert param_hash(base) != param_hash(load_config(seed=2))


def test_point_seed_is_stable_and_distinct():
    assert point_seed(1, 0) == point_seed(1, 0)
    assert len({point_seed(1, i) for i in range(100)}) == 100
    assert 0 <= point_seed(2**64 - 1, 5) < 2**64
