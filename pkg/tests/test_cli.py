import math

import pytest

from thzlink.cli import EXIT_CONFIG, EXIT_LOW_CONFIDENCE, EXIT_OK, main
from thzlink.experiments import Table
from thzlink.io import format_value, read_table, write_table


def test_format_value():
    assert format_value(1 / 3) == "0.333333333"
    assert format_value(True) == "1"
    assert format_value(7) == "7"
    assert format_value(float("nan")) == "nan"
    assert format_value("a,b") == "a,b"


def test_csv_quoting_roundtrip(tmp_path):
    t = Table("t", ["name", "value"])
    t.add(name='a,"b"', value=1.5)
    path = write_table(t, tmp_path)
    raw = path.read_bytes()
    assert raw.startswith(b"name,value\r\n")
    assert b'"a,""b"""' in raw
    assert read_table(path) == [{"name": 'a,"b"', "value": "1.5"}]


def test_budget_command(tmp_path):
    assert main(["budget", "--out", str(tmp_path)]) == EXIT_OK
    row = read_table(tmp_path / "budget.csv")[0]
    assert float(row["alpha"]) == pytest.approx(0.72, abs=0.02)
    assert len(row["param_hash"]) == 16


def test_config_error_exit_code(tmp_path, capsys):
    assert main(["snr-sweep", "--out", str(tmp_path), "--set", "photonics.bogus=1"]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err
    assert main(["snr-sweep", "--out", str(tmp_path), "--set", "sweep.axis=\"floor_tx_dbc\""]) == EXIT_CONFIG


def test_low_confidence_exit_code(tmp_path):
    rc = main(["ber-sweep", "--out", str(tmp_path), "--symbols", "10000",
               "--set", "signal.modulations=[4]", "--set", "sweep.values=[-30.0]"])
    assert rc == EXIT_LOW_CONFIDENCE
    row = read_table(tmp_path / "ber_sweep.csv")[0]
    assert row["low_confidence"] == "1"


def test_snr_sweep_case_two_flags_infeasible(tmp_path):
    rc = main(["snr-sweep", "--out", str(tmp_path), "--set", "photonics.case=\"fixed-output\"",
               "--set", "sweep.axis=\"edfa_input_dbm\"", "--set", "sweep.values=[-13.0, 16.0, 25.0]"])
    assert rc == EXIT_OK
    rows = read_table(tmp_path / "snr_sweep.csv")
    assert [r["feasible"] for r in rows] == ["1", "1", "0"]
    assert float(rows[0]["edfa_gain_db"]) == pytest.approx(36.0)


def test_validate_and_psd_commands(tmp_path):
    assert main(["validate", "--out", str(tmp_path)]) == EXIT_OK
    rows = read_table(tmp_path / "validation.csv")
    assert {r["scenario"] for r in rows} == {"photonics-maekawa", "electronics-hamada"}
    rc = main(["psd", "--out", str(tmp_path), "--set", "psd.samples=65536", "--set", "psd.nperseg=8192",
               "--set", "psd.k2=[10.0]", "--set", "psd.floor_samples=16384"])
    assert rc == EXIT_OK


def _bytes(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


def test_identical_csv_across_runs_and_workers(tmp_path):
    args = ["ber-sweep", "--symbols", "20000", "--seed", "123",
            "--set", "signal.modulations=[16, 64]", "--set", "sweep.values=[-40.0, -36.0]"]
    outs = []
    for run, workers in enumerate(["1", "1", "2"]):
        d = tmp_path / f"run{run}"
        main(args + ["--out", str(d), "--workers", workers])
        outs.append(_bytes(d))
    assert outs[0] == outs[1] == outs[2]


def test_noise_stats_command(tmp_path):
    assert main(["noise-stats", "--out", str(tmp_path), "--set", "noise_stats.samples=200000"]) == EXIT_OK
    groups = read_table(tmp_path / "noise_groups.csv")
    assert len(groups) == 32
    pdf = read_table(tmp_path / "noise_pdf.csv")
    assert {r["group"] for r in pdf} == {"0", "31"}
    assert all(math.isfinite(float(r["density"])) for r in pdf)
