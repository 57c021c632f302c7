import json
import math

import pytest

from phaseconj.cli import main
from phaseconj.config import config_from_dict, config_hash, default_config_dict
from phaseconj.io import read_csv


def _write_cfg(tmp_path, **changes):
    d = default_config_dict()
    for path, value in changes.items():
        node = d
        keys = path.split(".")
        for k in keys[:-1]:
            node = node[int(k)] if k.isdigit() else node[k]
        node[keys[-1]] = value
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(d))
    return str(p)


def _run(tmp_path, *argv, out="out"):
    return main([argv[0], "--out", str(tmp_path / out), *argv[1:]])


def test_design_default(tmp_path):
    assert _run(tmp_path, "design") == 0
    rows = dict(line.split(",") for line in (tmp_path / "out" / "design.csv").read_text().splitlines()[1:])
    assert rows["regime"] == "PhaseConjugation"
    assert float(rows["C"]) == pytest.approx(0.025, rel=1e-12)
    meta = json.loads((tmp_path / "out" / "design.json").read_text())
    assert meta["subcommand"] == "design" and meta["config_hash"]


def test_design_regime_unavailable(tmp_path):
    assert _run(tmp_path, "design", "--config", _write_cfg(tmp_path, **{"cavity.kappa": 0.6})) == 3


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{ not json")
    assert _run(tmp_path, "design", "--config", str(p)) == 2


def test_bad_field_names_field(tmp_path, capsys):
    assert _run(tmp_path, "design", "--config", _write_cfg(tmp_path, **{"modes.0.gamma": -1.0})) == 2
    assert "modes[0].gamma" in capsys.readouterr().err


def test_units_must_be_natural():
    d = default_config_dict()
    d["units"] = "SI"
    with pytest.raises(Exception):
        config_from_dict(d)


def test_config_hash_stable(tmp_path):
    p = _write_cfg(tmp_path)
    assert config_hash(p) == config_hash(p) != config_hash(_write_cfg(tmp_path, **{"cavity.kappa": 0.3}))


def test_fig1(tmp_path):
    assert _run(tmp_path, "fig1", "--grid", "0.001:100:21", "--log") == 0
    header, rows = read_csv(tmp_path / "out" / "fig1.csv")
    assert header == ["T_eff", "T_qubit_pc", "T_qubit_linear"]
    assert rows.shape == (21, 3)
    meta = json.loads((tmp_path / "out" / "fig1.json").read_text())
    assert -1.1 <= meta["results"]["slope_pc"] <= -0.9


def test_fig2(tmp_path):
    assert _run(tmp_path, "fig2", "--grid", "0.001:2:21", "--log") == 0
    header, rows = read_csv(tmp_path / "out" / "fig2.csv")
    assert header == ["sigma_F", "T_qubit_pc", "T_qubit_linear"]
    assert all(math.isfinite(v) for v in rows.ravel())
    assert rows[0, 1] < 0 < rows[-1, 1]


def test_spectrum_with_mc(tmp_path):
    assert _run(tmp_path, "spectrum", "--grid=-3:3:61", "--mc", "4", "--nperseg", "256") == 0
    header, _ = read_csv(tmp_path / "out" / "spectrum.csv")
    assert header[0] == "omega"
    header, rows = read_csv(tmp_path / "out" / "spectrum_mc.csv")
    assert header == ["omega", "value", "stderr", "expected"]
    assert rows.shape == (256, 4)


def test_validate_rwa_reports(tmp_path):
    code = _run(tmp_path, "validate-rwa", "--periods", "0.5", "--detune", "0")
    meta = json.loads((tmp_path / "out" / "validate-rwa.json").read_text())
    assert code == (0 if meta["results"]["rms"] <= 0.02 else 1)
    assert (tmp_path / "out" / "validate_rwa.csv").exists()


def test_echo(tmp_path):
    assert _run(tmp_path, "echo", "--samples", "21") == 0
    header, _ = read_csv(tmp_path / "out" / "echo_trace.csv")
    assert header == ["t", "residual_1", "residual_2"]
    header, _ = read_csv(tmp_path / "out" / "echo_sweep.csv")
    assert header == ["bandwidth", "residual_abs", "quadrature_abs"]


def test_echo_plan_mismatch(tmp_path):
    assert _run(tmp_path, "echo", "--t1", "5") == 4


def test_csv_line_endings(tmp_path):
    _run(tmp_path, "design")
    raw = (tmp_path / "out" / "design.csv").read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")


@pytest.mark.parametrize("argv", [
    ("design",),
    ("fig1", "--grid", "0.01:50:9", "--log"),
    ("spectrum", "--mc", "3", "--nperseg", "128", "--seed", "5"),
    ("echo", "--samples", "11", "--bandwidth", "0.01"),
])
def test_rerun_byte_identical(tmp_path, argv):
    assert _run(tmp_path, *argv, out="a") == _run(tmp_path, *argv, out="b")
    a = sorted((tmp_path / "a").glob("*.csv"))
    assert a
    for f in a:
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
