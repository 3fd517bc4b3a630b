import json
import subprocess
import sys

import pytest

from qesvar.cli import (
    EXIT_CONFIG,
    ConfigError,
    Report,
    RunConfig,
    build_report,
    main,
    parse_curve,
)

FAST_GRID = ["--grid-L", "5", "--grid-N", "600"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_exact_default(capsys):
    code, out, _ = run(capsys, "exact")
    assert code == 0
    doc = json.loads(out)
    assert doc["exact"]["energies"] == [-8.0, 0.0, 8.0]
    assert doc["exact"]["energies_exact"] == ["-8", "0", "8"]
    assert doc["exact"]["node_counts"] == [0, 2, 4]
    assert {v["check"] for v in doc["validation"]} >= {"n4_polynomials"}


def test_exact_n0(capsys):
    code, out, _ = run(capsys, "exact", "--alpha", "-3", "--n", "0")
    assert code == 0
    assert json.loads(out)["exact"]["energies"] == [0.0]


def test_condition_violation_exit_code(capsys, caplog):
    code, out, _ = run(capsys, "exact", "--alpha", "-10")
    assert code == EXIT_CONFIG
    assert out == ""
    assert "n = 3.5" in caplog.text


def test_bad_parity_degree(capsys):
    code, _, _ = run(capsys, "scan", "--parity", "odd", "--degree", "8")
    assert code == EXIT_CONFIG


def test_empty_window(capsys):
    code, _, _ = run(capsys, "scan", "--window=3,3")
    assert code == EXIT_CONFIG


def test_scan_curve_format(capsys):
    code, out, _ = run(capsys, "scan", "--window=-8.5,-7.5", "--step", "0.05")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# E delta"
    rows = parse_curve(out)
    assert len(rows) == 21
    assert rows[0][0] == -8.5 and rows[-1][0] == pytest.approx(-7.5)
    assert all(d >= 0 for _, d in rows)
    minima = [line for line in lines if line.startswith("# ") and line[2] in "-0123456789"]
    E_star = float(minima[0].split()[1])
    assert E_star == pytest.approx(-7.9164, abs=1e-3)
    code2, out2, _ = run(capsys, "scan", "--window=-8.5,-7.5", "--step", "0.05")
    assert out2 == out


def test_scan_output_file(capsys, tmp_path):
    path = tmp_path / "curve.txt"
    code, out, _ = run(capsys, "scan", "--window=-8,-7.8", "--step", "0.1", "-o", str(path))
    assert code == 0 and out == ""
    assert len(parse_curve(path.read_text())) == 3


def test_reference_command(capsys):
    code, out, _ = run(capsys, "reference", *FAST_GRID)
    assert code == 0
    ref = json.loads(out)["reference"]
    assert ref["N"] == 600 and len(ref["eigenvalues"]) == 20
    assert ref["eigenvalues"][0] == pytest.approx(-8.0, abs=1e-5)


def test_report_sections(capsys, tmp_path):
    cfg = {"grid": {"L": 5, "N": 600}, "report": {"table": [[1, 5], [3, 9]]}}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "report", "--config", str(path))
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"model", "exact", "variational", "reference", "validation"}
    entries = doc["variational"]["entries"]
    assert [(e["level"], e["degree"]) for e in entries] == [(1, 5), (3, 9)]
    assert entries[0]["deviation_percent"] < 0.1
    assert Report.from_dict(doc).to_dict() == doc


def test_report_without_reference(capsys):
    code, out, _ = run(capsys, "report", "--no-reference")
    assert code == 0
    doc = json.loads(out)
    assert doc["reference"] == {}
    assert all(e["deviation_percent"] is None for e in doc["variational"]["entries"])


def test_report_json_round_trip():
    cfg = RunConfig(reference=False, table=((1, 5),))
    rep = build_report(cfg)
    again = Report.from_dict(json.loads(rep.to_json()))
    assert again.to_json() == rep.to_json()


def test_config_parsing(tmp_path):
    cfg = RunConfig.from_dict({"model": {"alpha": -7, "n": 2}, "scan": {"window": [-5, 5], "step": 0.1}})
    assert cfg.alpha == -7 and cfg.n == 2 and cfg.window == (-5.0, 5.0)
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"bogus": 1})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"scan": {"step": -1}})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["exact", "--config", str(bad)]) == EXIT_CONFIG


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qesvar", "exact"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["exact"]["node_counts"] == [0, 2, 4]
