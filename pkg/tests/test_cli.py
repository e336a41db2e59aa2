import json
import subprocess
import sys

import pytest

from carleman.cli import RunConfig, build_parser, main
from carleman.io import read_csv


def run_json(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_check_cospow_passes(capsys):
    code, rep = run_json(["check", "--family", "cospow", "--alpha", "1.999999", "--beta", "2.474917", "--theta-deg", "95.4"], capsys)
    assert code == 0
    assert rep["admissible"] is True


def test_check_sverak_100_fails(capsys):
    code, rep = run_json(["check", "--family", "sverak", "--theta-deg", "100"], capsys)
    assert code == 1
    assert rep["admissible"] is False


def test_figure4_positive(tmp_path, capsys):
    out = tmp_path / "fig4.csv"
    assert main(["figure", "--id", "4", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["psi_rad", "g_value"]
    assert len(rows) == 4001
    assert min(r[1] for r in rows) >= 0


@pytest.mark.parametrize("fid, header", [(1, ["psi_rad", "eq6_value"]), (2, ["psi_rad", "eq6_value"]), (3, ["psi_rad", "lambda_min", "lambda_max"])])
def test_other_figures(tmp_path, capsys, fid, header):
    out = tmp_path / f"fig{fid}.csv"
    assert main(["figure", "--id", str(fid), "--out", str(out)]) == 0
    h, rows = read_csv(out)
    assert h == header
    if fid == 3:
        assert all(r[1] < 0 < r[2] for r in rows)
    else:
        summary = json.loads(capsys.readouterr().out)
        assert summary["pass"] is True


def test_figure_outputs_byte_identical(tmp_path, capsys, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["figure", "--id", "2", "--out", str(a)])
    first = capsys.readouterr().out
    monkeypatch.setenv("CARLEMAN_THREADS", "4")
    main(["figure", "--id", "2", "--out", str(b)])
    second = capsys.readouterr().out
    assert a.read_bytes() == b.read_bytes()
    assert first.replace(str(a), "") == second.replace(str(b), "")


def test_json_report_byte_identical(tmp_path):
    paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
    for p in paths:
        assert main(["checks", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rep = json.loads(paths[0].read_text())
    assert rep["g_cross_section"]["positive"] and rep["eigen_separation"]["separated"]
    assert rep["tau2_budget"]["positive"]


def test_scan_sverak(capsys):
    code, rep = run_json(["scan", "--family", "sverak"], capsys)
    assert code == 0
    assert abs(rep["theta_min_deg"] - 109.47) <= 0.3


def test_optimize(capsys):
    code, rep = run_json(["optimize", "--family", "cospow", "--alpha", "1.9", "--beta", "2.0", "--free", "alpha,beta", "--theta-deg", "95.4"], capsys)
    assert code == 0 and rep["admissible"]


def test_ode(tmp_path, capsys):
    csv_path = tmp_path / "ode.csv"
    code, rep = run_json(["ode", "--csv", str(csv_path)], capsys)
    assert code == 0
    assert 94.0 <= rep["theta_deg"] <= 95.5
    assert read_csv(csv_path)[0] == ["psi_rad", "f", "fp", "fpp"]


def test_elliptic(capsys):
    code, rep = run_json(["elliptic", "--theta-deg", "120"], capsys)
    assert code == 0
    assert rep["exponents"]["discrepancy_flag"] is True


def test_escauriaza_verdicts(capsys):
    code, rep = run_json(["escauriaza", "--theta-deg", "55"], capsys)
    assert code == 0 and rep["verdict"] == "bounded"
    code, rep = run_json(["escauriaza", "--theta-deg", "65"], capsys)
    assert code == 1 and rep["verdict"] == "unbounded"


def test_config_overrides_flags(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"subcommand": "check", "family": "sverak", "theta_deg": 110.0, "grid_n": 1001}))
    code, rep = run_json(["check", "--family", "cospow", "--theta-deg", "100", "--config", str(cfg)], capsys)
    assert code == 0
    assert rep["family"] == "sverak" and rep["grid_n"] == 1001 and rep["theta_deg"] == 110.0


def test_config_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"theta_deg": 110.0, "colour": "blue"}))
    assert main(["check", "--theta-deg", "100", "--config", str(cfg)]) == 2
    assert "unknown config key" in capsys.readouterr().err


def test_config_subcommand_mismatch(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"subcommand": "scan"}))
    assert main(["check", "--theta-deg", "100", "--config", str(cfg)]) == 2


def test_weight_json_input(capsys):
    doc = json.dumps({"family": "cospow", "alpha": 1.999999, "beta": 2.474917})
    code, rep = run_json(["check", "--weight", doc, "--theta-deg", "95.4"], capsys)
    assert code == 0


def test_domain_error_is_usage_error(capsys):
    assert main(["check", "--family", "sverak", "--theta-deg", "200"]) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["figure", "--id", "7"])
    assert info.value.code == 2


def test_run_config_namespace():
    ns = build_parser().parse_args(["elliptic"])
    cfg = RunConfig.from_namespace(ns)
    assert cfg.subcommand == "elliptic" and "func" not in cfg.options


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "carleman", "check", "--family", "sverak", "--theta-deg", "100"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["admissible"] is False
