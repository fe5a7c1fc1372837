"""Command-line interface: exit codes, output shapes, determinism."""

import csv
import json
import math

import pytest

from multiboson.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_quick_passes(capsys):
    code, out, _ = _run(capsys, "validate", "--quick")
    assert code == 0
    assert "PASS" in out and "FAIL\n" not in out


def test_validate_printed_convention_expected_fail(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code = main(["validate", "--quick", "--hd-convention", "printed",
                 "--out", str(out_path)])
    capsys.readouterr()
    assert code == 1
    payload = json.loads(out_path.read_text())
    rows = [r for r in payload["results"] if r["name"] == "twomode.hd.printed_convention"]
    assert len(rows) == 1
    assert rows[0]["status"] == "EXPECTED-FAIL"
    assert rows[0]["expected_fail"] is True


def test_spectrum_onemode_case5(capsys, tmp_path):
    out_path = tmp_path / "spec.json"
    code = main(["spectrum", "--model", "onemode", "--mu", "4", "--nu", "1",
                 "--alpha0-table", "1.0", "--count", "4", "--out", str(out_path)])
    assert code == 0
    payload = json.loads(out_path.read_text())
    res = payload["results"]
    assert res["case_index"] == 5
    locs = [a["location"] for a in res["atoms"]]
    assert locs == pytest.approx([2.0, 6.0, 10.0, 14.0])
    assert res["oracle_delta"] <= 1e-8
    assert payload["version"]
    assert payload["config"]["command"] == "spectrum"


def test_spectrum_onemode_continuum(capsys, tmp_path):
    out_path = tmp_path / "spec.json"
    code = main(["spectrum", "--model", "onemode", "--mu", "1", "--nu", "0",
                 "--out", str(out_path)])
    assert code == 0
    res = json.loads(out_path.read_text())["results"]
    assert res["atoms"] == []
    assert res["continuum"][0] == 0.0 and math.isinf(res["continuum"][1])


def test_spectrum_two_d(capsys, tmp_path):
    out_path = tmp_path / "spec.json"
    code = main(["spectrum", "--model", "two-d", "--K", "1",
                 "--alpha0", "1", "--beta0", "1", "--out", str(out_path)])
    assert code == 0
    res = json.loads(out_path.read_text())["results"]
    assert res["eigenvalues"] == pytest.approx([0.5, 2.5])
    assert res["oracle_delta"] <= 1e-9


def test_spectrum_two_c_boundary_warning(capsys, tmp_path):
    out_path = tmp_path / "spec.json"
    code = main(["spectrum", "--model", "two-c", "--K", "0",
                 "--alpha0", "2", "--beta0", "1", "--n-levels", "64",
                 "--out", str(out_path)])
    assert code == 0
    res = json.loads(out_path.read_text())["results"]
    assert "warning" in res
    assert len(res["uvw_candidates"]) == 2


def test_evolve_manley_rowe_columns(capsys, tmp_path):
    out_path = tmp_path / "run.csv"
    code = main(["evolve", "--preset", "HIV", "--state", "2,3",
                 "--times", "0:10:6", "--n-per-mode", "24",
                 "--out", str(out_path)])
    assert code == 0
    with open(out_path) as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], [r for r in rows[1:] if r and not r[0].startswith("#")]
    i0 = header.index("mean_n0")
    i1 = header.index("mean_n1")
    ie = header.index("norm_error")
    for row in data:
        assert float(row[i0]) - float(row[i1]) == pytest.approx(-1.0, abs=1e-8)
        assert float(row[ie]) <= 1e-10
    assert float(data[0][i0]) == pytest.approx(2.0)


def test_evolve_single_time_point(capsys, tmp_path):
    out_path = tmp_path / "run.csv"
    code = main(["evolve", "--preset", "HIV", "--state", "1,1",
                 "--times", "0", "--n-per-mode", "12", "--out", str(out_path)])
    assert code == 0
    with open(out_path) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    assert float(rows[1][1]) == pytest.approx(1.0)


def test_byte_identical_reruns(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["evolve", "--preset", "HIV", "--state", "2,3", "--times", "0:5:11",
            "--n-per-mode", "20"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c, d = tmp_path / "c.json", tmp_path / "d.json"
    vargs = ["spectrum", "--model", "onemode", "--mu", "4", "--nu", "1"]
    assert main(vargs + ["--out", str(c)]) == 0
    assert main(vargs + ["--out", str(d)]) == 0
    assert c.read_bytes() == d.read_bytes()


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "onemode", "mu": 4.0, "nu": 1.0,
                               "count": 3}))
    out_path = tmp_path / "o.json"
    code = main(["spectrum", "--config", str(cfg), "--count", "5",
                 "--out", str(out_path)])
    assert code == 0
    res = json.loads(out_path.read_text())
    assert len(res["results"]["atoms"]) == 5  # flag overrides file


def test_malformed_config_usage_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = _run(capsys, "spectrum", "--config", str(bad), "--mu", "1",
                        "--nu", "0")
    assert code == 2
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"model": "onemode", "mu": 1.0, "nu": 0.0,
                                   "frobnicate": 1}))
    code, _, err = _run(capsys, "spectrum", "--config", str(unknown))
    assert code == 2
    assert "unknown config keys" in err


def test_usage_error_exit_code(capsys):
    code, _, _ = _run(capsys, "spectrum", "--model", "bogus")
    assert code == 2
    code, _, _ = _run(capsys, "nonexistent-command")
    assert code == 2


def test_coherent_subcommand(capsys, tmp_path):
    out_path = tmp_path / "c.json"
    code = main(["coherent", "--zeta-re", "1.0", "--alpha0", "0.5",
                 "--n-levels", "70", "--k-max", "4", "--out", str(out_path)])
    assert code == 0
    res = json.loads(out_path.read_text())["results"]
    assert res["eigenstate_residual"] <= 1e-8
    assert res["kernel_identity_error"] <= 1e-10
    assert max(m["rel_error"] for m in res["moments"]) <= 1e-6
