import json

import pytest

from qjjlab.cli import main


def run_cli(args):
    return main(args)


def test_scenario_writes_csv_and_passes(tmp_path):
    out = tmp_path / "qp.csv"
    assert run_cli(["qplane", "--M", "128", "--s", "1.0", "--out", str(out), "--quiet"]) == 0
    text = out.read_text()
    assert text.startswith("# scenario=qplane\n")
    assert "M,s,commensurate,residual_full,residual_interior" in text


def test_repeat_runs_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["rates", "--M", "64", "--s", "0.0", "--quiet"]
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_check_failure_exit_code(tmp_path):
    out = tmp_path / "vi.csv"
    code = run_cli(
        ["verify-identities", "--M", "128", "--s", "0.5", "--t-values", "0.0", "--i-values", "0.0",
         "--out", str(out), "--quiet"]
    )
    assert code == 1
    assert out.exists()


def test_usage_error_exit_code(tmp_path, capsys):
    code = run_cli(["qplane", "--M", "63", "--out", str(tmp_path / "x.csv"), "--quiet"])
    assert code == 2
    record = json.loads(capsys.readouterr().err.strip())
    assert "error" in record and "detail" in record


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as exc:
        run_cli(["nonsense-command"])
    assert exc.value.code == 2


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"M": 64, "s": 2.0}))
    out = tmp_path / "qp.csv"
    assert run_cli(["qplane", "--config", str(cfg), "--s", "1.0", "--out", str(out), "--quiet"]) == 0
    header = out.read_text().splitlines()
    assert "# M=64" in header  # from file
    assert "# s=1.0" in header  # flag wins over file


def test_config_file_accepts_junction_spellings(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"M": 64, "Phi": 0.5, "Ibias": 0.1, "EJ": 1.0, "EC": 0.05, "t": 0.0}))
    out = tmp_path / "eq.csv"
    assert run_cli(["equivalence", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
    header = out.read_text().splitlines()
    assert any(line.startswith("# s=3.14159") for line in header)
    assert "# I=0.1" in header


def test_run_alias_with_scenario_flag(tmp_path):
    out = tmp_path / "qp.csv"
    assert run_cli(["run", "--scenario", "qplane", "--M", "64", "--out", str(out), "--quiet"]) == 0
    assert out.exists()


def test_unwritable_output_path(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory")
    code = run_cli(["qplane", "--M", "64", "--out", str(blocker / "x.csv"), "--quiet"])
    assert code == 2
    record = json.loads(capsys.readouterr().err.strip())
    assert record["error"] == "cannot write output"


def test_default_output_directory_env(tmp_path, monkeypatch):
    monkeypatch.setenv("QJJLAB_OUT_DIR", str(tmp_path))
    assert run_cli(["qplane", "--M", "64", "--quiet"]) == 0
    assert (tmp_path / "qplane.csv").exists()


def test_operator_dumps_written(tmp_path):
    out = tmp_path / "vi.csv"
    code = run_cli(
        ["verify-identities", "--M", "64", "--s", "1.0", "--t-values", "0.0", "--i-values", "0.0",
         "--dump-operators", "--out", str(out), "--quiet"]
    )
    assert code == 0
    for name in ("number_operator", "phase_operator", "hamiltonian"):
        dump = tmp_path / f"vi.{name}.csv"
        assert dump.exists()
        first_entry = dump.read_text().split(",")[0]
        assert first_entry.endswith("j")


def test_check_lines_printed(tmp_path, capsys):
    out = tmp_path / "qp.csv"
    assert run_cli(["qplane", "--M", "64", "--out", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert any(line.startswith("check interior: PASS") for line in lines)
    assert lines[-1].startswith("scenario qplane: PASS")
