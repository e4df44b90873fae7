"""End-to-end tests of the command-line interface and its exit codes."""

import json


from qstransfer import cli
from qstransfer.sweep import csv_to_records


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sweep_stdout_csv(capsys):
    code, out, _ = run(
        capsys, "sweep", "--schemes", "swap", "--p-grid", "0,0.1",
        "--q-grid", "0.05",
    )
    assert code == cli.EXIT_OK
    records = csv_to_records(out)
    assert len(records) == 2
    assert {r.scheme for r in records} == {"swap"}


def test_sweep_writes_csv_and_manifest(tmp_path, capsys):
    out_path = tmp_path / "grid.csv"
    code, out, _ = run(
        capsys, "sweep", "--schemes", "cluster", "--p-grid", "0.02",
        "--q-grid", "0,0.1", "-o", str(out_path),
    )
    assert code == cli.EXIT_OK
    assert out_path.exists()
    manifest = json.loads((tmp_path / "grid.manifest.json").read_text())
    assert manifest["record_count"] == 2
    assert "placement_policy" in manifest


def test_sweep_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"schemes": ["ghz"], "p_grid": [0.0, 0.05]}))
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == cli.EXIT_OK
    records = csv_to_records(out)
    assert {r.scheme for r in records} == {"ghz"}
    assert len(records) == 2


def test_dump_circuit(capsys):
    code, out, _ = run(
        capsys, "sweep", "--schemes", "teleport", "--dump-circuit"
    )
    assert code == cli.EXIT_OK
    assert out.startswith("circuit teleport ")
    assert "measure" in out and "cond" in out
    from qstransfer.circuits import parse_circuit

    c = parse_circuit(out)
    assert c.wrapped and c.scheme == "teleport"


def test_bad_scheme_is_config_error(capsys):
    code, _, err = run(capsys, "sweep", "--schemes", "entirely-bogus")
    assert code == cli.EXIT_CONFIG
    assert "error:" in err


def test_bad_grid_is_config_error(capsys):
    code, _, err = run(capsys, "sweep", "--p-grid", "0,2.5")
    assert code == cli.EXIT_CONFIG


def test_missing_config_file(capsys):
    code, _, err = run(capsys, "sweep", "--config", "/no/such/file.json")
    assert code == cli.EXIT_CONFIG


def test_compare_table(capsys):
    code, out, _ = run(
        capsys, "compare", "--schemes", "swap,cluster", "--p-grid", "0.05",
        "--q-grid", "0.05",
    )
    assert code == cli.EXIT_OK
    assert "swap" in out and "cluster" in out and "success" in out


def test_oracle_point(capsys):
    code, out, _ = run(capsys, "oracle", "--p", "0.1", "--q", "0.05")
    assert code == cli.EXIT_OK
    assert "swap:" in out and "fidelity=" in out


def test_oracle_surface(tmp_path, capsys):
    out_path = tmp_path / "oracle.csv"
    code, out, _ = run(
        capsys, "oracle", "--surface", "--grid", "5", "--schemes",
        "teleport", "-o", str(out_path),
    )
    assert code == cli.EXIT_OK
    records = csv_to_records(out_path.read_text())
    assert len(records) == 25
    assert all(r.fidelity is not None for r in records)


def test_zne_command(capsys):
    code, out, _ = run(
        capsys, "zne", "--scheme", "swap", "--p", "0.02", "--q", "0.0",
        "--alphas", "1,2,3",
    )
    assert code == cli.EXIT_OK
    assert "E(0)" in out and "fit:" in out


def test_mitigate_json(capsys):
    code, out, _ = run(
        capsys, "mitigate", "--schemes", "swap", "--json", "--alphas",
        "1,1.5,2,2.5,3",
    )
    assert code == cli.EXIT_OK
    rows = json.loads(out)
    assert rows[0]["scheme"] == "swap"
    assert abs(rows[0]["readout_mitigated"] - 1.0) < 0.01


def test_check_command(capsys):
    code, out, _ = run(capsys, "check")
    assert code == cli.EXIT_OK
    assert "PASS" in out and "FAIL" not in out
