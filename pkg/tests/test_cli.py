import json

import pytest
from click.testing import CliRunner

from orbitcheck.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, args, **kwargs):
    return runner.invoke(main, args, catch_exceptions=False, **kwargs)


def test_validate_catalog_target(runner):
    result = invoke(runner, ["validate", "go-3-k2"])
    assert result.exit_code == 0
    assert "so(5)" in result.output


def test_decompose_json_output(runner):
    result = invoke(runner, ["decompose", "go-3-k2", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["module_dims"] == [2, 4]
    assert data["metric_space_dim"] == 2


def test_json_output_is_byte_deterministic(runner):
    a = invoke(runner, ["check-go", "go-6-m2n1", "--samples", "10", "--json"])
    b = invoke(runner, ["check-go", "go-6-m2n1", "--samples", "10", "--json"])
    assert a.exit_code == b.exit_code == 0
    assert a.output == b.output


def test_check_go_expectations(runner):
    ok = invoke(runner, ["check-go", "go-8-n1", "--samples", "15",
                         "--expect", "go"])
    assert ok.exit_code == 0
    mismatch = invoke(runner, ["check-go", "go-8-n1", "--samples", "15",
                               "--expect", "not-go"])
    assert mismatch.exit_code == 1
    normal = invoke(runner, ["check-go", "go-8-n1", "--lambda", "2",
                             "--mu", "2", "--samples", "5",
                             "--expect", "normal"])
    assert normal.exit_code == 0


def test_check_go_not_go_with_certificate(runner):
    result = invoke(runner, ["check-go", "t1-V.10", "--samples", "50",
                             "--expect", "not-go", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["status"] == "NOT_GO"
    assert data["counterexample"]["rank_gap"] >= 1


def test_check_go_exact_mode(runner):
    result = invoke(runner, ["check-go", "go-3-k2", "--samples", "5",
                             "--exact", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["exact"] is True
    assert data["max_residual"] == 0.0


def test_filter_expectations(runner):
    ok = invoke(runner, ["filter", "go-3-k2", "--expect", "pass"])
    assert ok.exit_code == 0
    bad = invoke(runner, ["filter", "t1-V.10", "--expect", "pass"])
    assert bad.exit_code == 1
    fail_ok = invoke(runner, ["filter", "t1-V.10", "--expect", "fail"])
    assert fail_ok.exit_code == 0


def test_classify_structure_case(runner):
    result = invoke(runner, ["classify", "struct-4", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["case"] == 4


def test_natred_two_factor(runner):
    result = invoke(runner, ["natred", "two-factor", "--a", "1", "--b", "2",
                             "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["alpha"] == 1.0
    assert data["beta"] == 3.0
    assert data["identity_residual"] == 0.0
    normal = invoke(runner, ["natred", "two-factor", "--a", "1", "--b", "3",
                             "--json"])
    assert json.loads(normal.output)["kind"] == "normal"


def test_natred_ledger_obata_with_verification(runner):
    result = invoke(runner, ["natred", "ledger-obata", "--A", "3", "--B", "1",
                             "--C", "2", "--verify", "so3", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["triple"]["alpha"] == pytest.approx(5 / 3)
    assert data["triple"]["beta"] == pytest.approx(5 / 4)
    assert data["triple"]["gamma"] == pytest.approx(-5.0)
    assert data["verify_algebra"] == "so3"
    assert data["verify_residual"] <= 1e-10
    degenerate = invoke(runner, ["natred", "ledger-obata", "--A", "1",
                                 "--B", "0", "--C", "1", "--json"])
    assert degenerate.exit_code == 0
    assert json.loads(degenerate.output)["kind"] == "factor_12_transitive"


def test_natred_rejects_indefinite_metric(runner):
    result = runner.invoke(main, ["natred", "ledger-obata", "--A", "1",
                                  "--B", "2", "--C", "1"])
    assert result.exit_code == 1


def test_catalog_list_and_show(runner):
    listed = invoke(runner, ["catalog", "list", "--filter",
                             "source=go-classification", "--json"])
    assert listed.exit_code == 0
    rows = json.loads(listed.output)
    assert len(rows) == 11
    shown = invoke(runner, ["catalog", "show", "go-1", "--json"])
    data = json.loads(shown.output)
    assert data["expected"]["module_dims"] == [7, 7]
    unknown = runner.invoke(main, ["catalog", "show", "nope"])
    assert unknown.exit_code == 2


def test_catalog_run_exit_codes(runner):
    ok = invoke(runner, ["catalog", "run", "--id", "go-6-m2n1",
                         "--samples", "10"])
    assert ok.exit_code == 0
    unconstructible = runner.invoke(main, ["catalog", "run", "--id", "go-9"])
    assert unconstructible.exit_code == 1
    unknown = runner.invoke(main, ["catalog", "run", "--id", "nope"])
    assert unknown.exit_code == 2


def test_zoo_commands(runner):
    listed = invoke(runner, ["zoo", "list"])
    assert listed.exit_code == 0
    assert "sp_u1_in_sp" in listed.output
    alg = invoke(runner, ["zoo", "algebra", "su(3)+su(2)", "--json"])
    assert json.loads(alg.output)["dim"] == 11
    emb = invoke(runner, ["zoo", "embedding", "so_in_so", "--param", "k=3",
                          "--param", "n=5", "--json"])
    data = json.loads(emb.output)
    assert data["source_dim"] == 3
    assert data["target_dim"] == 10


def test_space_spec_file_target(runner, tmp_path):
    spec = {
        "name": "sphere-pair",
        "algebra": "so(5)",
        "embedding": {"key": "u_in_so_odd", "params": {"k": 2}},
    }
    path = tmp_path / "space.json"
    path.write_text(json.dumps(spec))
    result = invoke(runner, ["decompose", str(path), "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["module_dims"] == [2, 4]


def test_missing_and_malformed_spec_files_are_usage_errors(runner, tmp_path):
    missing = runner.invoke(main, ["decompose", str(tmp_path / "nope.json")])
    assert missing.exit_code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    malformed = runner.invoke(main, ["decompose", str(bad)])
    assert malformed.exit_code == 2
    assert "line" in malformed.output


def test_unknown_catalog_target_is_usage_error(runner):
    result = runner.invoke(main, ["decompose", "not-a-real-id"])
    assert result.exit_code == 2


def test_tolerance_env_override(runner, monkeypatch):
    monkeypatch.setenv("ORBITCHECK_TOL", "not-a-number")
    result = runner.invoke(main, ["check-go", "go-6-m2n1", "--samples", "2"])
    assert result.exit_code == 2
    monkeypatch.setenv("ORBITCHECK_TOL", "1e-7")
    ok = runner.invoke(main, ["check-go", "go-6-m2n1", "--samples", "2"])
    assert ok.exit_code == 0
