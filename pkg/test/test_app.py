import json

from click.testing import CliRunner
import pytest

from app import cli

@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()

def _write(tmp_path, document) -> str:
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


def test_pi_p_prints_a_json_report(runner):
    result = runner.invoke(cli, ["pi-p", "--p", "3", "--canonical"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["pass"]
    assert "timing" not in report

def test_run_writes_csv(runner, tmp_path):
    config = _write(tmp_path, {"kind": "pi_p", "p": 2, "id": "pi-2"})
    out = tmp_path / "report.csv"
    result = runner.invoke(cli, ["run", config, "--format", "csv", "--out", str(out)])
    assert result.exit_code == 0
    header, row = out.read_text(encoding="utf-8").splitlines()
    assert header.startswith("scenario_id,kind,space,p")
    assert row.startswith("pi-2,pi_p,")

def test_exit_codes(runner, tmp_path):
    """
    1 for a failed check, 2 for invalid configurations and unwritable outputs.
    """
    failing = _write(tmp_path, {"kind": "pi_p", "p": 2, "expect": {"diff": {"min": 1.0}}})
    assert runner.invoke(cli, ["run", failing]).exit_code == 1

    invalid = _write(tmp_path, {"kind": "pi_p", "p": 0.5})
    assert runner.invoke(cli, ["run", invalid]).exit_code == 2

    valid = _write(tmp_path, {"kind": "pi_p", "p": 2})
    missing = str(tmp_path / "missing" / "report.json")
    assert runner.invoke(cli, ["run", valid, "--out", missing]).exit_code == 2
    assert runner.invoke(cli, ["sweep", valid]).exit_code == 2
