"""CLI surface: flags, formats, exit codes, remote mode."""

import json
import math

import httpx
import pytest
from fastapi.testclient import TestClient

from phasematch.cli import main
from phasematch.service import create_app


def run_cli(capsys, args):
    with pytest.raises(SystemExit) as excinfo:
        main(args)
    captured = capsys.readouterr()
    return excinfo.value.code or 0, captured.out, captured.err


def test_solve_reduction(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["solve", "--beta", "0.5235987756", "--theta0", "0.5235987756",
         "--delta", "0", "--theta", "0.7"],
    )
    assert rc == 0
    body = json.loads(out)
    assert set(body) == {"command", "inputs", "outputs", "residuals", "pass"}
    assert body["outputs"]["phi"] == pytest.approx(0.7, abs=1e-12)


def test_solve_golden_flags(capsys):
    # prepared golden start state in canonical form
    rc, out, _ = run_cli(
        capsys,
        ["solve", "--beta", "0.0707697366622136", "--theta0", "0.027857273580616182",
         "--delta", str(-0.7904232467282607 + math.pi), "--theta", str(math.pi / 2)],
    )
    assert rc == 0
    assert json.loads(out)["outputs"]["phi"] == pytest.approx(
        2 * math.atan(0.99), abs=1e-10
    )


def test_solve_degenerate_exits_1(capsys):
    rc, _, err = run_cli(
        capsys,
        ["solve", "--beta", "0.4", "--theta0", str(math.pi / 2), "--theta", "1.0"],
    )
    assert rc == 1
    assert "marked state" in err


def test_solve_degrees(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["solve", "--beta", "30", "--theta0", "30", "--delta", "0",
         "--theta", "90", "--degrees"],
    )
    assert rc == 0
    assert json.loads(out)["outputs"]["phi"] == pytest.approx(math.pi / 2, abs=1e-12)


def test_plan_identity_exits_2(capsys):
    rc, _, err = run_cli(
        capsys,
        ["plan", "--beta", "0.3", "--theta0", "0.3", "--theta", "0", "--phi", "0"],
    )
    assert rc == 2


def test_certain_zero_iterations_exits_2(capsys):
    rc, _, _ = run_cli(
        capsys,
        ["certain", "--beta", "0.5235987755982988", "--theta0", "0.5235987755982988",
         "-J", "0"],
    )
    assert rc == 2


def test_certain_verified(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["certain", "--beta", "0.5235987755982988", "--theta0", "0.5235987755982988",
         "-J", "1", "--verify", "4"],
    )
    assert rc == 0
    body = json.loads(out)
    assert body["outputs"]["theta"] == pytest.approx(math.pi, abs=1e-9)
    assert body["outputs"]["oracle_probability"] >= 1 - 1e-10


def test_simulate_csv(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["simulate", "--n", "4", "--marked", "3", "--theta", str(math.pi),
         "--phi", str(math.pi), "--iterations", "2", "--format", "csv"],
    )
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "j,p_oracle,p_analytic,leakage"
    assert len(lines) == 4
    assert float(lines[2].split(",")[1]) == pytest.approx(1.0, abs=1e-12)


def test_simulate_guard_exits_1(capsys):
    rc, _, _ = run_cli(
        capsys,
        ["simulate", "--n", "8192", "--marked", "1", "--theta", "1", "--phi", "1",
         "--iterations", "1", "--unitary", "random"],
    )
    assert rc == 1


def test_simulate_uniform_unitary(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["simulate", "--n", "400", "--marked", "7,123", "--theta", str(math.pi / 2),
         "--phi", str(math.pi / 2), "--iterations", "3"],
    )
    assert rc == 1  # 400 is not a power of two for the default hadamard
    rc, out, _ = run_cli(
        capsys,
        ["simulate", "--n", "400", "--marked", "7,123", "--theta", str(math.pi / 2),
         "--phi", str(math.pi / 2), "--iterations", "3", "--unitary", "uniform"],
    )
    assert rc == 0
    assert json.loads(out)["outputs"]["beta"] == pytest.approx(
        math.asin(math.sqrt(2 / 400)), abs=1e-12
    )


def test_simulate_dump_state(tmp_path, capsys):
    target = tmp_path / "state.json"
    rc, _, _ = run_cli(
        capsys,
        ["simulate", "--n", "4", "--marked", "3", "--theta", str(math.pi),
         "--phi", str(math.pi), "--iterations", "1", "--dump-state", str(target)],
    )
    assert rc == 0
    from phasematch.oracle import state_from_jsonable

    payload = json.loads(target.read_text())
    state = state_from_jsonable(payload["amplitudes"])
    assert payload["n"] == 4
    assert abs(state[3]) == pytest.approx(1.0, abs=1e-12)


def test_scan_tolerance_csv(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["scan-tolerance", "--n-list", "16,64,256", "--format", "csv"],
    )
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,half_width"
    assert lines[-1].startswith("# slope=")


def test_verify_appendix_passes(capsys):
    rc, out, _ = run_cli(capsys, ["verify-appendix"])
    assert rc == 0
    body = json.loads(out)
    assert body["pass"] is True
    assert body["outputs"]["lhs"] == pytest.approx(0.987234528786745, abs=5e-13)


def test_verify_appendix_corrupted_tolerance_exits_3(capsys):
    rc, _, _ = run_cli(capsys, ["verify-appendix", "--tolerance", "1e-300"])
    assert rc == 3


def test_env_tolerance_override(capsys, monkeypatch):
    monkeypatch.setenv("PHASEMATCH_TOL", "1e-300")
    rc, _, _ = run_cli(capsys, ["verify-appendix"])
    assert rc == 3
    monkeypatch.delenv("PHASEMATCH_TOL")
    rc, _, _ = run_cli(capsys, ["verify-appendix"])
    assert rc == 0


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    rc, out, _ = run_cli(capsys, ["verify-appendix", "--out", str(target)])
    assert rc == 0
    assert out == ""
    assert json.loads(target.read_text())["pass"] is True


def test_missing_required_flag_exits_1(capsys):
    rc, _, _ = run_cli(capsys, ["solve", "--beta", "0.3"])
    assert rc == 1


def test_remote_mode(capsys, monkeypatch):
    # route the CLI's http calls into an in-process service
    client = TestClient(create_app())

    def fake_post(url, json=None, timeout=None):
        path = url.split("http://unit.test", 1)[1]
        return client.post(path, json=json)

    monkeypatch.setattr(httpx, "post", fake_post)
    rc, out, _ = run_cli(
        capsys,
        ["--server", "http://unit.test", "solve", "--beta", "0.5235987756",
         "--theta0", "0.5235987756", "--theta", "0.7"],
    )
    assert rc == 0
    assert json.loads(out)["outputs"]["phi"] == pytest.approx(0.7, abs=1e-12)

    rc, _, err = run_cli(
        capsys,
        ["--server", "http://unit.test", "certain", "--beta", "0.2",
         "--theta0", "0.2", "-J", "1"],
    )
    assert rc == 2
