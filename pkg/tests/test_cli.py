import json

import pytest

from irsbc.cli import cli_main


def run_cli(capsys, *argv):
    code = cli_main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


SMALL = {"geometry": {"num_elements": 4}, "trials": 2,
         "schemes": ["oma_aligned"], "sweep": {"values": [110.0]}}


def write_config(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return path


def test_solve_prints_json(capsys, tmp_path):
    cfg = write_config(tmp_path, {"geometry": {"num_elements": 4}})
    code, out, _ = run_cli(capsys, "solve", "--config", str(cfg), "--seed", "7")
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "feasible"
    assert len(payload["phases_rad"]) == 4
    assert sorted(payload["order"]) == [1, 2]
    assert payload["sum_rate"] == pytest.approx(
        payload["rate_strong"] + payload["rate_weak"])


def test_solve_byte_identical_across_runs(capsys, tmp_path):
    cfg = write_config(tmp_path, {"geometry": {"num_elements": 4}})
    _, out1, _ = run_cli(capsys, "solve", "--config", str(cfg), "--seed", "7")
    _, out2, _ = run_cli(capsys, "solve", "--config", str(cfg), "--seed", "7")
    assert out1 == out2


def test_solve_seed_changes_output(capsys, tmp_path):
    cfg = write_config(tmp_path, {"geometry": {"num_elements": 4}})
    _, out1, _ = run_cli(capsys, "solve", "--config", str(cfg), "--seed", "7")
    _, out2, _ = run_cli(capsys, "solve", "--config", str(cfg), "--seed", "8")
    assert out1 != out2


def test_sweep_writes_csv(capsys, tmp_path):
    cfg = write_config(tmp_path, SMALL)
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run_cli(capsys, "sweep", "--config", str(cfg),
                           "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == ("scheme,sweep_param,sweep_value,mean_sum_rate_bps_hz,"
                        "stderr,feasible,infeasible,mean_iters,mean_solve_ms")
    assert len(lines) == 2
    assert lines[1].startswith("oma_aligned,snr_db,110.0,")


def test_sweep_trials_override(capsys, tmp_path):
    cfg = write_config(tmp_path, SMALL)
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run_cli(capsys, "sweep", "--config", str(cfg),
                         "--out", str(out_path), "--trials", "3", "--quiet")
    assert code == 0
    row = out_path.read_text().splitlines()[1].split(",")
    feasible, infeasible = int(row[5]), int(row[6])
    assert feasible + infeasible == 3


def test_compare_prints_gain_table(capsys, tmp_path):
    cfg = write_config(tmp_path, {
        "geometry": {"num_elements": 4}, "trials": 2,
        "sweep": {"values": [110.0]}})
    code, out, _ = run_cli(capsys, "compare", "--config", str(cfg))
    assert code == 0
    assert "snr_db = 110" in out
    for name in ("full", "random_phase", "oma_aligned", "oma_random_phase"):
        assert name in out


def test_missing_config_exits_1(capsys, tmp_path):
    missing = tmp_path / "nope.json"
    code, _, err = run_cli(capsys, "solve", "--config", str(missing))
    assert code == 1
    assert str(missing) in err


def test_invalid_config_reports_each_error(capsys, tmp_path):
    cfg = write_config(tmp_path, {"sweep": {"param": "bogus"},
                                  "schemes": ["telepathy"]})
    code, _, err = run_cli(capsys, "sweep", "--config", str(cfg))
    assert code == 1
    assert "sweep.param" in err
    assert "schemes[0]" in err


def test_invalid_json_exits_1(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = run_cli(capsys, "solve", "--config", str(path))
    assert code == 1
    assert "invalid JSON" in err
