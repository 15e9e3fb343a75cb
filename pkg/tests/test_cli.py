import json
import os

import pytest

from linefpp.cli import main

SMALL_ARGS = {
    "ball": ["--t", "15"],
    "time-constant": ["--n-grid", "8,16", "--replicas", "4"],
    "regimes": ["--n-grid", "8,16,32,64,128", "--replicas", "4", "--betas", "1,2"],
    "sandwich": ["--n", "8", "--replicas", "8"],
    "shape": ["--t", "30", "--seeds", "2"],
    "infinite": ["--n", "16", "--replicas", "4"],
    "mn": ["--n-list", "1,10", "--replicas", "1000"],
    "chemical": ["--x", "5,5", "--replicas", "20"],
}


def read_dir(path):
    out = {}
    for name in sorted(os.listdir(path)):
        with open(os.path.join(path, name), "rb") as fh:
            out[name] = fh.read()
    return out


@pytest.mark.parametrize("command", sorted(SMALL_ARGS))
def test_commands_run_and_are_deterministic(command, tmp_path):
    d1 = str(tmp_path / "run1")
    d2 = str(tmp_path / "run2")
    assert main([command, "--out", d1] + SMALL_ARGS[command]) == 0
    assert main([command, "--out", d2, "--threads", "2"] + SMALL_ARGS[command]) == 0
    files1, files2 = read_dir(d1), read_dir(d2)
    assert files1  # something was written
    assert files1 == files2
    sidecar = command.replace("-", "_") + "_config.json"
    assert sidecar in files1
    cfg = json.loads(files1[sidecar])
    assert cfg["command"] == command
    assert "threads" not in cfg


def test_unknown_flag_is_a_usage_error(tmp_path):
    assert main(["ball", "--out", str(tmp_path / "o"), "--no-such-flag"]) == 2


def test_missing_subcommand_is_a_usage_error():
    assert main([]) == 2


def test_malformed_config_writes_nothing(tmp_path):
    cfg = tmp_path / "broken.json"
    cfg.write_text("{not json")
    out = tmp_path / "out"
    assert main(["ball", "--out", str(out), "--config", str(cfg)]) == 2
    assert not out.exists() or os.listdir(out) == []


def test_unknown_config_key_is_rejected(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"unknown_key": 1}))
    out = tmp_path / "out"
    assert main(["ball", "--out", str(out), "--config", str(cfg)]) == 2
    assert not out.exists() or os.listdir(out) == []


def test_bad_distribution_json_is_a_usage_error(tmp_path):
    assert main(["ball", "--out", str(tmp_path / "o"), "--dist", '{"kind": "nope"}']) == 2


def test_invalid_parameter_is_a_usage_error(tmp_path):
    assert main(["regimes", "--out", str(tmp_path / "o"), "--betas", "-1"]) == 2
    assert main(["ball", "--out", str(tmp_path / "o"), "--t", "-5"]) == 2


def test_exhausted_budget_is_an_estimation_error(tmp_path):
    rc = main(
        [
            "time-constant",
            "--out",
            str(tmp_path / "o"),
            "--n-grid",
            "64",
            "--replicas",
            "4",
            "--budget",
            "5",
        ]
    )
    assert rc == 4


def test_unwritable_output_directory_is_a_runtime_error(tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("a file, not a directory")
    assert main(["ball", "--out", str(blocker), "--t", "5"]) == 3


def test_flags_override_config_file_values(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"t": 10.0, "seed": 7}))
    out = tmp_path / "out"
    assert main(["ball", "--out", str(out), "--config", str(cfg), "--t", "20"]) == 0
    side = json.loads((out / "ball_config.json").read_text())
    assert side["t"] == 20.0  # flag beats the file
    assert side["seed"] == 7  # file beats the default


def test_mn_csv_reports_the_uniform_closed_form(tmp_path):
    out = tmp_path / "out"
    assert main(["mn", "--out", str(out), "--beta", "1", "--n-list", "1,3", "--replicas", "1000"]) == 0
    lines = (out / "mn.csv").read_text().strip().splitlines()
    header = lines[0].split(",")
    i = header.index("uniform_closed_form")
    rows = [line.split(",") for line in lines[1:]]
    assert float(rows[0][i]) == 0.5
    assert float(rows[1][i]) == 0.25


def test_ball_outputs_include_a_raster(tmp_path):
    out = tmp_path / "out"
    assert main(["ball", "--out", str(out), "--t", "10"]) == 0
    names = set(os.listdir(out))
    assert {"ball.json", "ball.pgm", "ball_points.csv", "ball_config.json"} <= names
    pgm = (out / "ball.pgm").read_text().splitlines()
    assert pgm[0] == "P2"
    meta = json.loads((out / "ball.json").read_text())
    n_points = len((out / "ball_points.csv").read_text().strip().splitlines()) - 1
    assert meta["points"] == n_points
