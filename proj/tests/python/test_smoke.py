import json
import math
import os
import subprocess
from pathlib import Path

import jsonschema
import pytest

import shotnoise

ROOT = Path(__file__).resolve().parents[2]
REPORT_SCHEMA = json.loads((ROOT / "schemas" / "report.schema.json").read_text())
TIMING_SCHEMA = json.loads((ROOT / "schemas" / "timing.schema.json").read_text())

SMALL = {
    "simulate-field": {"lambda": 50, "n_reps": 200},
    "lemma1": {"lambdas": [10, 100], "n_reps": 200},
    "theorem1": {"lambdas": [10, 100], "n_reps": 200},
    "extremal": {"lambdas": [100], "n_reps": 200},
    "gaussian-clt": {"lambda": 50, "n_reps": 200},
    "sir-scaling": {"lambdas": [10, 100], "n_reps": 200, "oracle_draws": 2000},
    "sinr-chain": {"lambda": 50, "n_reps": 200, "oracle_draws": 2000},
    "percolation": {"lattice_size": 8, "lambdas": [1], "c_list": [1e-4, 1.0], "n_reps": 5,
                    "correlation_reps": 50, "labelling_grids": 10},
}


def test_constants():
    assert shotnoise.stable_constant(2, 4.0) == pytest.approx(math.pi ** 1.5, rel=1e-8)
    assert shotnoise.frechet_scale(2, 4.0) == pytest.approx(math.pi, rel=1e-8)
    assert shotnoise.__version__


def test_kanter_draws_are_positive_and_seeded():
    a = shotnoise.sample_one_sided_stable(0.5, 2000, seed=4)
    assert a == shotnoise.sample_one_sided_stable(0.5, 2000, seed=4)
    assert min(a) > 0
    below = sum(x <= 1.0 for x in a) / len(a)
    assert abs(below - math.erfc(0.5)) < 4 * math.sqrt(0.25 / len(a))


def test_config_defaults_and_errors():
    assert len(shotnoise.commands()) == 8
    cfg = shotnoise.normalize_config({"params": {}}, "lemma1")
    assert cfg["params"]["n_reps"] == 10000
    assert cfg == shotnoise.normalize_config(cfg)
    with pytest.raises(ValueError, match="beta must exceed d"):
        shotnoise.normalize_config({"params": {"beta": 1.5}}, "lemma1")
    with pytest.raises(ValueError, match="unknown key"):
        shotnoise.normalize_config({"params": {"betta": 4}}, "lemma1")


@pytest.mark.parametrize("command", sorted(SMALL))
def test_every_command_writes_schema_valid_outputs(command, tmp_path):
    cfg = {"command": command, "seed": 5, "params": SMALL[command]}
    code, summary, files = shotnoise.run(cfg, tmp_path, workers=1)
    assert code in (0, 1)
    assert summary["pass"] == (code == 0)
    jsonschema.validate(summary, REPORT_SCHEMA)
    on_disk = json.loads((tmp_path / f"{command}.json").read_text())
    assert on_disk == summary
    jsonschema.validate(json.loads((tmp_path / f"{command}.timing.json").read_text()), TIMING_SCHEMA)
    assert (tmp_path / f"{command}.csv").read_text().count("\n") >= 2
    assert len(files) == 3


def test_summary_is_independent_of_worker_count(tmp_path):
    cfg = {"command": "theorem1", "seed": 9, "params": SMALL["theorem1"]}
    shotnoise.run(cfg, tmp_path / "a", workers=1)
    shotnoise.run(cfg, tmp_path / "b", workers=4)
    assert (tmp_path / "a" / "theorem1.json").read_bytes() == (tmp_path / "b" / "theorem1.json").read_bytes()


def test_cli_exit_codes(tmp_path):
    cli = os.environ.get("SHOTNOISE_CLI")
    if not cli:
        pytest.skip("SHOTNOISE_CLI not set")
    config = tmp_path / "c.json"
    config.write_text(json.dumps({"params": SMALL["sir-scaling"]}))
    ok = subprocess.run([cli, "sir-scaling", "--config", str(config), "--seed", "3", "--out-dir", str(tmp_path)])
    assert ok.returncode == 0
    assert json.loads((tmp_path / "sir-scaling.json").read_text())["seed"] == 3
    assert subprocess.run([cli, "bogus", "--config", str(config)]).returncode == 2
    config.write_text("{not json")
    assert subprocess.run([cli, "sir-scaling", "--config", str(config)]).returncode == 2
