import json
import math

import pytest

from qode import macros, pipeline
from qode.cli import main


@pytest.fixture
def run(isolated_preferences, capsys):
	def invoke(*argv):
		code = main(["--preferences", isolated_preferences] + [str(a) for a in argv])
		out, err = capsys.readouterr()
		return code, out, err
	return invoke


def test_estimate_matches_pipeline(run):
	code, out, err = run("estimate", "--T", 1e10, "--h", 1, "--mu", -1, "--epsilon", 1e-10, "--scheme", "mult")
	assert code == macros.exit_ok, err
	doc = json.loads(out)
	expected = pipeline.estimate(pipeline.negative_lognorm_request(1e10, 1.0, -1.0, 1e-10))
	assert doc["Q"] == pytest.approx(expected.Q, rel=1e-12)
	assert doc["Q"] == pytest.approx(pipeline.closed_form_negative_lognorm(1e10, 1.0, -1.0, 1e-10), rel=1e-12)
	assert doc["chosen"] == "multiplicative"


def test_missing_norm_is_a_validation_error(run, tmp_path):
	config = tmp_path / "forced.json"
	config.write_text(json.dumps({"b_norm": 1.0, "x_max": 2.0}), encoding="utf-8")
	code, out, err = run("estimate", "--config", config, "--T", 100, "--mu", -1, "--epsilon", 1e-6, "--scheme", "mult")
	assert code == macros.exit_validation
	assert "x_min" in err
	assert out == ""


def test_unknown_config_key(run, tmp_path):
	config = tmp_path / "bad.json"
	config.write_text(json.dumps({"horizon": 10}), encoding="utf-8")
	code, _, err = run("estimate", "--config", config, "--mu", -1)
	assert code == macros.exit_validation
	assert "[horizon]" in err


def test_solution_target_idles_sqrt_M(run, tmp_path):
	config = tmp_path / "solution.json"
	config.write_text(json.dumps({"gbar_times": 1.0}), encoding="utf-8")
	code, out, err = run("estimate", "--config", config, "--T", 1e4, "--stable", "--mu", 0,
		"--epsilon", 1e-6, "--target", "solution", "--scheme", "mult")
	assert code == macros.exit_ok, err
	doc = json.loads(out)
	record = doc["schemes"][0]
	k = record["k"]
	assert doc["M"] == 10000
	assert record["p"] == math.ceil(100 / (k + 1)) * (k + 1)


def test_sweep_needs_two_points(run):
	code, _, err = run("sweep", "--axis", "T", "--from", 1e6, "--to", 1e9, "--points", 1, "--mu", -1)
	assert code == macros.exit_validation
	assert "points" in err


def test_sweep_csv_and_fit(run, tmp_path):
	out = tmp_path / "sweep.csv"
	code, _, err = run("--out", out, "sweep", "--axis", "T", "--from", 1e6, "--to", 1e9, "--points", 4,
		"--mu", -1, "--epsilon", 1e-10)
	assert code == macros.exit_ok, err
	lines = out.read_text(encoding="utf-8").split("\n")
	assert lines[0] == ",".join(macros.csv_columns)
	assert len(lines) == 6
	code, text, err = run("fit-scaling", out)
	assert code == macros.exit_ok, err
	assert 0.45 < json.loads(text)["slope"] < 0.7


def test_scenario_then_verify(run, tmp_path):
	system = tmp_path / "system.json"
	code, _, err = run("--out", system, "scenario", "negative-lognorm", "--set", "N=3", "--set", "mu=-0.05",
		"--set", "seed=7")
	assert code == macros.exit_ok, err
	code, out, err = run("verify", "--system", system, "--M", 30, "--epsilon", 1e-3)
	assert code == macros.exit_ok, err
	assert json.loads(out)["passed"] is True
	code, _, err = run("verify", "--system", system, "--M", 10 ** 6, "--epsilon", 1e-3)
	assert code == macros.exit_validation
	assert "[M]" in err


def test_scenario_errors(run):
	code, _, err = run("scenario", "negative-lognorm", "--set", "order=3")
	assert code == macros.exit_validation
	assert "[order]" in err
	code, _, err = run("scenario", "spiral")
	assert code == macros.exit_validation


def test_scenario_list(run):
	code, out, _ = run("scenario", "--list")
	assert code == macros.exit_ok
	assert [item["name"] for item in json.loads(out)] == ["negative-lognorm", "hamiltonian",
		"damped-oscillators", "carleman"]


def test_missing_system_file(run, tmp_path):
	code, _, err = run("verify", "--system", tmp_path / "absent.json", "--M", 5)
	assert code == macros.exit_validation
	assert err.startswith("error")
