import json
import math

import numpy as np
import pytest

from qode import macros, pipeline, reporting
from qode.exceptions import QodeArgument


def test_jsonable_replaces_non_finite():
	doc = reporting.to_jsonable({"a": math.inf, "b": [1.0, math.nan], "c": np.float64(2.5), "d": np.int64(3)})
	assert doc == {"a": None, "b": [1.0, None], "c": 2.5, "d": 3}
	assert "NaN" not in reporting.dumps({"x": math.nan})


def test_config_validation():
	assert reporting.validate_config({"T": 1e6, "mu": -1}, "estimate")
	with pytest.raises(QodeArgument) as error:
		reporting.validate_config({"T": 1e6, "horizon": 3}, "estimate")
	assert error.value.field == "horizon"
	with pytest.raises(QodeArgument) as error:
		reporting.validate_config({"ancillas": 1.5}, "estimate")
	assert error.value.field == "ancillas"
	with pytest.raises(QodeArgument):
		reporting.validate_config({"ancillas": True}, "estimate")
	with pytest.raises(QodeArgument):
		reporting.validate_config([], "estimate")


def test_report_round_trips_through_json():
	report = pipeline.estimate(pipeline.negative_lognorm_request(1e6, 1.0, -1.0, 1e-10))
	doc = json.loads(reporting.dumps(report))
	assert reporting.validate_report(doc) is doc
	assert doc["Q"] == pytest.approx(report.Q, rel=1e-15)
	with pytest.raises(QodeArgument):
		reporting.validate_report({"Q": 1.0})


def test_sweep_csv_layout():
	template = pipeline.negative_lognorm_request(1e6, 1.0, -1.0, 1e-10)
	values = [1e6, 1e8, 1e10]
	reports = pipeline.sweep(template, "T", values)
	rows = reporting.sweep_rows(reports, "T", values)
	text = reporting.csv_text(rows)
	lines = text.split("\n")
	assert lines[0] == ",".join(macros.csv_columns)
	assert "\r" not in text
	assert len(lines) == len(values) + 2 and lines[-1] == ""
	for row, report in zip(rows, reports):
		assert row["Q_per_T"] == pytest.approx(row["Q"] / report.T, rel=1e-15)
	assert [r["axis_value"] for r in rows] == sorted(values)


def test_sweep_rate_uses_grid_horizon():
	template = pipeline.negative_lognorm_request(1e3, 1.0, -1.0, 1e-10)
	reports = pipeline.sweep(template, "T", [10.5])
	(row,) = reporting.sweep_rows(reports, "T", [10.5])
	assert reports[0].T == 11.0
	assert row["axis_value"] == 10.5
	assert row["Q_per_T"] == pytest.approx(row["Q"] / 11.0, rel=1e-15)


def test_power_law_fit_exact():
	T = np.geomspace(1e6, 1e15, 10)
	fit = reporting.fit_power_law(T, T ** 0.5)
	assert fit.slope == pytest.approx(0.5, abs=1e-12)
	assert fit.r_squared == pytest.approx(1.0)
	assert fit.window == (pytest.approx(1e6), pytest.approx(1e15))


def test_power_law_fit_window():
	T = np.geomspace(1e2, 1e12, 11)
	Q = np.where(T < 1e6, T, T ** 2 / 1e6)
	assert reporting.fit_power_law(T, Q, (1e6, 1e12)).slope == pytest.approx(2.0, abs=1e-12)
	with pytest.raises(QodeArgument):
		reporting.fit_power_law(T, Q, (1e11, 1e12))


def test_fit_csv(tmp_path):
	path = tmp_path / "sweep.csv"
	rows = [dict(zip(macros.csv_columns, [t, "multiplicative", 3, 0, 1.0, 10.0, 0.4, 1e-3, 5.0, 2.0, 3 * t, 3.0]))
		for t in (1e3, 1e4, 1e5, 1e6)]
	path.write_text(reporting.csv_text(rows), encoding="utf-8")
	assert reporting.fit_csv(str(path)).slope == pytest.approx(1.0, abs=1e-12)
	with pytest.raises(QodeArgument):
		reporting.fit_csv(str(path), column="cost")
