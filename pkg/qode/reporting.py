#!/usr/bin/env python3
###########################################################################
#    Qode - Query-count bounds for quantum linear ODE solvers
#    Copyright (C) 2024 Qode developers GPL-3
#
#    This program is free software: you can redistribute it and/or modify
#    it under the terms of the GNU General Public License as published by
#    the Free Software Foundation, either version 3 of the License, or
#    (at your option) any later version.
#
#    This program is distributed in the hope that it will be useful,
#    but WITHOUT ANY WARRANTY; without even the implied warranty of
#    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#    GNU General Public License for more details.
#
#    You should have received a copy of the GNU General Public License
#    along with this program.  If not, see <http://www.gnu.org/licenses/>.
###########################################################################

"""JSON and CSV output, the configuration schema and power-law fits."""

import csv
import dataclasses
import io
import json
import logging
import math

import numpy as np
import scipy.stats

from qode import macros
from qode.exceptions import QodeArgument

logger = logging.getLogger(__name__)

number = (int, float)

# command -> key -> accepted JSON types
config_schema = {
	"estimate": {"T": number, "h": number, "epsilon": number, "omega": number, "ancillas": int,
		"target": str, "scheme": str, "amplification": str, "mu": number, "kappa_P": number,
		"mu_P": number, "C_max": number, "x_min": number, "x_max": number, "x_rms": number,
		"x_final": number, "b_norm": number, "gbar_times": number, "gbar_plus": number,
		"lambda_prob": number, "norm_A": number, "dimension": int, "exact_truncation": bool,
		"system": str},
	"sweep": {"axis": str, "from": number, "to": number, "points": int, "jobs": int},
	"verify": {"system": str, "T": number, "h": number, "M": int, "epsilon": number,
		"target": str, "scheme": str, "amplification": str, "omega": number},
}
config_schema["sweep"].update(config_schema["estimate"])

report_keys = ("chosen", "Q", "qubits", "state_prep_queries", "M", "h", "T", "target", "profile", "schemes")

record_keys = ("scheme", "eps_td", "log_s", "k", "p", "omega_tilde", "kappa_L", "pr_lower", "eps_L",
	"q_qlsa", "rounds", "Q", "skipped")


@dataclasses.dataclass(frozen=True)
class FitResult:
	slope: float
	intercept: float
	r_squared: float
	window: tuple

	def as_dict(self):
		return dataclasses.asdict(self)


def validate_config(data, command):
	if command not in config_schema:
		raise QodeArgument("no configuration schema for %r" % (command,), field="command")
	if not isinstance(data, dict):
		raise QodeArgument("configuration must be a JSON object", field="config")
	schema = config_schema[command]
	for key, value in data.items():
		if key not in schema:
			raise QodeArgument("unknown configuration key %r" % (key,), field=key)
		expected = schema[key]
		# bool is an int subclass
		if isinstance(value, bool) and expected is not bool:
			raise QodeArgument("%s must not be a boolean" % key, field=key)
		if not isinstance(value, expected):
			raise QodeArgument("%s has the wrong type" % key, field=key)
	return data


def load_config(path, command):
	with open(path, encoding="utf-8") as f:
		try:
			data = json.load(f)
		except json.JSONDecodeError as error:
			raise QodeArgument("%s is not valid JSON: %s" % (path, error), field="config")
	return validate_config(data, command)


def to_jsonable(obj):
	"""Plain JSON types; non-finite floats become null."""
	if hasattr(obj, "as_dict"):
		return to_jsonable(obj.as_dict())
	if isinstance(obj, dict):
		return {str(key): to_jsonable(value) for key, value in obj.items()}
	if isinstance(obj, (list, tuple)):
		return [to_jsonable(value) for value in obj]
	if isinstance(obj, np.ndarray):
		return to_jsonable(obj.tolist())
	if isinstance(obj, (bool, np.bool_)):
		return bool(obj)
	if isinstance(obj, (int, np.integer)):
		return int(obj)
	if isinstance(obj, (float, np.floating)):
		return float(obj) if math.isfinite(obj) else None
	if isinstance(obj, complex):
		return [to_jsonable(obj.real), to_jsonable(obj.imag)]
	return obj


def dumps(obj):
	return json.dumps(to_jsonable(obj), indent=1, sort_keys=True, allow_nan=False) + "\n"


def validate_report(doc):
	"""Check an emitted cost report against the published keys."""
	missing = [key for key in report_keys if key not in doc]
	if missing:
		raise QodeArgument("report is missing %s" % ", ".join(missing), field=missing[0])
	for record in doc["schemes"]:
		absent = [key for key in record_keys if key not in record]
		if absent:
			raise QodeArgument("scheme record is missing %s" % ", ".join(absent), field=absent[0])
	if doc["chosen"] not in [record["scheme"] for record in doc["schemes"]]:
		raise QodeArgument("chosen scheme has no record", field="chosen")
	return doc


def sweep_rows(reports, axis, values):
	"""One CSV row per report, from the chosen scheme's record, sorted by axis value."""
	rows = []
	for value, report in sorted(zip(values, reports), key=lambda pair: pair[0]):
		record = report.record()
		row = {"axis_value": value}
		for key in macros.csv_columns[1:-1]:
			row[key] = getattr(record, key)
		row["Q_per_T"] = record.Q / report.T
		rows.append(row)
	return rows


def write_csv(rows, stream):
	writer = csv.DictWriter(stream, fieldnames=macros.csv_columns, lineterminator="\n")
	writer.writeheader()
	for row in rows:
		writer.writerow({key: repr(value) if isinstance(value, float) else value for key, value in row.items()})


def csv_text(rows):
	stream = io.StringIO()
	write_csv(rows, stream)
	return stream.getvalue()


def read_csv(path):
	with open(path, encoding="utf-8", newline="") as f:
		rows = list(csv.DictReader(f))
	if rows and "axis_value" not in rows[0]:
		raise QodeArgument("%s has no axis_value column" % path, field="axis_value")
	return rows


def fit_power_law(xs, ys, window=None):
	"""Least-squares line through (ln x, ln y) for x inside the window."""
	xs = np.asarray(xs, dtype=float)
	ys = np.asarray(ys, dtype=float)
	lo, hi = window if window is not None else (-math.inf, math.inf)
	keep = (xs >= lo) & (xs <= hi) & (xs > 0) & (ys > 0)
	if np.count_nonzero(keep) < 3:
		raise QodeArgument("a fit needs at least 3 rows in the window", field="window")
	fit = scipy.stats.linregress(np.log(xs[keep]), np.log(ys[keep]))
	logger.debug("fit over %d rows: slope %.6g", np.count_nonzero(keep), fit.slope)
	return FitResult(float(fit.slope), float(fit.intercept), float(fit.rvalue ** 2),
		(float(xs[keep].min()), float(xs[keep].max())))


def fit_csv(path, column="Q", window=None):
	rows = read_csv(path)
	if rows and column not in rows[0]:
		raise QodeArgument("%s has no column %r" % (path, column), field="column")
	return fit_power_law([float(row["axis_value"]) for row in rows], [float(row[column]) for row in rows], window)
