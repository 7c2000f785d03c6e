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

import argparse
import contextlib
import json
import logging
import os
import sys

import numpy as np

from qode import macros
from qode import pipeline
from qode import preferences
from qode import reporting
from qode import scenarios
from qode import stability
from qode.discretization import SolutionNormBounds, TimeGrid
from qode.exceptions import QodeArgument, QodeError, is_validation_error
from qode.system import OdeSystem

logger = logging.getLogger(__name__)

norm_keys = ("x_min", "x_max", "x_rms", "x_final", "b_norm", "gbar_times", "gbar_plus", "lambda_prob")


def configure_logging():
	name = os.environ.get(macros.log_env_var, macros.default_log_level).upper()
	level = getattr(logging, name, None)
	if name not in ("DEBUG", "INFO", "WARNING", "ERROR") or not isinstance(level, int):
		level = logging.WARNING
	logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _add_request_flags(parser):
	parser.add_argument("--config", help="JSON configuration file")
	parser.add_argument("--T", type=float, help="time horizon")
	parser.add_argument("--h", type=float, help="time step (default 1)")
	parser.add_argument("--mu", type=float, help="log-norm of A; 0 selects the Hamiltonian profile")
	parser.add_argument("--kappa-P", dest="kappa_P", type=float)
	parser.add_argument("--mu-P", dest="mu_P", type=float)
	parser.add_argument("--C-max", dest="C_max", type=float)
	parser.add_argument("--stable", action="store_true", help="use the stable profile (kappa_P = 1) for mu")
	parser.add_argument("--epsilon", type=float)
	parser.add_argument("--omega", type=float)
	parser.add_argument("--ancillas", type=int)
	parser.add_argument("--target", choices=("history", "solution"))
	parser.add_argument("--scheme", choices=("auto", "mult", "add"))
	parser.add_argument("--amplification", choices=("repeat", "grover"))
	parser.add_argument("--system", help="system file (JSON) to analyse instead of a profile")


def build_parser():
	parser = argparse.ArgumentParser(prog=macros.app_name_abbreviated, description=macros.app_name)
	parser.add_argument("--preferences", help="preferences file (default %s)" % macros.preferences_file_path)
	parser.add_argument("--out", help="write the result here instead of standard output")
	parser.add_argument("--version", action="version", version=macros.version)
	commands = parser.add_subparsers(dest="command", required=True)

	estimate = commands.add_parser("estimate", help="query count for one parameter set")
	_add_request_flags(estimate)

	sweep = commands.add_parser("sweep", help="query counts along one axis, as CSV")
	_add_request_flags(sweep)
	sweep.add_argument("--axis", choices=pipeline.AXES)
	sweep.add_argument("--from", dest="start", type=float)
	sweep.add_argument("--to", dest="stop", type=float)
	sweep.add_argument("--points", type=int)
	sweep.add_argument("--jobs", type=int)

	verify = commands.add_parser("verify", help="check the bounds on a materialized embedding")
	verify.add_argument("--config", help="JSON configuration file")
	verify.add_argument("--system", help="system file (JSON)")
	verify.add_argument("--T", type=float)
	verify.add_argument("--M", type=int)
	verify.add_argument("--h", type=float, help="time step (default 1/‖A‖)")
	verify.add_argument("--epsilon", type=float)
	verify.add_argument("--omega", type=float)
	verify.add_argument("--target", choices=("history", "solution"))
	verify.add_argument("--scheme", choices=("auto", "mult", "add"))
	verify.add_argument("--amplification", choices=("repeat", "grover"))
	verify.add_argument("--steps", help="per-step truncation table (CSV)")

	scenario = commands.add_parser("scenario", help="write a system from a built-in family")
	scenario.add_argument("name", nargs="?", help="scenario name")
	scenario.add_argument("--set", dest="settings", action="append", default=[], metavar="KEY=VALUE")
	scenario.add_argument("--params", help="JSON file of scenario parameters")
	scenario.add_argument("--list", action="store_true", help="list the scenarios")

	fit = commands.add_parser("fit-scaling", help="fit Q ~ T^slope to a sweep CSV")
	fit.add_argument("csv", help="sweep output")
	fit.add_argument("--from", dest="start", type=float)
	fit.add_argument("--to", dest="stop", type=float)
	fit.add_argument("--column", default="Q")
	return parser


def _merged(args, command, prefs):
	"""Config file values, overridden by flags, falling back to preferences."""
	options = {}
	if getattr(args, "config", None):
		options.update(reporting.load_config(args.config, command))
	for key, value in vars(args).items():
		if value is not None and key not in ("config", "command", "preferences", "out", "settings"):
			options[key] = value
	for key in ("epsilon", "ancillas", "target", "scheme", "amplification", "jobs", "exact_truncation"):
		options.setdefault(key, getattr(prefs, key))
	return options


def _profile(options):
	if options.get("C_max") is not None:
		return stability.StabilityProfile.marginal(options["C_max"])
	mu = options.get("mu")
	if options.get("kappa_P") is not None or options.get("mu_P") is not None:
		mu_P = options.get("mu_P", mu)
		if mu_P is None:
			raise QodeArgument("kappa_P needs mu_P", field="mu_P")
		return stability.StabilityProfile.stable(options.get("kappa_P", 1.0), mu_P)
	if mu is None:
		raise QodeArgument("give mu, kappa_P/mu_P, C_max or a system", field="mu")
	if mu > 0:
		raise QodeArgument("mu must not be positive", field="mu")
	if mu < 0 or options.get("stable"):
		return stability.StabilityProfile.stable(1.0, mu)
	return stability.StabilityProfile.marginal(1.0)


def _omega(options, prefs, h):
	if options.get("omega") is not None:
		return options["omega"]
	return max(prefs.omega, 1.0 / h)


def request_from_options(options, prefs):
	if options.get("T") is None:
		raise QodeArgument("the time horizon T is required", field="T")
	h = options.get("h", 1.0)
	grid = TimeGrid.from_horizon(options["T"], h)
	if options.get("system"):
		system = OdeSystem.load(options["system"])
		profile = stability.lyapunov_profile(system.A, T=grid.T, grid_points=prefs.grid_points)
		return pipeline.request_from_system(system, grid, options["epsilon"], options["target"],
			options["scheme"], omega=_omega(options, prefs, h), ancillas=options["ancillas"],
			amplification=options["amplification"], exact_truncation=options["exact_truncation"],
			profile=profile)
	norms = SolutionNormBounds(**{key: options[key] for key in norm_keys if options.get(key) is not None})
	return pipeline.EstimateRequest(_profile(options), grid, options["epsilon"], norms,
		omega=_omega(options, prefs, h), ancillas=options["ancillas"], target=options["target"],
		scheme=options["scheme"], amplification=options["amplification"],
		dimension=options.get("dimension", 1), norm_A=options.get("norm_A"),
		exact_truncation=options["exact_truncation"])


def _sweep_values(options):
	for key in ("axis", "start", "stop", "points"):
		if options.get(key) is None:
			raise QodeArgument("sweep needs --%s" % {"start": "from", "stop": "to"}.get(key, key), field=key)
	start, stop, points = options["start"], options["stop"], options["points"]
	if points < 2:
		raise QodeArgument("points must be at least 2", field="points")
	if not start < stop:
		raise QodeArgument("from must be below to", field="from")
	if options["axis"] == "mu":
		return np.linspace(start, stop, points).tolist()
	if start <= 0:
		raise QodeArgument("from must be positive for a log-spaced axis", field="from")
	return np.geomspace(start, stop, points).tolist()


def run_estimate(args, prefs):
	options = _merged(args, "estimate", prefs)
	report = pipeline.estimate(request_from_options(options, prefs))
	return reporting.dumps(report), macros.exit_ok


def run_sweep(args, prefs):
	options = _merged(args, "sweep", prefs)
	for key, flag in (("start", "from"), ("stop", "to")):
		if flag in options:
			options.setdefault(key, options.pop(flag))
	values = _sweep_values(options)
	axis = options["axis"]
	if axis == "T":
		options.setdefault("T", values[0])
	elif options.get("mu") is None and not any(options.get(k) is not None for k in ("kappa_P", "mu_P", "C_max")):
		options["mu"] = values[0] if axis == "mu" else -1.0
	template = request_from_options(options, prefs)
	reports = pipeline.sweep(template, axis, values, max(1, options["jobs"]))
	return reporting.csv_text(reporting.sweep_rows(reports, axis, values)), macros.exit_ok


def run_verify(args, prefs):
	options = _merged(args, "verify", prefs)
	if not options.get("system"):
		raise QodeArgument("verify needs --system", field="system")
	system = OdeSystem.load(options["system"])
	h = options.get("h") or min(1.0, system.max_step())
	if options.get("M") is not None:
		grid = TimeGrid(h, options["M"])
	elif options.get("T") is not None:
		grid = TimeGrid.from_horizon(options["T"], h)
	else:
		raise QodeArgument("verify needs --T or --M", field="T")
	result = pipeline.verify(system, grid, options["epsilon"], options["target"], options["scheme"],
		omega=options.get("omega"), amplification=options["amplification"])
	if options.get("steps"):
		with open(options["steps"], "w", encoding="utf-8", newline="\n") as f:
			columns = list(result.rows[0])
			f.write(",".join(columns) + "\n")
			for row in result.rows:
				f.write(",".join(repr(row[c]) for c in columns) + "\n")
	return reporting.dumps(result), macros.exit_ok if result.passed else macros.exit_failed_checks


def run_scenario(args, prefs):
	if args.list or not args.name:
		listing = [item(None).describe() for item in scenarios.get_available_scenarios()]
		return reporting.dumps(listing), macros.exit_ok
	params = {}
	if args.params:
		with open(args.params, encoding="utf-8") as f:
			try:
				params.update(json.load(f))
			except json.JSONDecodeError as error:
				raise QodeArgument("%s is not valid JSON: %s" % (args.params, error), field="params")
	for setting in args.settings:
		key, sep, value = setting.partition("=")
		if not sep:
			raise QodeArgument("--set expects KEY=VALUE, got %r" % setting, field="set")
		params[key.strip()] = value.strip()
	system = scenarios.get_scenario(args.name)(params).build()
	logger.info("%s: N = %d, max step %g", system.label, system.N, system.max_step())
	return reporting.dumps(system.as_dict()), macros.exit_ok


def run_fit(args, prefs):
	window = None
	if args.start is not None or args.stop is not None:
		window = (args.start if args.start is not None else 0.0, args.stop if args.stop is not None else float("inf"))
	return reporting.dumps(reporting.fit_csv(args.csv, args.column, window)), macros.exit_ok


handlers = {"estimate": run_estimate, "sweep": run_sweep, "verify": run_verify,
	"scenario": run_scenario, "fit-scaling": run_fit}


def main(argv=None):
	configure_logging()
	args = build_parser().parse_args(argv)
	prefs = preferences.load(args.preferences)
	try:
		text, code = handlers[args.command](args, prefs)
		if args.out:
			with open(args.out, "w", encoding="utf-8", newline="\n") as f:
				f.write(text)
		else:
			sys.stdout.write(text)
	except OSError as error:
		sys.stderr.write("error: %s\n" % error)
		return macros.exit_validation
	except QodeError as error:
		field = getattr(error, "field", None)
		sys.stderr.write("error%s: %s\n" % (" [%s]" % field if field else "", error))
		return macros.exit_validation if is_validation_error(error) else macros.exit_computation
	except np.linalg.LinAlgError as error:
		sys.stderr.write("error: %s\n" % error)
		return macros.exit_computation
	return code


if __name__ == "__main__":
	sys.exit(main())
