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

"""End-to-end query counts.

estimate() runs the ten steps from (profile, norms, grid, ε, ω, a, target)
to a CostReport for each error scheme and keeps the cheaper one. verify()
repeats the analysis for a concrete small system and checks every bound
against the materialized linear embedding.
"""

import dataclasses
import logging
import math
import multiprocessing
from typing import Optional

import numpy as np

from qode import bounds
from qode import discretization
from qode import embedding
from qode import macros
from qode import qlsa_cost
from qode import reporting
from qode import stability
from qode.bounds import HISTORY, SOLUTION
from qode.discretization import ADDITIVE, MULTIPLICATIVE, SolutionNormBounds, TimeGrid
from qode.exceptions import QodeArgument, QodeGuard, QodeMissingNorm

logger = logging.getLogger(__name__)

TARGETS = (HISTORY, SOLUTION)
AXES = ("T", "mu", "epsilon")
scheme_aliases = {"auto": "auto", "mult": MULTIPLICATIVE, "add": ADDITIVE,
	MULTIPLICATIVE: MULTIPLICATIVE, ADDITIVE: ADDITIVE}


@dataclasses.dataclass(frozen=True)
class EstimateRequest:
	profile: stability.StabilityProfile
	grid: TimeGrid
	epsilon: float
	norms: SolutionNormBounds = SolutionNormBounds()
	omega: float = 1.0
	ancillas: int = 0
	target: str = HISTORY
	scheme: str = "auto"
	amplification: str = qlsa_cost.REPEAT
	dimension: int = 1
	norm_A: Optional[float] = None
	exact_truncation: bool = False

	def __post_init__(self):
		if not 0 < self.epsilon < 1:
			raise QodeArgument("epsilon must lie in (0, 1)", field="epsilon")
		if self.omega * self.grid.h < 1:
			raise QodeArgument("ωh = %g is below 1" % (self.omega * self.grid.h), field="omega")
		if self.target not in TARGETS:
			raise QodeArgument("target must be history or solution", field="target")
		if self.scheme not in scheme_aliases:
			raise QodeArgument("unknown scheme %r" % (self.scheme,), field="scheme")
		object.__setattr__(self, "scheme", scheme_aliases[self.scheme])
		if self.amplification not in (qlsa_cost.REPEAT, qlsa_cost.GROVER):
			raise QodeArgument("amplification must be repeat or grover", field="amplification")
		if self.ancillas < 0:
			raise QodeArgument("ancillas must be nonnegative", field="ancillas")
		if self.dimension < 1:
			raise QodeArgument("dimension must be positive", field="dimension")

	@property
	def homogeneous(self):
		return self.norms.b_norm == 0

	def schemes(self):
		if self.scheme == "auto":
			return (MULTIPLICATIVE, ADDITIVE)
		return (self.scheme,)


@dataclasses.dataclass(frozen=True)
class SchemeRecord:
	scheme: str
	eps_td: float = math.nan
	log_s: float = math.nan
	k: int = 0
	p: int = 0
	omega_tilde: float = math.nan
	kappa_L: float = math.nan
	pr_lower: float = math.nan
	eps_L: float = math.nan
	q_qlsa: float = math.nan
	rounds: float = math.nan
	Q: float = math.inf
	skipped: Optional[str] = None

	def as_dict(self):
		return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class CostReport:
	records: tuple
	chosen: str
	Q: float
	qubits: int
	state_prep_queries: float
	M: int
	h: float
	T: float
	target: str
	profile: dict

	def record(self, scheme=None):
		scheme = scheme or self.chosen
		for item in self.records:
			if item.scheme == scheme:
				return item
		raise KeyError(scheme)

	def as_dict(self):
		return {"chosen": self.chosen, "Q": self.Q, "qubits": self.qubits,
			"state_prep_queries": self.state_prep_queries, "M": self.M, "h": self.h, "T": self.T,
			"target": self.target, "profile": self.profile,
			"schemes": [item.as_dict() for item in self.records]}


def idling_count(target, stable, M, k):
	if target == HISTORY:
		return 0
	block = k + 1
	if stable:
		return math.ceil(math.sqrt(M) / block) * block
	return math.ceil(M / block) * block


def _scheme_branch(req, scheme):
	grid = req.grid
	norms = req.norms
	# [1] time-discretization error
	eps_td, f = bounds.time_discretization_budget(req.epsilon, req.target, scheme, norms)
	if eps_td >= 1:
		return SchemeRecord(scheme, eps_td=eps_td, skipped="eps_td = %g is not below 1" % eps_td)
	# [2] truncation order
	plan = discretization.select_truncation(scheme, grid.M, grid.T, norms.b_norm, norms, eps_td,
		exact=req.exact_truncation)
	k = plan.k
	# [3] idling
	p = idling_count(req.target, req.profile.is_stable, grid.M, k)
	# [4] block-encoding scale
	omega_tilde = bounds.omega_tilde(k, req.omega, grid.h)
	# [5] condition number
	c = 1.0 if scheme == MULTIPLICATIVE else norms.x_max
	gbar = norms.gbar_times if scheme == MULTIPLICATIVE else norms.gbar_plus
	inp = bounds.BoundInputs.from_profile(req.profile, k=k, M=grid.M, h=grid.h, eps_td=eps_td, c=c,
		scheme=scheme, homogeneous=req.homogeneous, gbar=gbar, norm_A=req.norm_A,
		lambda_prob=norms.lambda_prob)
	kappa_L = bounds.kappa_bound(inp, p)
	# [6] success probability
	if req.target == HISTORY:
		pr_lower = bounds.pr_history_lower(inp)
	else:
		pr_lower = bounds.pr_solution_lower(inp, p)
	# [7] linear-solver error
	eps_L = bounds.error_budget(req.epsilon, req.target, scheme, norms, pr_lower).eps_L
	# [8] linear-solver queries
	cost = qlsa_cost.qlsa_query_count(omega_tilde, kappa_L, eps_L)
	# [9] amplification
	rounds = qlsa_cost.amplification_rounds(pr_lower, req.amplification)
	# [10]
	return SchemeRecord(scheme, eps_td=eps_td, log_s=plan.log_s, k=k, p=p, omega_tilde=omega_tilde,
		kappa_L=kappa_L, pr_lower=pr_lower, eps_L=eps_L, q_qlsa=cost.q_expected, rounds=rounds,
		Q=rounds * cost.q_expected)


def estimate(req):
	"""CostReport with every permitted scheme branch and the cheaper one chosen."""
	records = []
	missing = None
	for scheme in req.schemes():
		try:
			record = _scheme_branch(req, scheme)
		except QodeMissingNorm as error:
			missing = missing or error
			record = SchemeRecord(scheme, skipped=str(error))
		if record.skipped:
			logger.info("%s branch skipped: %s", scheme, record.skipped)
		records.append(record)
	usable = [item for item in records if item.skipped is None]
	if not usable:
		if missing is not None:
			raise missing
		raise QodeArgument("no error scheme is usable for these inputs", field="scheme")
	best = min(usable, key=lambda item: item.Q)
	qubits = qlsa_cost.qubit_count(req.ancillas, req.grid.M, best.k, best.p, req.dimension)
	return CostReport(tuple(records), best.scheme, best.Q, qubits, 4 * best.Q, req.grid.M, req.grid.h,
		req.grid.T, req.target, req.profile.as_dict())


def closed_form_negative_lognorm(T, h, mu, epsilon):
	"""History-state count for b = 0, κ_P = 1, ω = 1, repeat until success.

	The prefactor I₀(2)/(0.39 − 0.204 ε_L) applies to every term of the
	solver count.
	"""
	if mu > 0:
		raise QodeArgument("mu must not be positive", field="mu")
	if not 0 < epsilon < 1:
		raise QodeArgument("epsilon must lie in (0, 1)", field="epsilon")
	M = TimeGrid.from_horizon(T, h).M
	i0 = macros.i0_2
	k = discretization.select_truncation(MULTIPLICATIVE, M, M * h, 0.0, None, epsilon / 8).k
	g = bounds.g_of_k(k).value
	inner = (epsilon / 8 + 1) ** 2 * i0 * (g + 1) * bounds.xi_mu(mu * h, M) + k * M * (i0 - 1)
	kappa = (math.sqrt(k + 1) + 2) * math.sqrt(inner)
	log_k = math.log(2 * kappa + 3)
	prefactor = i0 / (0.39 - 0.204 * epsilon / ((epsilon + 4) * i0))
	solver = ((117 / 50) * (math.log(451 * (epsilon + 4) / epsilon * i0 * log_k ** 2) + 1) * log_k ** 2
		+ (581 / 250) * math.e * math.sqrt(kappa ** 2 + 1)
		* (((133 / 125) + 4 / (25 * kappa ** (1 / 3))) * math.pi * log_k + 1)
		+ kappa * math.log(32 * (epsilon + 4) * i0 / epsilon))
	return prefactor * solver


def negative_lognorm_request(T, h, mu, epsilon, target=HISTORY, amplification=qlsa_cost.REPEAT):
	"""Request for the homogeneous family with μ(A) = μ, ‖A‖ = 1/h and ω = 1/h."""
	if mu > 0:
		raise QodeArgument("mu must not be positive", field="mu")
	profile = stability.StabilityProfile.stable(1.0, mu) if mu < 0 else stability.StabilityProfile.marginal(1.0)
	return EstimateRequest(profile, TimeGrid.from_horizon(T, h), epsilon, omega=1.0 / h, target=target,
		scheme=MULTIPLICATIVE, amplification=amplification)


def request_from_system(system, grid, epsilon, target=HISTORY, scheme="auto", omega=None, ancillas=0,
		amplification=qlsa_cost.REPEAT, exact_truncation=False, profile=None, refine=4):
	"""Analyse a concrete system: stability profile plus sampled solution norms."""
	if profile is None:
		profile = stability.lyapunov_profile(system.A, T=grid.T)
	norms = discretization.solution_norms(system, grid, None, refine)
	try:
		eps_plus, _ = bounds.time_discretization_budget(epsilon, target, ADDITIVE, norms)
	except QodeMissingNorm:
		eps_plus = None
	if eps_plus is not None and norms.samples is not None:
		norms = dataclasses.replace(norms,
			gbar_plus=discretization.additive_ratio(np.asarray(norms.samples), eps_plus))
	return EstimateRequest(profile, grid, epsilon, norms, omega=omega or 1.0 / grid.h, ancillas=ancillas,
		target=target, scheme=scheme, amplification=amplification, dimension=system.N,
		norm_A=system.norm_A, exact_truncation=exact_truncation)


@dataclasses.dataclass
class VerificationReport:
	estimate: CostReport
	scheme: str
	k: int
	p: int
	block_dim: int
	norm_L: float
	norm_L_bound: float
	kappa_numeric: float
	kappa_analytic: float
	pr_exact: float
	pr_lower: float
	max_truncation_error: float
	eps_td: float
	max_power_ratio: float
	state_error: float
	state_error_bound: float
	budget_total: float
	epsilon: float
	residual: float
	residual_bound: float
	rows: list = dataclasses.field(repr=False, default_factory=list)

	@property
	def flags(self):
		return {"norm_L": self.norm_L <= self.norm_L_bound * (1 + 1e-12),
			"kappa": self.kappa_numeric <= self.kappa_analytic,
			"success_probability": self.pr_exact >= self.pr_lower - 1e-12,
			"truncation": self.max_truncation_error <= self.eps_td,
			"truncated_powers": self.max_power_ratio <= 1 + 1e-12,
			"state_error": self.state_error <= self.state_error_bound,
			"budget": self.budget_total <= self.epsilon * (1 + 1e-12),
			"residual": self.residual <= self.residual_bound}

	@property
	def passed(self):
		return all(self.flags.values())

	def as_dict(self):
		out = {f.name: getattr(self, f.name) for f in dataclasses.fields(self) if f.name not in ("rows", "estimate")}
		out["estimate"] = self.estimate.as_dict()
		out["flags"] = self.flags
		out["passed"] = self.passed
		return out


def verify(system, grid, epsilon, target=HISTORY, scheme="auto", omega=None, amplification=qlsa_cost.REPEAT,
		refine=4):
	"""Bounds next to measurements on the materialized embedding (desk scale only)."""
	if (grid.M + 1) * system.N > macros.embedding_size_guard:
		raise QodeGuard("M = %d is beyond desk scale" % grid.M, field="M")
	req = request_from_system(system, grid, epsilon, target, scheme, omega=omega,
		amplification=amplification, refine=refine)
	report = estimate(req)
	record = report.record()
	idling = embedding.IdlingPlan.history(grid.M) if target == HISTORY else \
		embedding.IdlingPlan.solution(grid.M, record.p)
	emb = embedding.build_embedding(system, grid, record.k, idling)
	y = embedding.solve_forward(emb)
	measured = embedding.measure_embedding(emb)
	probabilities = embedding.success_probabilities_exact(y, emb)
	pr_exact = probabilities["pr_history" if target == HISTORY else "pr_solution"]

	c = 1.0 if record.scheme == MULTIPLICATIVE else req.norms.x_max
	plan = discretization.TruncationPlan(record.scheme, record.eps_td, record.log_s, record.k)
	rows = discretization.truncation_error_report(system.A, system.b, system.x0, grid, plan, c, req.norms)
	key = "rel_err" if record.scheme == MULTIPLICATIVE else "abs_err"
	max_error = max(row[key] for row in rows)
	max_power_ratio = max(row["power_norm"] / row["power_bound"] for row in rows)

	f = bounds.error_factor(target, record.scheme, req.norms)
	exact = discretization.exact_trajectory(system.A, system.b, system.x0, grid)
	discrete = embedding.data_blocks(y, emb)
	if target == HISTORY:
		state_error = discretization.normalized_history_error(exact, discrete)
	else:
		state_error = discretization.normalized_history_error(exact[-1:], discrete[-1:])
	budget_total = bounds.total_error(record.eps_L, record.pr_lower, record.eps_td, f)

	result = VerificationReport(report, record.scheme, record.k, record.p, emb.block_dim,
		measured["norm_L"], emb.omega_k, measured["kappa_numeric"], record.kappa_L,
		pr_exact, record.pr_lower, max_error, record.eps_td, max_power_ratio,
		state_error, 2 * record.eps_td * f, budget_total, epsilon,
		embedding.residual(emb, y), 1e-10 * float(np.linalg.norm(emb.c)), rows)
	failed = [name for name, ok in result.flags.items() if not ok]
	if failed:
		logger.warning("verification failed: %s", ", ".join(failed))
	return result


def with_axis_value(template, axis, value):
	if axis == "T":
		return dataclasses.replace(template, grid=TimeGrid.from_horizon(value, template.grid.h))
	if axis == "epsilon":
		return dataclasses.replace(template, epsilon=value)
	if axis == "mu":
		if value > 0:
			raise QodeArgument("mu must not be positive", field="mu")
		profile = stability.StabilityProfile.stable(1.0, value) if value < 0 else stability.StabilityProfile.marginal(1.0)
		return dataclasses.replace(template, profile=profile)
	raise QodeArgument("axis must be one of %s" % ", ".join(AXES), field="axis")


def _sweep_row(task):
	template, axis, value = task
	return estimate(with_axis_value(template, axis, value))


def sweep(template, axis, values, jobs=1):
	"""One CostReport per axis value, in the order given."""
	values = [float(v) for v in values]
	if not values:
		raise QodeArgument("sweep needs at least one value", field="points")
	if not all(math.isfinite(v) for v in values) or values != sorted(values):
		raise QodeArgument("sweep values must be finite and sorted", field="points")
	if axis not in AXES:
		raise QodeArgument("axis must be one of %s" % ", ".join(AXES), field="axis")
	tasks = [(template, axis, v) for v in values]
	if jobs > 1 and len(tasks) > 1:
		with multiprocessing.Pool(min(jobs, len(tasks))) as pool:
			reports = pool.map(_sweep_row, tasks)
	else:
		reports = [_sweep_row(task) for task in tasks]
	logger.info("swept %s over %d values", axis, len(values))
	return reports


def fast_forwarding_fit(template, values, jobs=1):
	"""Exponent of Q in T over the given horizons."""
	reports = sweep(template, "T", values, jobs)
	return reporting.fit_power_law([r.T for r in reports], [r.Q for r in reports])


if __name__ == "__main__":
	for mu in (0.0, -1.0):
		print(mu, estimate(negative_lognorm_request(1e10, 1.0, mu, 1e-10)).Q)
