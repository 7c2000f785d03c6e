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

"""Truncated Taylor time stepping.

One step maps x ↦ T_k(Ah) x + h S_k(Ah) b with

    T_k(x) = Σ_{j=0}^{k} x^j/j!        S_k(x) = Σ_{j=1}^{k} x^{j-1}/j!

which is exactly what the linear embedding generates block by block.
Truncation orders are chosen from ln s without ever forming s.
"""

import dataclasses
import logging
import math
import warnings
from typing import Optional

import numpy as np

from qode import macros
from qode import numerics
from qode.exceptions import QodeArgument, QodeDimension, QodeMissingNorm, QodeWarning

logger = logging.getLogger(__name__)

MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"
SCHEMES = (MULTIPLICATIVE, ADDITIVE)


@dataclasses.dataclass(frozen=True)
class TimeGrid:
	h: float
	M: int

	def __post_init__(self):
		if not (self.h > 0 and math.isfinite(self.h)):
			raise QodeArgument("h must be positive and finite", field="h")
		if int(self.M) != self.M or self.M < 0:
			raise QodeArgument("M must be a nonnegative integer", field="M")

	@property
	def T(self):
		return self.M * self.h

	@classmethod
	def from_horizon(cls, T, h):
		"""Grid with M = ⌈T/h⌉; the returned grid's T may exceed the requested one."""
		if not (T > 0 and math.isfinite(T)):
			raise QodeArgument("T must be positive and finite", field="T")
		ratio = T / h
		nearest = round(ratio)
		M = nearest if abs(ratio - nearest) <= 1e-9 else math.ceil(ratio)
		grid = cls(h, max(M, 1))
		if grid.T != T:
			logger.info("T adjusted from %g to %g so that M = %d is integral", T, grid.T, grid.M)
		return grid

	def times(self):
		return self.h * np.arange(self.M + 1)


@dataclasses.dataclass(frozen=True)
class TruncationPlan:
	scheme: str
	eps_td: float
	log_s: float
	k: int


@dataclasses.dataclass(frozen=True)
class SolutionNormBounds:
	x_min: Optional[float] = None
	x_max: Optional[float] = None
	x_rms: Optional[float] = None
	b_norm: float = 0.0
	gbar_times: Optional[float] = None
	gbar_plus: Optional[float] = None
	x_final: Optional[float] = None
	lambda_prob: Optional[float] = None
	samples: Optional[tuple] = dataclasses.field(default=None, repr=False)

	def __post_init__(self):
		if self.x_min is not None and not self.x_min > 0:
			raise QodeArgument("x_min must be positive", field="x_min")
		if self.x_min is not None and self.x_max is not None and self.x_min > self.x_max:
			raise QodeArgument("x_min exceeds x_max", field="x_min")
		if self.b_norm < 0:
			raise QodeArgument("b_norm must be nonnegative", field="b_norm")

	def as_dict(self):
		return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)
			if f.name != "samples" and getattr(self, f.name) is not None}


def check_step(A, h):
	norm = numerics.operator_norm(A) * h
	if norm > 1 + macros.step_norm_slack:
		raise QodeArgument("‖A‖h = %.6g exceeds 1" % norm, field="h")
	return norm


def taylor_operators(A, h, k):
	"""(T_k(Ah), S_k(Ah)) by Horner recurrence.

	S_k = 1 + x/2 (1 + x/3 (... (1 + x/k))) and T_k = I + Ah S_k. For k = 0
	S_k is the zero matrix and a warning is issued.
	"""
	A = numerics.as_square(A, "A")
	if int(k) != k or k < 0:
		raise QodeArgument("k must be a nonnegative integer", field="k")
	check_step(A, h)
	N = A.shape[0]
	I = np.eye(N, dtype=complex)
	if k == 0:
		warnings.warn("S_0 is the empty sum", QodeWarning)
		return I.copy(), np.zeros((N, N), dtype=complex)
	Ah = A * h
	S = I.copy()
	for j in range(k, 1, -1):
		S = I + Ah @ S / j
	return I + Ah @ S, S


def _k_from_log_s(log_s):
	# Lambert-W upper bound of the Stirling condition ((k+1)/e)^{k+1} ≥ s
	k = int(math.ceil((1.5 * log_s + 1) / math.log1p(log_s / 2) - 1))
	# safeguard only; the bound already holds for 1 < ln s ≤ 1e6
	while math.lgamma(k + 2) < log_s:
		k += 1
	return max(k, 1)


def sufficient_truncation_exact(log_s, limit=None):
	"""Smallest k with (k+1)! ≥ s by integer scan."""
	limit = limit or macros.exact_search_limit
	for k in range(1, limit + 1):
		if math.lgamma(k + 2) >= log_s:
			return k
	raise QodeArgument("no k ≤ %d satisfies (k+1)! ≥ s" % limit, field="epsilon")


def log_s_value(scheme, M, T, b_norm, norms, eps_td):
	if scheme not in SCHEMES:
		raise QodeArgument("unknown scheme %r" % (scheme,), field="scheme")
	if not (0 < eps_td <= 1):
		raise QodeArgument("eps_td must lie in (0, 1]", field="eps_td")
	if M < 1:
		raise QodeArgument("M must be at least 1", field="M")
	base = math.log(M) + 3 - math.log(eps_td)
	if scheme == MULTIPLICATIVE:
		if b_norm == 0:
			return base
		if norms is None or norms.x_min is None:
			raise QodeMissingNorm("the multiplicative scheme needs x_min for an inhomogeneous system", field="x_min")
		return base + math.log1p(T * math.e ** 2 * b_norm / norms.x_min)
	if norms is None or norms.x_max is None:
		raise QodeMissingNorm("the additive scheme needs x_max", field="x_max")
	return base + math.log(norms.x_max) + math.log1p(T * math.e ** 2 * b_norm / norms.x_max)


def select_truncation(scheme, M, T, b_norm, norms, eps_td, exact=False):
	"""TruncationPlan with the sufficient k for either error scheme."""
	log_s = log_s_value(scheme, M, T, b_norm, norms, eps_td)
	if log_s <= 1:
		warnings.warn("s = e^%.3g ≤ e, using k = 1" % log_s, QodeWarning)
		k = 1
	elif exact:
		k = sufficient_truncation_exact(log_s)
	else:
		k = _k_from_log_s(log_s)
	logger.debug("%s truncation: ln s = %.6g, k = %d", scheme, log_s, k)
	return TruncationPlan(scheme, eps_td, log_s, k)


def discrete_trajectory(A, b, x0, grid, k):
	"""x⁰ … x^M of the truncated recursion as an (M+1, N) array."""
	A = numerics.as_square(A, "A")
	N = A.shape[0]
	x = numerics.as_vector(x0, N, "x0")
	Tk, Sk = taylor_operators(A, grid.h, k)
	drift = np.zeros(N, dtype=complex) if b is None else grid.h * Sk @ numerics.as_vector(b, N, "b")
	out = np.empty((grid.M + 1, N), dtype=complex)
	out[0] = x
	for m in range(1, grid.M + 1):
		x = Tk @ x + drift
		out[m] = x
	return out


def exact_trajectory(A, b, x0, grid):
	A = numerics.as_square(A, "A")
	N = A.shape[0]
	x0 = numerics.as_vector(x0, N, "x0")
	return np.array([numerics.propagate_exact(A, b, x0, t) for t in grid.times()])


def time_discretization_bound(m, k, T, b_norm, x_norm, scheme, x_min=None):
	"""Error bound ‖x(mh) − x^m‖ implied by truncation order k (inf when me²/(k+1)! > 1).

	Multiplicative: relative to ‖x(mh)‖, needs x_min when b ≠ 0. Additive:
	absolute, evaluated with the actual ‖x(mh)‖ = x_norm.
	"""
	if m == 0:
		return 0.0
	log_fact = math.lgamma(k + 2)
	if math.log(m) + 2 - log_fact > 0:
		return math.inf
	state_term = (math.e - 1) * m * math.e ** 2
	forcing_term = m * T * math.e ** 5 * b_norm
	if scheme == MULTIPLICATIVE:
		if b_norm > 0:
			if x_min is None:
				raise QodeMissingNorm("x_min is needed for the multiplicative bound", field="x_min")
			state_term += forcing_term / x_min
		return state_term * math.exp(-log_fact)
	return (state_term * x_norm + forcing_term) * math.exp(-log_fact)


def truncation_error_report(A, b, x0, grid, plan, c=1.0, norms=None):
	"""Per-step comparison of the truncated recursion with the exact propagation.

	Rows carry abs_err, rel_err, the eps_td bound for the plan's scheme, the
	finite-k lemma bound, and ‖T_k(Ah)^m‖ against (1 + eps_td/c)‖e^{Amh}‖.
	"""
	A = numerics.as_square(A, "A")
	if grid.M > 10 ** 4 or A.shape[0] > 64:
		raise QodeArgument("truncation report is limited to M ≤ 10⁴ and N ≤ 64", field="M")
	discrete = discrete_trajectory(A, b, x0, grid, plan.k)
	exact = exact_trajectory(A, b, x0, grid)
	b_norm = 0.0 if b is None else float(np.linalg.norm(b))
	x_min = norms.x_min if norms is not None else None
	Tk, _ = taylor_operators(A, grid.h, plan.k)
	power = np.eye(A.shape[0], dtype=complex)
	rows = []
	for m in range(grid.M + 1):
		if m > 0:
			power = Tk @ power
		x_norm = float(np.linalg.norm(exact[m]))
		abs_err = float(np.linalg.norm(discrete[m] - exact[m]))
		exp_norm = numerics.operator_norm(numerics.expm(A, m * grid.h))
		rows.append({"m": m, "abs_err": abs_err,
			"rel_err": abs_err / x_norm if x_norm > 0 else math.inf,
			"bound": plan.eps_td,
			"lemma_bound": time_discretization_bound(m, plan.k, grid.T, b_norm, x_norm,
				plan.scheme, x_min),
			"power_norm": numerics.operator_norm(power),
			"power_bound": (1 + plan.eps_td / c) * exp_norm})
	return rows


def additive_ratio(samples, eps_td):
	"""ḡ_+ from the M+1 sampled norms ‖x(mh)‖; inf when ‖x(T)‖ ≤ eps_td."""
	samples = np.asarray(samples, dtype=float)
	final = float(samples[-1])
	if final <= eps_td:
		return math.inf
	ratio = (1 - eps_td) / (1 + eps_td)
	return float(ratio * np.sqrt(np.mean((samples + eps_td) ** 2)) / (final - eps_td))


def solution_norms(system, grid, eps_td=None, refine=4):
	"""Table of solution-norm constants sampled from the exact solution.

	‖x(t)‖ is sampled on the grid refined by `refine` for x_min, x_max and
	λ_prob; x_rms, ḡ_× and ḡ_+ use the M+1 grid samples. ḡ_+ needs eps_td.
	"""
	if refine < 1 or int(refine) != refine:
		raise QodeArgument("refine must be a positive integer", field="refine")
	E, f = numerics.step_propagator(system.A, system.b, grid.h / refine)
	x = system.x0.copy()
	fine = [float(np.linalg.norm(x))]
	for _ in range(grid.M * refine):
		x = E @ x + f
		fine.append(float(np.linalg.norm(x)))
	fine = np.array(fine)
	samples = fine[::refine]
	final = float(samples[-1])
	x_min = float(fine.min())
	b_norm = system.b_norm
	gbar_times = None
	gbar_plus = None
	if final > 0:
		gbar_times = float(np.sqrt(np.mean(samples ** 2)) / final)
	if eps_td is not None:
		gbar_plus = additive_ratio(samples, eps_td)
	lambda_prob = grid.T if x_min == 0 else max(b_norm / x_min, grid.T)
	return SolutionNormBounds(x_min=x_min if x_min > 0 else None, x_max=float(fine.max()),
		x_rms=float(np.sqrt(np.mean(samples ** 2))), b_norm=b_norm,
		gbar_times=gbar_times, gbar_plus=gbar_plus, x_final=final,
		lambda_prob=lambda_prob, samples=tuple(samples))


def normalized_history_error(exact_samples, discrete_samples):
	"""‖ |x_H^ε⟩ − |x_H⟩ ‖ for the stacked (M+1, N) sample arrays."""
	exact_samples = np.asarray(exact_samples, dtype=complex)
	discrete_samples = np.asarray(discrete_samples, dtype=complex)
	if exact_samples.shape != discrete_samples.shape:
		raise QodeDimension("sample arrays differ in shape")
	exact_vector = exact_samples.reshape(-1)
	discrete_vector = discrete_samples.reshape(-1)
	return float(np.linalg.norm(exact_vector / np.linalg.norm(exact_vector)
		- discrete_vector / np.linalg.norm(discrete_vector)))


if __name__ == "__main__":
	plan = select_truncation(MULTIPLICATIVE, 10 ** 6, 10.0 ** 6, 0.0, None, 1e-9)
	print(plan)
