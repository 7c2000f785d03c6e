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

"""Closed-form bounds: condition number of L, success probabilities,
block-encoding scale and the split of the error budget.

Sums of e^{2μh l} are evaluated through φ(z) = e^z − 1 − z so that μh → 0⁻
keeps full precision.
"""

import dataclasses
import logging
import math
from typing import Optional

import numpy as np

from qode import macros
from qode.discretization import ADDITIVE, MULTIPLICATIVE
from qode.exceptions import QodeArgument, QodeMissingNorm

logger = logging.getLogger(__name__)

HISTORY = "history"
SOLUTION = "solution"


@dataclasses.dataclass(frozen=True)
class GFactor:
	value: float
	cap: float


@dataclasses.dataclass(frozen=True)
class BoundInputs:
	k: int
	M: int
	h: float
	eps_td: float = 0.0
	c: float = 1.0
	kappa_P: Optional[float] = None
	mu_P: Optional[float] = None
	C_max: Optional[float] = None
	scheme: str = MULTIPLICATIVE
	homogeneous: bool = True
	gbar: Optional[float] = None
	norm_A: Optional[float] = None
	lambda_prob: Optional[float] = None
	idling: Optional[tuple] = None

	def __post_init__(self):
		if self.k < 0 or self.M < 0:
			raise QodeArgument("k and M must be nonnegative", field="k")
		if self.eps_td < 0:
			raise QodeArgument("eps_td must be nonnegative", field="eps_td")
		if not self.c > 0:
			raise QodeArgument("the scheme constant must be positive", field="x_max")
		if self.mu_P is not None and self.mu_P > 0:
			raise QodeArgument("mu_P must not be positive", field="mu_P")
		if self.C_max is None and (self.kappa_P is None or self.mu_P is None):
			raise QodeArgument("need either (kappa_P, mu_P) or C_max", field="kappa_P")

	@property
	def is_stable(self):
		return self.C_max is None

	@classmethod
	def from_profile(cls, profile, **kwargs):
		if profile.is_stable:
			return cls(kappa_P=profile.kappa_P, mu_P=profile.mu_P, **kwargs)
		return cls(C_max=profile.C_max, **kwargs)

	def transient(self, t):
		if self.is_stable:
			return math.sqrt(self.kappa_P) * math.exp(self.mu_P * t)
		return self.C_max


def g_of_k(k):
	"""g(k) = Σ_{s=1}^k (s! Σ_{j=s}^k 1/j!)² and its cap e·k."""
	if int(k) != k or k < 0:
		raise QodeArgument("k must be a nonnegative integer", field="k")
	total = 0.0
	t = 0.0
	for s in range(k, 0, -1):
		t = 1.0 + t / (s + 1) if s < k else 1.0
		total += t * t
	return GFactor(total, math.e * k)


def _phi(z):
	# e^z − 1 − z
	if abs(z) < 0.1:
		term = z * z / 2
		total = term
		n = 2
		while abs(term) > 1e-17 * abs(total):
			n += 1
			term *= z / n
			total += term
		return total
	return math.expm1(z) - z


def geometric_factor(mu_h, M):
	"""Σ_{l=0}^{M} e^{2μh l}, limit M+1 at μh = 0."""
	if mu_h > 0:
		raise QodeArgument("mu_h must not be positive", field="mu_P")
	x = 2 * mu_h
	if x == 0:
		return float(M + 1)
	return math.expm1((M + 1) * x) / math.expm1(x)


def xi_mu(mu_h, M):
	"""Σ_{m=0}^{M} Σ_{l=0}^{m} e^{2μh l}, limit (M+1)(M+2)/2 at μh = 0."""
	if mu_h > 0:
		raise QodeArgument("mu_h must not be positive", field="mu_P")
	x = 2 * mu_h
	if x == 0:
		return (M + 1) * (M + 2) / 2
	return (_phi((M + 2) * x) - (M + 2) * _phi(x)) / math.expm1(x) ** 2


def _omega_k(k):
	return math.sqrt(k + 1) + 2


def _inner_factor(inp):
	return (1 + inp.eps_td / inp.c) ** 2 * (1 + g_of_k(inp.k).value)


def _tail(inp, p):
	return p * (p + 1) / 2 + (p + inp.M * inp.k) * (macros.i0_2 - 1)


def kappa_bound_stable(inp, p=0):
	if not inp.is_stable:
		raise QodeArgument("kappa_bound_stable needs a stable profile", field="kappa_P")
	mu_h = inp.mu_P * inp.h
	sums = p * geometric_factor(mu_h, inp.M) + macros.i0_2 * xi_mu(mu_h, inp.M)
	return math.sqrt(_inner_factor(inp) * inp.kappa_P * sums + _tail(inp, p)) * _omega_k(inp.k)


def kappa_bound_unstable(inp, p=0):
	if inp.C_max is None or inp.C_max < 1:
		raise QodeArgument("kappa_bound_unstable needs C_max ≥ 1", field="C_max")
	M = inp.M
	sums = (M + 1) * (p + macros.i0_2 * (M / 2 + 1))
	return _omega_k(inp.k) * math.sqrt(inp.C_max ** 2 * _inner_factor(inp) * sums + _tail(inp, p))


def kappa_bound(inp, p=0):
	if inp.is_stable:
		return kappa_bound_stable(inp, p)
	return kappa_bound_unstable(inp, p)


def kappa_bound_general(inp, idling=None):
	"""Condition-number bound for arbitrary idling counts p_0 … p_M.

	Sums are evaluated directly up to M = 10⁴; above that only the canonical
	plans (all zero, or zero except p_M) are accepted, through the closed forms.
	"""
	p = tuple(idling if idling is not None else (inp.idling or (0,) * (inp.M + 1)))
	if len(p) != inp.M + 1:
		raise QodeArgument("idling plan needs M+1 = %d entries" % (inp.M + 1), field="p")
	if inp.M > macros.direct_sum_limit:
		if any(p[:-1]):
			raise QodeArgument("non-canonical idling with M > %d cannot be summed directly"
				% macros.direct_sum_limit, field="p")
		logger.debug("M = %d above the direct-sum limit, using the closed forms", inp.M)
		return kappa_bound(inp, p[-1])
	growth = (1 + inp.eps_td / inp.c) ** 2
	g = g_of_k(inp.k).value
	p_arr = np.asarray(p, dtype=float)
	previous = np.concatenate(([0.0], p_arr[:-1]))
	C2 = np.array([inp.transient(l * inp.h) ** 2 for l in range(inp.M + 1)])
	C_h2 = inp.transient(inp.h) ** 2
	prefix = np.cumsum(C2 * (1 + previous * growth * C_h2 + g))
	total = np.sum(growth * (p_arr + macros.i0_2) * prefix + p_arr * (p_arr + 1) / 2)
	total += (np.sum(p_arr) + inp.M * inp.k) * (macros.i0_2 - 1)
	return float(math.sqrt(total) * _omega_k(inp.k))


def best_case_prefactor(k, eps_td=0.0, c=1.0):
	"""Constant multiplying √M·(√(k+1)+2) in the stable bound when μh = −1, κ_P = 1, p = 0."""
	e2 = math.e ** 2
	return math.sqrt((1 + eps_td / c) ** 2 * (1 + g_of_k(k).value) * macros.i0_2 * e2 / (e2 - 1)
		+ k * (macros.i0_2 - 1))


def _k_constant(homogeneous):
	return macros.k_homogeneous if homogeneous else macros.k_inhomogeneous


def pr_history_lower(inp):
	"""Lower bound on the history-state success probability."""
	K = _k_constant(inp.homogeneous)
	best = 1.0 / (1.0 + (macros.i0_2 - 1) / K)
	if inp.scheme == MULTIPLICATIVE and inp.lambda_prob is not None and inp.norm_A:
		if inp.eps_td >= 1:
			raise QodeArgument("eps_td must be below 1", field="eps_td")
		ratio = inp.lambda_prob / ((1 - inp.eps_td) * inp.norm_A)
		best = max(best, 1.0 / (1.0 + (1 + ratio) ** 2 * (macros.i0_2 - 1)))
	return best


def pr_solution_lower(inp, p):
	"""Lower bound on the solution-state success probability after p idling steps.

	Counts the data blocks x^0 .. x^{M-1} in ‖y‖² next to the Taylor stages.
	With D = Σ_{m<M} ‖x^m‖² and F = ‖x^M‖², the stages of step m hold at
	most (I₀(2)−1)‖x^m‖² when b = 0. With a forcing term every stage is a
	multiple of v = Ah x^m + hb and ‖x^{m+1} − x^m‖ ≥ (3−e)‖v‖, so the
	stages hold at most (I₀(2)−1)(2/(3−e)²)(2D + F) in total.
	(M+1)ḡ² bounds (D + F)/F.

	For ḡ = 1, b = 0 and p = M the bound tends to 1/(1 + I₀(2)).
	"""
	if inp.eps_td >= 1:
		raise QodeArgument("eps_td must be below 1", field="eps_td")
	if inp.gbar is None:
		raise QodeMissingNorm("the solution-state bound needs gbar", field="gbar")
	if p < 0:
		raise QodeArgument("p must be nonnegative", field="p")
	spread = macros.i0_2 - 1
	if inp.homogeneous:
		on_data, on_final = spread, 0.0
	else:
		K = _k_constant(False)
		on_data, on_final = 4 * spread / K, 2 * spread / K
	ratio = ((1 + inp.eps_td) / (1 - inp.eps_td)) ** 2
	data = max((inp.M + 1) * ratio * inp.gbar ** 2 - 1, 0.0)
	return (p + 1) / ((1 + on_data) * data + p + 1 + on_final)


def omega_tilde(k, omega, h):
	if omega * h < 1:
		raise QodeArgument("ωh = %g is below 1" % (omega * h), field="omega")
	root = math.sqrt(k + 1)
	return (1 + root + omega * h) / (root + 2)


@dataclasses.dataclass(frozen=True)
class ErrorBudget:
	eps_td: float
	eps_L: float
	f: float


def error_factor(target, scheme, norms):
	if scheme == MULTIPLICATIVE:
		return 1.0
	if scheme != ADDITIVE:
		raise QodeArgument("unknown scheme %r" % (scheme,), field="scheme")
	if target == HISTORY:
		if norms is None or not norms.x_rms:
			raise QodeMissingNorm("the additive history budget needs x_rms", field="x_rms")
		return 1.0 / norms.x_rms
	if target == SOLUTION:
		if norms is None or not norms.x_final:
			raise QodeMissingNorm("the additive solution budget needs x_final", field="x_final")
		return 1.0 / norms.x_final
	raise QodeArgument("unknown target %r" % (target,), field="target")


def time_discretization_budget(epsilon, target, scheme, norms):
	if not 0 < epsilon < 1:
		raise QodeArgument("epsilon must lie in (0, 1)", field="epsilon")
	f = error_factor(target, scheme, norms)
	return epsilon / (8 * f), f


def error_budget(epsilon, target, scheme, norms, pr_lower):
	"""Split ε into the discretization error eps_td and the solver error eps_L."""
	if not pr_lower > 0:
		raise QodeArgument("pr_lower must be positive", field="pr_lower")
	eps_td, f = time_discretization_budget(epsilon, target, scheme, norms)
	eps_L = epsilon * pr_lower / (4 + epsilon)
	if not eps_L < pr_lower:
		raise QodeArgument("eps_L must stay below the success probability", field="epsilon")
	return ErrorBudget(eps_td, eps_L, f)


def postselection_perturbation(eps, pr):
	if not pr > eps:
		raise QodeArgument("success probability must exceed the perturbation", field="eps_L")
	return 2 * eps / (pr - eps)


def total_error(eps_L, pr, eps_td, f):
	"""Trace-distance bound on the output state for the given error split."""
	return postselection_perturbation(eps_L, pr) + 4 * eps_td * f


if __name__ == "__main__":
	for k in (1, 2, 19):
		print(k, g_of_k(k), best_case_prefactor(k))
