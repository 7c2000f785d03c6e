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

import dataclasses
import logging
import math
import warnings

from qode import macros
from qode.exceptions import QodeArgument, QodeWarning

logger = logging.getLogger(__name__)

REPEAT = "repeat"
GROVER = "grover"


@dataclasses.dataclass(frozen=True)
class QlsaCost:
	q_star: float
	q_expected: float
	success_floor: float


def qlsa_query_count(omega_tilde, kappa_L, eps_L):
	"""Expected block-encoding calls of the discrete-adiabatic linear solver.

	All logarithms are natural. κ below √12 is clamped to √12 with a warning.
	"""
	if not 0 < eps_L <= macros.qlsa_max_error:
		raise QodeArgument("eps_L must lie in (0, %g]" % macros.qlsa_max_error, field="eps_L")
	if not omega_tilde > 0:
		raise QodeArgument("omega_tilde must be positive", field="omega")
	divisor = macros.qlsa_success_constant - macros.qlsa_count_slope * eps_L
	if divisor <= 0:
		raise QodeArgument("eps_L leaves no success probability", field="eps_L")
	if kappa_L < macros.qlsa_min_kappa:
		warnings.warn("κ = %g clamped to √12" % kappa_L, QodeWarning)
		kappa_L = macros.qlsa_min_kappa

	log_k = math.log(2 * kappa_L + 3)
	term1 = (581 * omega_tilde * math.e / 250) * math.sqrt(kappa_L ** 2 + 1)
	term2 = ((133 / 125) + 4 / (25 * kappa_L ** (1 / 3))) * math.pi * log_k + 1
	term3 = (117 / 50) * log_k ** 2
	term4 = math.log(451 * log_k ** 2 / eps_L) + 1
	term5 = omega_tilde * kappa_L * math.log(32 / eps_L)
	q_star = term1 * term2 + term3 * term4 + term5

	floor = macros.qlsa_success_constant - macros.qlsa_floor_slope * eps_L
	return QlsaCost(q_star, q_star / divisor, floor)


def amplification_rounds(pr_lower, mode=REPEAT):
	"""Circuit invocations needed to overcome post-selection with probability pr_lower."""
	if not 0 < pr_lower <= 1:
		raise QodeArgument("pr_lower must lie in (0, 1]", field="pr_lower")
	if mode == REPEAT:
		return 1.0 / pr_lower
	if mode == GROVER:
		theta = math.asin(math.sqrt(pr_lower))
		j = max(0, math.ceil(math.pi / (4 * theta) - 0.5 - macros.round_slack))
		return float(2 * j + 1)
	raise QodeArgument("unknown amplification mode %r" % (mode,), field="amplification")


def qubit_count(a, M, k, p, N):
	if N < 1:
		raise QodeArgument("N must be positive", field="dimension")
	if min(a, M, k, p) < 0:
		raise QodeArgument("a, M, k and p must be nonnegative", field="ancillas")
	rows = ((M + 1) * (k + 1) + p) * N
	# ⌈log2 n⌉ for integer n ≥ 1
	return a + macros.qubit_overhead + (rows - 1).bit_length()


if __name__ == "__main__":
	print(qlsa_query_count(1.0, 100.0, 1e-10))
