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

"""Carleman linearization of u̇ = F0 + F1 u + F2 (u ⊗ u).

The state x = (u, u⊗², …, u^{⊗N_tr}) obeys a linear system whose block row j
carries F1 on the diagonal, F2 one block to the right and F0 one block to the
left, each summed over the j tensor positions. The F0 term of the first row
becomes the forcing b.
"""

import dataclasses
import logging

import numpy as np
import scipy.sparse

from qode import macros
from qode import numerics
from qode import stability
from qode.exceptions import QodeArgument, QodeGuard
from qode.scenarios.scenario_base import ScenarioBase
from qode.system import OdeSystem

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class CarlemanSystem:
	system: OdeSystem
	R: float
	converges: bool
	truncation: int


def _position_sum(F, j, N):
	# Σ_ν I^{⊗(ν−1)} ⊗ F ⊗ I^{⊗(j−ν)}
	F = scipy.sparse.csr_matrix(F)
	total = None
	for nu in range(1, j + 1):
		term = scipy.sparse.kron(scipy.sparse.kron(scipy.sparse.identity(N ** (nu - 1)), F),
			scipy.sparse.identity(N ** (j - nu)))
		total = term if total is None else total + term
	return total


def carleman_generator(F0, F1, F2, truncation):
	"""(A, b) of the truncated Carleman system, A dense."""
	N = F1.shape[0]
	sizes = [N ** j for j in range(1, truncation + 1)]
	if sum(sizes) > macros.carleman_size_guard:
		raise QodeGuard("Carleman system of size %d exceeds the %d guard" % (sum(sizes), macros.carleman_size_guard),
			field="truncation")
	offsets = np.concatenate(([0], np.cumsum(sizes)))
	A = np.zeros((offsets[-1], offsets[-1]), dtype=complex)
	column = F0.reshape(N, 1)
	for j in range(1, truncation + 1):
		rows = slice(offsets[j - 1], offsets[j])
		A[rows, offsets[j - 1]:offsets[j]] = _position_sum(F1, j, N).toarray()
		if j < truncation:
			A[rows, offsets[j]:offsets[j + 1]] = _position_sum(F2, j, N).toarray()
		if j > 1:
			A[rows, offsets[j - 2]:offsets[j - 1]] = _position_sum(column, j, N).toarray()
	b = np.zeros(offsets[-1], dtype=complex)
	b[:N] = F0
	return A, b


def carleman_state(u0, truncation):
	parts = [u0]
	for _ in range(truncation - 1):
		parts.append(np.kron(parts[-1], u0))
	return np.concatenate(parts)


def reynolds_number(F0, F1, F2, u0):
	"""(‖F2‖/‖u0‖ + ‖F0‖‖u0‖)/|μ(F1)|."""
	mu = stability.euclidean_log_norm(F1)
	u_norm = float(np.linalg.norm(u0))
	return (numerics.operator_norm(F2) / u_norm + float(np.linalg.norm(F0)) * u_norm) / abs(mu)


def carleman_quadratic(F0, F1, F2, u0, truncation):
	F1 = numerics.as_square(F1, "F1")
	N = F1.shape[0]
	F0 = np.zeros(N, dtype=complex) if F0 is None else numerics.as_vector(F0, N, "F0")
	F2 = numerics.as_matrix(F2, "F2")
	if F2.shape != (N, N * N):
		raise QodeArgument("F2 must be %dx%d" % (N, N * N), field="F2")
	u0 = numerics.as_vector(u0, N, "u0")
	if int(truncation) != truncation or truncation < 1:
		raise QodeArgument("truncation must be a positive integer", field="truncation")
	if not np.linalg.norm(u0) < 1:
		raise QodeArgument("u0 must be rescaled to norm below 1", field="u0")
	if not stability.euclidean_log_norm(F1) < 0:
		raise QodeArgument("F1 must have a negative log-norm", field="F1")
	A, b = carleman_generator(F0, F1, F2, truncation)
	R = reynolds_number(F0, F1, F2, u0)
	if R >= 1:
		logger.warning("R = %.3g is not below 1, Carleman truncation need not converge", R)
	system = OdeSystem(A, b, carleman_state(u0, truncation), "carleman N_tr=%d" % truncation)
	return CarlemanSystem(system, R, R < 1, truncation)


class ScenarioCarleman(ScenarioBase):
	name = "carleman"
	description = "Carleman linearization of the scalar equation du/dt = -a u + q u^2"
	defaults = {"decay": 1.0, "quadratic": 0.25, "forcing": 0.0, "u0": 0.5, "truncation": 6}

	@staticmethod
	def is_available():
		return True

	def build(self):
		p = self.params
		return carleman_quadratic([p["forcing"]], [[-p["decay"]]], [[p["quadratic"]]], [p["u0"]],
			p["truncation"]).system
