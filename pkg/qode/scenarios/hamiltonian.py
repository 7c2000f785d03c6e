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

import numpy as np

from qode import macros
from qode.exceptions import QodeArgument
from qode.scenarios.negative_lognorm import random_hermitian, random_unit_vector
from qode.scenarios.scenario_base import ScenarioBase
from qode.system import OdeSystem


def hamiltonian_case(H, x0):
	"""Schrödinger dynamics: A = −iH, b = 0."""
	H = np.asarray(H, dtype=complex)
	if H.ndim != 2 or H.shape[0] != H.shape[1]:
		raise QodeArgument("H must be square", field="H")
	scale = max(1.0, float(np.max(np.abs(H))) if H.size else 1.0)
	if np.max(np.abs(H - H.conj().T)) > macros.hermitian_tolerance * scale:
		raise QodeArgument("H is not Hermitian", field="H")
	return OdeSystem(-1j * H, None, x0, "hamiltonian")


class ScenarioHamiltonian(ScenarioBase):
	name = "hamiltonian"
	description = "seeded random Hamiltonian with unit spectral norm"
	defaults = {"N": 4, "seed": 0}

	@staticmethod
	def is_available():
		return True

	def build(self):
		N = self.params["N"]
		if N < 1:
			raise QodeArgument("N must be positive", field="N")
		rng = np.random.default_rng(self.params["seed"])
		H = random_hermitian(N, rng)
		norm = float(np.max(np.abs(np.linalg.eigvalsh(H))))
		if norm > 0:
			H = H / norm
		return hamiltonian_case(H, random_unit_vector(N, rng))
