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

import math

import numpy as np

from qode.exceptions import QodeArgument
from qode.scenarios.scenario_base import ScenarioBase
from qode.system import OdeSystem


def random_hermitian(N, rng):
	Z = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
	return (Z + Z.conj().T) / 2


def random_unit_vector(N, rng):
	v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
	return v / np.linalg.norm(v)


def negative_lognorm_family(N, mu, seed=0):
	"""A = μI − iH with ‖H‖ = √(1 − μ²): μ(A) = μ and ‖A‖ = 1 exactly."""
	if int(N) != N or N < 1:
		raise QodeArgument("N must be a positive integer", field="N")
	if not -1 <= mu <= 0:
		raise QodeArgument("mu must lie in [-1, 0]", field="mu")
	rng = np.random.default_rng(seed)
	H = random_hermitian(N, rng)
	scale = math.sqrt(max(0.0, 1 - mu * mu))
	norm = float(np.max(np.abs(np.linalg.eigvalsh(H))))
	H = H * (scale / norm) if norm > 0 and scale > 0 else np.zeros_like(H)
	A = mu * np.eye(N, dtype=complex) - 1j * H
	return OdeSystem(A, None, random_unit_vector(N, rng), "negative-lognorm mu=%g" % mu)


class ScenarioNegativeLognorm(ScenarioBase):
	name = "negative-lognorm"
	description = "homogeneous systems with log-norm mu and unit norm"
	defaults = {"N": 4, "mu": -1.0, "seed": 0}

	@staticmethod
	def is_available():
		return True

	def build(self):
		return negative_lognorm_family(self.params["N"], self.params["mu"], self.params["seed"])
