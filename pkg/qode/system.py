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
import json
import math

import numpy as np

from qode import numerics
from qode.exceptions import QodeArgument, QodeDimension


@dataclasses.dataclass
class OdeSystem:
	"""dx/dt = A x + b with x(0) = x0."""
	A: np.ndarray
	b: np.ndarray
	x0: np.ndarray
	label: str = ""

	def __post_init__(self):
		self.A = numerics.as_square(self.A, "A")
		N = self.A.shape[0]
		if self.b is None:
			self.b = np.zeros(N, dtype=complex)
		self.b = numerics.as_vector(self.b, N, "b")
		self.x0 = numerics.as_vector(self.x0, N, "x0")
		if not np.linalg.norm(self.x0) > 0:
			raise QodeArgument("x0 must be nonzero", field="x0")

	@property
	def N(self):
		return self.A.shape[0]

	@property
	def homogeneous(self):
		return not np.any(self.b)

	@property
	def norm_A(self):
		return numerics.operator_norm(self.A)

	@property
	def b_norm(self):
		return float(np.linalg.norm(self.b))

	def max_step(self):
		"""Largest h with ‖A‖h ≤ 1 (infinite for A = 0)."""
		norm = self.norm_A
		return math.inf if norm == 0 else 1.0 / norm

	def as_dict(self):
		return {"dimension": self.N,
			"matrix": [[_pair(z) for z in row] for row in self.A],
			"forcing": None if self.homogeneous else [_pair(z) for z in self.b],
			"initial": [_pair(z) for z in self.x0],
			"label": self.label}

	@classmethod
	def from_dict(cls, data):
		if not isinstance(data, dict):
			raise QodeArgument("system document must be a JSON object", field="system")
		unknown = set(data) - {"dimension", "matrix", "forcing", "initial", "label"}
		if unknown:
			raise QodeArgument("unknown system keys: %s" % ", ".join(sorted(unknown)), field=sorted(unknown)[0])
		for key in ("dimension", "matrix", "initial"):
			if key not in data:
				raise QodeArgument("system document is missing %r" % key, field=key)
		dimension = data["dimension"]
		if not isinstance(dimension, int) or dimension < 1:
			raise QodeArgument("dimension must be a positive integer", field="dimension")
		A = np.array([[_complex(z, "matrix") for z in row] for row in data["matrix"]], dtype=complex)
		if A.shape != (dimension, dimension):
			raise QodeDimension("matrix is %s, expected %dx%d" % (A.shape, dimension, dimension))
		forcing = data.get("forcing")
		b = None if forcing is None else [_complex(z, "forcing") for z in forcing]
		x0 = [_complex(z, "initial") for z in data["initial"]]
		return cls(A, b, x0, str(data.get("label", "")))

	def save(self, filename):
		with open(filename, "w", encoding="utf-8") as f:
			json.dump(self.as_dict(), f, indent=1)
			f.write("\n")

	@classmethod
	def load(cls, filename):
		with open(filename, encoding="utf-8") as f:
			try:
				data = json.load(f)
			except json.JSONDecodeError as error:
				raise QodeArgument("%s is not valid JSON: %s" % (filename, error), field="system")
		return cls.from_dict(data)


def _pair(z):
	return [float(z.real), float(z.imag)]


def _complex(pair, field):
	if isinstance(pair, (int, float)):
		return complex(pair)
	if not isinstance(pair, (list, tuple)) or len(pair) != 2:
		raise QodeArgument("complex entries must be [re, im] pairs", field=field)
	return complex(float(pair[0]), float(pair[1]))


if __name__ == "__main__":
	system = OdeSystem(np.array([[-1.0]]), None, [1.0], "decay")
	print(json.dumps(system.as_dict()))
