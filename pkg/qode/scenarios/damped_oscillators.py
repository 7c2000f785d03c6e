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

"""Coupled damped oscillators ÿ = −W y + D ẏ + F as a first-order system.

With W = R R† and x = (ẏ, i R† y) the generator is A = [[D, s·iR], [iR†, 0]]
and b = (F, 0). The sign s is the one that reproduces the second-order
trajectory on a round-trip check.
"""

import dataclasses
import logging
import math
from typing import Callable

import numpy as np

from qode import macros
from qode import numerics
from qode import stability
from qode.exceptions import QodeArgument, QodeConvergence
from qode.scenarios.scenario_base import ScenarioBase
from qode.system import OdeSystem

logger = logging.getLogger(__name__)

round_trip_tolerance = 1e-8


@dataclasses.dataclass(frozen=True)
class OscillatorSystem:
	system: OdeSystem
	sign: int
	mu_A: float
	mu_D: float
	envelope: Callable = dataclasses.field(repr=False)


def factor_psd(W):
	"""R with W = R R†; Cholesky first, eigen square root for semidefinite W."""
	W = numerics.as_square(W, "W")
	scale = max(1.0, float(np.max(np.abs(W))))
	if np.max(np.abs(W - W.conj().T)) > macros.hermitian_tolerance * scale:
		raise QodeArgument("W is not Hermitian", field="W")
	try:
		return np.linalg.cholesky(W)
	except np.linalg.LinAlgError:
		pass
	w, V = np.linalg.eigh(W)
	if w[0] < -macros.hermitian_tolerance * scale:
		raise QodeArgument("W is not positive semidefinite", field="W")
	return V * np.sqrt(np.clip(w, 0, None))


def gronwall_envelope(mu, x0_norm, b_norm):
	"""t ↦ e^{μt}‖x0‖ + (1 − e^{μt})‖b‖/|μ|, and ‖x0‖ + t‖b‖ at μ = 0."""
	if mu > 0:
		raise QodeArgument("mu must not be positive", field="mu")
	if mu == 0:
		return lambda t: x0_norm + t * b_norm
	return lambda t: math.exp(mu * t) * x0_norm - math.expm1(mu * t) * b_norm / abs(mu)


def _assemble(R, D, F, sign):
	n = D.shape[0]
	A = np.zeros((2 * n, 2 * n), dtype=complex)
	A[:n, :n] = D
	A[:n, n:] = sign * 1j * R
	A[n:, :n] = 1j * R.conj().T
	b = np.concatenate([F, np.zeros(n, dtype=complex)])
	return A, b


def _round_trip_residual(A, b, R, W, D, F, y0, ydot0):
	n = D.shape[0]
	second_order = np.zeros((2 * n, 2 * n), dtype=complex)
	second_order[:n, n:] = np.eye(n)
	second_order[n:, :n] = -W
	second_order[n:, n:] = D
	forcing = np.concatenate([np.zeros(n, dtype=complex), F])
	start = np.concatenate([y0, ydot0])
	x0 = np.concatenate([ydot0, 1j * R.conj().T @ y0])
	step = 1.0 / max(1.0, numerics.operator_norm(A))
	worst = 0.0
	for t in (0.25 * step, step, 4 * step):
		reference = numerics.propagate_exact(second_order, forcing, start, t)
		y, ydot = reference[:n], reference[n:]
		expected = np.concatenate([ydot, 1j * R.conj().T @ y])
		got = numerics.propagate_exact(A, b, x0, t)
		worst = max(worst, float(np.linalg.norm(got - expected)) / max(1.0, float(np.linalg.norm(expected))))
	return worst


def damped_oscillators(W, D, F, y0, ydot0, label="damped oscillators"):
	W = numerics.as_square(W, "W")
	n = W.shape[0]
	D = numerics.as_square(D, "D")
	if D.shape[0] != n:
		raise QodeArgument("D must match W", field="D")
	F = np.zeros(n, dtype=complex) if F is None else numerics.as_vector(F, n, "F")
	y0 = numerics.as_vector(y0, n, "y0")
	ydot0 = numerics.as_vector(ydot0, n, "ydot0")
	mu_D = stability.euclidean_log_norm(D)
	if mu_D > 0:
		raise QodeArgument("the damping D must have a nonpositive log-norm", field="D")
	R = factor_psd(W)

	residuals = {}
	for sign in (1, -1):
		A, b = _assemble(R, D, F, sign)
		residuals[sign] = _round_trip_residual(A, b, R, W, D, F, y0, ydot0)
		if residuals[sign] <= round_trip_tolerance:
			break
	else:
		raise QodeConvergence("neither sign reproduces the second-order trajectory (residuals %s)" % residuals)
	logger.info("oscillator block sign %+d passed the round-trip check (residual %.3g)", sign, residuals[sign])

	x0 = np.concatenate([ydot0, 1j * R.conj().T @ y0])
	system = OdeSystem(A, b, x0, label)
	mu_A = stability.euclidean_log_norm(A)
	envelope = gronwall_envelope(min(mu_A, 0.0), float(np.linalg.norm(x0)), system.b_norm)
	return OscillatorSystem(system, sign, mu_A, mu_D, envelope)


def oscillator_chain(N, frequency, coupling, damping):
	"""(W, D) of N oscillators with nearest-neighbour springs and uniform damping."""
	if N < 1:
		raise QodeArgument("N must be positive", field="N")
	if coupling < 0 or damping < 0:
		raise QodeArgument("coupling and damping must be nonnegative", field="coupling")
	W = np.diag(np.full(N, frequency ** 2 + 2 * coupling))
	W -= coupling * (np.eye(N, k=1) + np.eye(N, k=-1))
	W[0, 0] -= coupling
	W[-1, -1] -= coupling
	return W, -damping * np.eye(N)


class ScenarioDampedOscillators(ScenarioBase):
	name = "damped-oscillators"
	description = "chain of coupled damped harmonic oscillators"
	defaults = {"N": 2, "frequency": 1.0, "coupling": 0.25, "damping": 0.1, "force": 0.0, "seed": 0}

	@staticmethod
	def is_available():
		return True

	def build(self):
		p = self.params
		W, D = oscillator_chain(p["N"], p["frequency"], p["coupling"], p["damping"])
		rng = np.random.default_rng(p["seed"])
		y0 = rng.standard_normal(p["N"])
		F = np.full(p["N"], p["force"])
		return damped_oscillators(W, D, F, y0, np.zeros(p["N"])).system
