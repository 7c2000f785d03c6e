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

"""Stability classification of a generator A.

A stable A (α(A) < 0) gets a certificate P ≻ 0 with κ_P = ‖P‖‖P⁻¹‖ and the
P-log-norm μ_P < 0, so that ‖e^{At}‖ ≤ √κ_P e^{μ_P t}. Anything else gets the
sampled envelope C_max ≥ sup ‖e^{At}‖ over [0, T].
"""

import dataclasses
import logging
import math
import warnings
from typing import Optional

import numpy as np
import scipy.linalg

from qode import macros
from qode import numerics
from qode.exceptions import QodeArgument, QodeConvergence, QodeWarning

logger = logging.getLogger(__name__)

STABLE = "stable"
MARGINAL = "marginal-or-unstable"

provenances = ("auto-lyapunov", "auto-lognorm", "auto-diagonalization", "auto-envelope", "manual")


@dataclasses.dataclass(frozen=True)
class StabilityProfile:
	classification: str
	alpha: float = float("nan")
	mu_euclid: float = float("nan")
	kappa_P: Optional[float] = None
	mu_P: Optional[float] = None
	C_max: Optional[float] = None
	P: Optional[np.ndarray] = dataclasses.field(default=None, repr=False, compare=False)
	provenance: str = "manual"

	def __post_init__(self):
		if self.classification == STABLE:
			if self.kappa_P is None or self.mu_P is None:
				raise QodeArgument("a stable profile needs kappa_P and mu_P", field="kappa_P")
			if self.kappa_P < 1 - 1e-9:
				raise QodeArgument("kappa_P must be at least 1", field="kappa_P")
			if self.mu_P > 0:
				raise QodeArgument("mu_P must not be positive for a stable profile", field="mu_P")
		elif self.classification == MARGINAL:
			if self.C_max is None or self.C_max < 1 - 1e-9:
				raise QodeArgument("a marginal-or-unstable profile needs C_max ≥ 1", field="C_max")
		else:
			raise QodeArgument("unknown classification %r" % (self.classification,), field="classification")
		if self.provenance not in provenances:
			raise QodeArgument("unknown provenance %r" % (self.provenance,), field="provenance")

	@property
	def is_stable(self):
		return self.classification == STABLE

	def envelope(self, t):
		"""The transient bound this profile certifies at time t."""
		if self.is_stable:
			return math.sqrt(self.kappa_P) * math.exp(self.mu_P * t)
		return self.C_max

	@classmethod
	def stable(cls, kappa_P, mu_P):
		return cls(STABLE, kappa_P=float(kappa_P), mu_P=float(mu_P))

	@classmethod
	def marginal(cls, C_max):
		return cls(MARGINAL, C_max=float(C_max))

	def as_dict(self):
		out = {"classification": self.classification, "provenance": self.provenance}
		for name in ("alpha", "mu_euclid", "kappa_P", "mu_P", "C_max"):
			value = getattr(self, name)
			if value is not None and not (isinstance(value, float) and math.isnan(value)):
				out[name] = value
		return out


def spectral_abscissa(A):
	A = numerics.as_square(A, "A")
	try:
		eigenvalues = scipy.linalg.eigvals(A)
	except np.linalg.LinAlgError as error:
		raise QodeConvergence("eigensolver failed: %s" % error)
	return float(np.max(eigenvalues.real))


def euclidean_log_norm(A):
	A = numerics.as_square(A, "A")
	return float(np.linalg.eigvalsh(numerics.hermitian_part(A))[-1])


def _weighted(P):
	w, U = np.linalg.eigh(numerics.hermitian_part(P))
	if w[0] <= 0:
		return None
	root = (U * np.sqrt(w)) @ U.conj().T
	inverse_root = (U / np.sqrt(w)) @ U.conj().T
	return w, root, inverse_root


def p_log_norm(A, P):
	"""(κ_P, μ_P) of the certificate P, or None when P is not positive definite."""
	weighted = _weighted(P)
	if weighted is None:
		return None
	w, root, inverse_root = weighted
	B = root @ A @ inverse_root
	mu_P = float(np.linalg.eigvalsh(numerics.hermitian_part(B))[-1])
	return float(w[-1] / w[0]), mu_P


def c_max_envelope(A, T, grid_points=None):
	"""Heuristic C_max: the sampled maximum of ‖e^{At}‖ on [0, T] inflated by 1%.

	This is an envelope from a grid, not a certified bound.
	"""
	if T <= 0:
		raise QodeArgument("T must be positive", field="T")
	grid_points = grid_points or macros.envelope_grid_points
	if grid_points < 2:
		raise QodeArgument("grid_points must be at least 2", field="grid_points")
	A = numerics.as_square(A, "A")
	peak = max(numerics.operator_norm(numerics.expm(A, t)) for t in np.linspace(0.0, T, grid_points))
	return macros.envelope_margin * max(peak, 1.0)


def envelope_slack(A, kappa_P, mu_P, T, grid_points=None):
	"""sup over the grid of √κ_P e^{μ_P t}/‖e^{At}‖ (1 is tight, larger is looser)."""
	grid_points = grid_points or macros.envelope_grid_points
	worst = 0.0
	for t in np.linspace(0.0, T, grid_points):
		actual = numerics.operator_norm(numerics.expm(A, t))
		worst = max(worst, math.sqrt(kappa_P) * math.exp(mu_P * t) / actual)
	return worst


def lognorm_certificate(A):
	"""P = I, valid whenever μ(A) < 0."""
	mu = euclidean_log_norm(A)
	if mu >= macros.stability_threshold:
		return None
	return np.eye(A.shape[0], dtype=complex), "auto-lognorm"


def lyapunov_certificate(A, Q=None):
	"""P solving P A + A† P = −Q (Q = I by default) via Bartels-Stewart.

	Falls back to the vectorized Kronecker solve when the Schur route leaves a
	residual above tolerance.
	"""
	N = A.shape[0]
	Q = np.eye(N, dtype=complex) if Q is None else numerics.as_square(Q, "Q")
	try:
		P = scipy.linalg.solve_continuous_lyapunov(A.conj().T, -Q)
	except (np.linalg.LinAlgError, ValueError) as error:
		logger.info("Bartels-Stewart solve failed (%s)", error)
		P = None
	if P is None or lyapunov_residual(A, P, Q) > macros.lyapunov_residual_tolerance * np.linalg.norm(Q, 2):
		P = _kronecker_lyapunov(A, Q)
		if P is None:
			return None
	P = numerics.hermitian_part(P)
	if _weighted(P) is None:
		return None
	return P, "auto-lyapunov"


def _kronecker_lyapunov(A, Q):
	# vec(P A + A† P) = (Aᵀ ⊗ I + I ⊗ A†) vec(P), column-major vec
	N = A.shape[0]
	I = np.eye(N)
	K = np.kron(A.T, I) + np.kron(I, A.conj().T)
	try:
		p = scipy.linalg.solve(K, -Q.reshape(-1, order='F'))
	except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning):
		return None
	return p.reshape((N, N), order='F')


def lyapunov_residual(A, P, Q=None):
	Q = np.eye(A.shape[0]) if Q is None else Q
	return float(np.linalg.norm(P @ A + A.conj().T @ P + Q, 2))


def diagonalization_certificate(A, max_condition=1e8):
	"""P = W†W with W = V⁻¹ from A = V Λ V⁻¹, so κ_P = κ_V² and μ_P = α(A)."""
	try:
		_, V = scipy.linalg.eig(A)
	except np.linalg.LinAlgError:
		return None
	if np.linalg.cond(V) > max_condition:
		return None
	W = np.linalg.inv(V)
	return W.conj().T @ W, "auto-diagonalization"


def lyapunov_profile(A, mode="auto", T=None, grid_points=None):
	"""Classify A and return the tightest certificate found.

	mode "auto" tries P = I (when μ(A) < 0), the diagonalization route and the
	Lyapunov route with Q = I, keeping the one whose envelope √κ_P e^{μ_P t}
	sits closest to ‖e^{At}‖ on the check grid. mode "Q_identity" only uses the
	Lyapunov route.
	"""
	A = numerics.as_square(A, "A")
	if mode not in ("auto", "Q_identity"):
		raise QodeArgument("mode must be 'auto' or 'Q_identity'", field="mode")
	alpha = spectral_abscissa(A)
	mu = euclidean_log_norm(A)
	if alpha >= macros.stability_threshold:
		horizon = T if T is not None else macros.default_check_horizon
		C_max = c_max_envelope(A, horizon, grid_points)
		logger.info("A is marginal or unstable (α = %g), C_max = %g on [0, %g]", alpha, C_max, horizon)
		return StabilityProfile(MARGINAL, alpha=alpha, mu_euclid=mu, C_max=C_max, provenance="auto-envelope")

	if mode == "auto":
		routes = (lognorm_certificate, diagonalization_certificate, lyapunov_certificate)
	else:
		routes = (lyapunov_certificate,)
	horizon = 10.0 / abs(alpha)
	if T is not None:
		horizon = min(T, horizon)
	best = None
	for route in routes:
		found = route(A)
		if found is None:
			continue
		P, provenance = found
		measured = p_log_norm(A, P)
		if measured is None or measured[1] >= 0:
			continue
		kappa_P, mu_P = measured
		slack = envelope_slack(A, kappa_P, mu_P, horizon, grid_points)
		logger.debug("%s certificate: κ_P = %g, μ_P = %g, slack %g", provenance, kappa_P, mu_P, slack)
		if best is None or slack < best[0]:
			best = (slack, StabilityProfile(STABLE, alpha=alpha, mu_euclid=mu, kappa_P=kappa_P,
				mu_P=mu_P, P=P, provenance=provenance))
	if best is None:
		raise QodeConvergence("no stability certificate found although α(A) = %g < 0" % alpha)
	profile = best[1]
	if profile.kappa_P > macros.lyapunov_kappa_warning:
		warnings.warn("certificate is ill-conditioned (κ_P = %g)" % profile.kappa_P, QodeWarning)
	logger.info("stable profile via %s: κ_P = %g, μ_P = %g", profile.provenance, profile.kappa_P, profile.mu_P)
	return profile


def check_transient_bound(A, profile, T, grid_points=None):
	"""Largest ratio ‖e^{At}‖ / envelope(t) over the grid; at most 1 + 1e-8 for a valid profile."""
	A = numerics.as_square(A, "A")
	grid_points = grid_points or macros.envelope_grid_points
	worst = 0.0
	for t in np.linspace(0.0, T, grid_points):
		worst = max(worst, numerics.operator_norm(numerics.expm(A, t)) / profile.envelope(t))
	return worst


if __name__ == "__main__":
	print(lyapunov_profile(np.diag([-1.0, -2.0])))
