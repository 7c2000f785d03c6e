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

"""Dense complex primitives and the numerical oracles used to check bounds.

Matrices are numpy arrays of dtype complex128. Large operators may also be
given as scipy sparse matrices or LinearOperators; those take the iterative
path in operator_norm and extreme_singular_values.
"""

import logging
import math

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from qode import macros
from qode.exceptions import QodeArgument, QodeConvergence, QodeDimension, \
	QodeOverflow, QodeSingular

logger = logging.getLogger(__name__)


def as_matrix(Mx, name="matrix"):
	Mx = np.asarray(Mx, dtype=complex)
	if Mx.ndim != 2 or Mx.size == 0:
		raise QodeDimension("%s must be a non-empty two-dimensional array" % name)
	if not np.all(np.isfinite(Mx)):
		raise QodeArgument("%s has non-finite entries" % name, field=name)
	return Mx


def as_square(Mx, name="matrix"):
	Mx = as_matrix(Mx, name)
	if Mx.shape[0] != Mx.shape[1]:
		raise QodeDimension("%s must be a square matrix" % name)
	return Mx


def as_vector(v, dim=None, name="vector"):
	v = np.asarray(v, dtype=complex).reshape(-1)
	if not np.all(np.isfinite(v)):
		raise QodeArgument("%s has non-finite entries" % name, field=name)
	if dim is not None and v.shape[0] != dim:
		raise QodeDimension("%s has dimension %d, expected %d" % (name, v.shape[0], dim))
	return v


def hermitian_part(A):
	return (A + A.conj().T) / 2


def expm(A, t=1.0):
	"""e^{At} by scaling and squaring with a Padé core (scipy.linalg.expm).

	Accurate to ~1e-12 relative for ‖At‖ ≤ 50. Raises QodeOverflow when the
	log-norm bound e^{μ(A)t} would leave the double range.
	"""
	A = as_square(A, "A")
	if not math.isfinite(t):
		raise QodeArgument("t must be finite", field="t")
	if t == 0:
		return np.eye(A.shape[0], dtype=complex)
	growth = abs(t) * np.linalg.eigvalsh(hermitian_part(A if t > 0 else -A))[-1]
	if growth > macros.expm_exponent_limit:
		raise QodeOverflow("‖e^{At}‖ may reach e^%.1f, outside the double range" % growth)
	return scipy.linalg.expm(A * t)


def propagate_exact(A, b, x0, t):
	"""x(t) = e^{At} x0 + ∫_0^t e^{As} b ds through the augmented generator [[A, b], [0, 0]]."""
	A = as_square(A, "A")
	N = A.shape[0]
	x0 = as_vector(x0, N, "x0")
	if b is None or not np.any(b):
		return expm(A, t) @ x0
	b = as_vector(b, N, "b")
	augmented = np.zeros((N + 1, N + 1), dtype=complex)
	augmented[:N, :N] = A
	augmented[:N, N] = b
	E = expm(augmented, t)
	return E[:N, :N] @ x0 + E[:N, N]


def step_propagator(A, b, h):
	"""(e^{Ah}, ∫_0^h e^{As} b ds) so that x((m+1)h) = E x(mh) + f."""
	A = as_square(A, "A")
	N = A.shape[0]
	augmented = np.zeros((N + 1, N + 1), dtype=complex)
	augmented[:N, :N] = A
	if b is not None:
		augmented[:N, N] = as_vector(b, N, "b")
	E = expm(augmented, h)
	return E[:N, :N], E[:N, N]


def _as_operator(Mx):
	if isinstance(Mx, scipy.sparse.linalg.LinearOperator):
		return Mx
	return scipy.sparse.linalg.aslinearoperator(Mx)


def _is_dense_feasible(Mx):
	return max(Mx.shape) <= macros.dense_svd_limit and not isinstance(Mx, scipy.sparse.linalg.LinearOperator)


def _dense(Mx):
	if scipy.sparse.issparse(Mx):
		return Mx.toarray().astype(complex)
	return as_matrix(Mx)


def _dominant_eigenvalue(apply, n, limit=None):
	# Block power iteration with Rayleigh-Ritz on a Hermitian positive operator
	limit = limit or macros.power_iteration_limit
	block = min(n, macros.power_iteration_block)
	rng = np.random.default_rng(0)
	Q = rng.standard_normal((n, block)) + 1j * rng.standard_normal((n, block))
	Q, _ = np.linalg.qr(Q)
	previous = None
	for iteration in range(limit):
		Z = np.column_stack([apply(Q[:, i]) for i in range(block)])
		ritz = np.linalg.eigvalsh(hermitian_part(Q.conj().T @ Z))
		value = ritz[-1]
		if previous is not None and abs(value - previous) <= macros.power_iteration_tolerance * abs(value):
			logger.debug("power iteration converged after %d steps", iteration + 1)
			return value
		previous = value
		Q, _ = np.linalg.qr(Z)
	raise QodeConvergence("power iteration did not converge in %d iterations" % limit)


def operator_norm(Mx):
	"""σ_max(Mx): dense SVD up to dimension 5000, power iteration on Mx†Mx above."""
	if _is_dense_feasible(Mx):
		return float(scipy.linalg.svdvals(_dense(Mx))[0])
	op = _as_operator(Mx)
	n = op.shape[1]
	value = _dominant_eigenvalue(lambda v: op.rmatvec(op.matvec(v)), n)
	return float(math.sqrt(max(value.real, 0.0)))


def extreme_singular_values(Mx, solve=None):
	"""(σ_max, σ_min) of a square invertible matrix.

	`solve(rhs, adjoint)` returns Mx⁻¹ rhs (or Mx⁻† rhs); when given, σ_min is
	found by inverse power iteration on (Mx†Mx)⁻¹. Without it the dense SVD is
	used, or a sparse LU factorization when the matrix is too large.
	"""
	if Mx.shape[0] != Mx.shape[1]:
		raise QodeDimension("matrix must be square")
	if solve is None and _is_dense_feasible(Mx):
		s = scipy.linalg.svdvals(_dense(Mx))
		sigma_max, sigma_min = float(s[0]), float(s[-1])
	else:
		if solve is None:
			lu = scipy.sparse.linalg.splu(scipy.sparse.csc_matrix(Mx))
			solve = lambda rhs, adjoint: lu.solve(rhs, trans='H' if adjoint else 'N')
		if _is_dense_feasible(Mx):
			sigma_max = float(scipy.linalg.svdvals(_dense(Mx))[0])
		else:
			sigma_max = operator_norm(Mx)
		n = Mx.shape[0]
		inverse_value = _dominant_eigenvalue(lambda v: solve(solve(v, True), False), n)
		sigma_min = 1.0 / math.sqrt(inverse_value.real) if inverse_value.real > 0 else 0.0
	if sigma_min <= macros.singular_ratio * sigma_max:
		raise QodeSingular("matrix is singular to working precision (σ_min = %g, σ_max = %g)" % (sigma_min, sigma_max))
	return sigma_max, sigma_min


def condition_number(Mx, solve=None):
	sigma_max, sigma_min = extreme_singular_values(Mx, solve)
	return sigma_max / sigma_min


if __name__ == "__main__":
	A = np.array([[0, 1], [-1, 0]])
	print(expm(A, math.pi).real.round(12))
