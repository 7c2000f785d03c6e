import math

import numpy as np
import numpy.testing as npt
import pytest
import scipy.sparse
import scipy.sparse.linalg

from qode import numerics
from qode.exceptions import QodeDimension, QodeOverflow, QodeSingular


def test_expm_rotation():
	A = np.array([[0.0, 1.0], [-1.0, 0.0]])
	npt.assert_allclose(numerics.expm(A, math.pi), -np.eye(2), atol=1e-12)


def test_expm_zero_time_is_identity():
	npt.assert_array_equal(numerics.expm(np.array([[3.0]]), 0.0), np.eye(1))


def test_expm_overflow_guard():
	with pytest.raises(QodeOverflow):
		numerics.expm(np.array([[1.0]]), 1000.0)


def _taylor_exponential(X, terms=200):
	total = np.eye(X.shape[0], dtype=complex)
	term = np.eye(X.shape[0], dtype=complex)
	for j in range(1, terms):
		term = term @ X / j
		total = total + term
	return total


def test_expm_matches_taylor_series(rng):
	for _ in range(5):
		A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
		A = 2 * A / np.linalg.norm(A, 2)
		t = float(rng.uniform(0.1, 1.0))
		expected = _taylor_exponential(A * t)
		assert np.linalg.norm(numerics.expm(A, t) - expected, 2) <= 1e-12 * np.linalg.norm(expected, 2)


def test_expm_semigroup(rng):
	for _ in range(10):
		A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
		A = A / np.linalg.norm(A, 2)
		s, t = rng.uniform(0.0, 2.0, size=2)
		joint = numerics.expm(A, s + t)
		assert np.linalg.norm(numerics.expm(A, s) @ numerics.expm(A, t) - joint, 2) <= 1e-10 * max(1.0, np.linalg.norm(joint, 2))


def test_propagate_exact_forced_scalar():
	for t in (0.0, 0.3, 2.0):
		x = numerics.propagate_exact(np.array([[-1.0]]), [1.0], [0.0], t)
		assert x[0].real == pytest.approx(1 - math.exp(-t), abs=1e-13)


def test_step_propagator_matches_propagation(rng):
	A = rng.standard_normal((3, 3)) * 0.3
	b = rng.standard_normal(3)
	x0 = rng.standard_normal(3)
	E, f = numerics.step_propagator(A, b, 0.5)
	x = x0
	for _ in range(4):
		x = E @ x + f
	npt.assert_allclose(x, numerics.propagate_exact(A, b, x0, 2.0), rtol=1e-11)


def test_operator_norm_iterative_path():
	d = np.array([3.0, 1.0, 0.5, 0.25, 0.1, 0.05, 0.01, 0.2, 0.3, 0.4])
	op = scipy.sparse.linalg.aslinearoperator(scipy.sparse.diags(d))
	assert numerics.operator_norm(op) == pytest.approx(3.0, rel=1e-10)
	assert numerics.operator_norm(np.diag(d)) == pytest.approx(3.0, rel=1e-14)


def test_operator_norm_is_submultiplicative(rng):
	for _ in range(20):
		X = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
		Y = rng.standard_normal((5, 5))
		assert numerics.operator_norm(X @ Y) <= numerics.operator_norm(X) * numerics.operator_norm(Y) * (1 + 1e-12)
		assert numerics.operator_norm(X) == pytest.approx(np.linalg.norm(X, 2), rel=1e-12)


def test_extreme_singular_values_dense(rng):
	for _ in range(10):
		X = np.eye(6) + 0.4 * (rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
		s = np.linalg.svd(X, compute_uv=False)
		sigma_max, sigma_min = numerics.extreme_singular_values(X)
		assert sigma_max == pytest.approx(s[0], rel=1e-12)
		assert sigma_min == pytest.approx(s[-1], rel=1e-10)
	assert numerics.extreme_singular_values(np.diag([1.0, 0.5, 0.25])) == pytest.approx((1.0, 0.25), rel=1e-14)
	assert numerics.extreme_singular_values(scipy.sparse.diags([2.0, 4.0, 1.0])) == pytest.approx((4.0, 1.0), rel=1e-14)


def test_extreme_singular_values_with_solver(rng):
	M = np.eye(6) + 0.3 * np.triu(rng.standard_normal((6, 6)), 1)
	solve = lambda rhs, adjoint: np.linalg.solve(M.conj().T if adjoint else M, rhs)
	s = np.linalg.svd(M, compute_uv=False)
	sigma_max, sigma_min = numerics.extreme_singular_values(M, solve=solve)
	assert sigma_max == pytest.approx(s[0], rel=1e-10)
	assert sigma_min == pytest.approx(s[-1], rel=1e-8)
	assert numerics.condition_number(M) == pytest.approx(s[0] / s[-1], rel=1e-10)


def test_singular_matrix_rejected():
	with pytest.raises(QodeSingular):
		numerics.extreme_singular_values(np.diag([1.0, 0.0]))


def test_shape_validation():
	with pytest.raises(QodeDimension):
		numerics.as_square(np.ones((2, 3)))
	with pytest.raises(QodeDimension):
		numerics.as_vector([1.0, 2.0], 3)
