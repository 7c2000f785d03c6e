import math

import numpy as np
import numpy.testing as npt
import pytest
import scipy.sparse.linalg

from qode import discretization, embedding
from qode.discretization import TimeGrid
from qode.embedding import IdlingPlan
from qode.exceptions import QodeArgument, QodeGuard
from qode.scenarios import negative_lognorm_family
from qode.system import OdeSystem


def _random_system(rng, N=2):
	A = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
	A /= 1.5 * np.linalg.norm(A, 2)
	return OdeSystem(A, rng.standard_normal(N), rng.standard_normal(N) + 1.0)


def test_smallest_embedding_layout():
	a, b, x0 = -0.5, 0.3, 2.0
	system = OdeSystem(np.array([[a]]), [b], [x0])
	emb = embedding.build_embedding(system, TimeGrid(1.0, 1), 1, IdlingPlan.history(1))
	expected = np.array([[1, 0, 0], [-a, 1, 0], [-1, -1, 1]], dtype=complex)
	npt.assert_array_equal(emb.L.toarray(), expected)
	npt.assert_array_equal(emb.c, [x0, b, 0])
	assert emb.block_dim == 3
	assert emb.omega_k == pytest.approx(math.sqrt(2) + 2)


def test_forward_solve_reproduces_trajectory(rng):
	system = _random_system(rng)
	grid = TimeGrid(1.0, 6)
	emb = embedding.build_embedding(system, grid, 4, IdlingPlan.history(grid.M))
	y = embedding.solve_forward(emb)
	assert embedding.residual(emb, y) < 1e-12 * np.linalg.norm(emb.c)
	npt.assert_allclose(y, scipy.sparse.linalg.spsolve(emb.L.tocsc(), emb.c), atol=1e-12)
	npt.assert_allclose(embedding.data_blocks(y, emb),
		discretization.discrete_trajectory(system.A, system.b, system.x0, grid, 4), atol=1e-12)


def test_adjoint_sweep(rng):
	system = _random_system(rng, 3)
	grid = TimeGrid(1.0, 4)
	emb = embedding.build_embedding(system, grid, 3, IdlingPlan.solution(grid.M, 4))
	r = rng.standard_normal(emb.L.shape[0]) + 1j * rng.standard_normal(emb.L.shape[0])
	npt.assert_allclose(emb.L.conj().T @ embedding.apply_adjoint(emb, r), r, atol=1e-11)
	npt.assert_allclose(emb.L @ embedding.apply_forward(emb, r), r, atol=1e-11)


def test_solution_idling_copies_final_state(rng):
	system = _random_system(rng)
	grid = TimeGrid(1.0, 3)
	emb = embedding.build_embedding(system, grid, 2, IdlingPlan.solution(grid.M, 5))
	y = embedding.solve_forward(emb)
	final = embedding.stage_vectors(y, emb, grid.M)
	assert final.shape == (6, 2)
	for block in final:
		npt.assert_allclose(block, final[0], atol=1e-14)


def test_measured_norm_within_bound(decaying_system):
	grid = TimeGrid(1.0, 10)
	emb = embedding.build_embedding(decaying_system, grid, 5, IdlingPlan.history(grid.M))
	measured = embedding.measure_embedding(emb)
	assert 1.0 <= measured["norm_L"] <= emb.omega_k
	assert measured["kappa_numeric"] >= 1.0
	L_tilde, c_tilde = emb.rescaled()
	assert scipy.sparse.linalg.norm(L_tilde - emb.L / emb.omega_k) == 0
	npt.assert_allclose(c_tilde * emb.omega_k, emb.c)


def test_zero_generator_has_full_history_probability():
	system = OdeSystem(np.zeros((2, 2)), None, [1.0, 1.0j])
	grid = TimeGrid(1.0, 5)
	emb = embedding.build_embedding(system, grid, 3, IdlingPlan.history(grid.M))
	y = embedding.solve_forward(emb)
	pr = embedding.success_probabilities_exact(y, emb)
	assert pr["pr_history"] == pytest.approx(1.0, abs=1e-15)


def test_success_probabilities_against_bound():
	system = negative_lognorm_family(2, -0.2, seed=3)
	grid = TimeGrid(1.0, 12)
	emb = embedding.build_embedding(system, grid, 6, IdlingPlan.history(grid.M))
	pr = embedding.success_probabilities_exact(embedding.solve_forward(emb), emb)
	assert pr["pr_history"] >= 219 / 500


def test_size_guard():
	system = OdeSystem(np.array([[-0.5]]), None, [1.0])
	grid = TimeGrid(1.0, 10 ** 6)
	with pytest.raises(QodeGuard):
		embedding.build_embedding(system, grid, 1, IdlingPlan.history(grid.M))


def test_plan_validation():
	with pytest.raises(QodeArgument):
		IdlingPlan((0, -1))
	system = OdeSystem(np.array([[-0.5]]), None, [1.0])
	with pytest.raises(QodeArgument):
		embedding.build_embedding(system, TimeGrid(1.0, 3), 2, IdlingPlan.history(2))
	emb = embedding.build_embedding(system, TimeGrid(1.0, 2), 2, IdlingPlan.history(2))
	assert emb.index_map(1, 2) == 5
	with pytest.raises(QodeArgument):
		emb.index_map(2, 1)


def test_dump_coordinates(tmp_path):
	system = OdeSystem(np.array([[-0.5]]), None, [1.0])
	emb = embedding.build_embedding(system, TimeGrid(1.0, 1), 1, IdlingPlan.history(1))
	path = tmp_path / "L.txt"
	embedding.dump_coordinates(emb, str(path))
	lines = path.read_text(encoding="utf-8").splitlines()
	assert lines[0] == "0 0 1 0"
	assert lines[1] == "1 0 0.5 0"
	assert len(lines) == emb.L.nnz
