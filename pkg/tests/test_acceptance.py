import math

import numpy as np
import pytest

from qode import bounds, discretization, pipeline
from qode.discretization import ADDITIVE, MULTIPLICATIVE, TimeGrid
from qode.scenarios import negative_lognorm_family
from qode.scenarios.hamiltonian import ScenarioHamiltonian
from qode.scenarios.negative_lognorm import random_unit_vector
from qode.system import OdeSystem

HORIZONS = (1e6, 1e10, 1e15)
# measured counts run up to 11% over the quoted 6133 T ln T and 7260 √T ln T envelopes
ENVELOPE_EXCESS = 1.12


def _q(T, mu):
	return pipeline.estimate(pipeline.negative_lognorm_request(T, 1.0, mu, 1e-10)).Q


@pytest.mark.parametrize("T", HORIZONS)
def test_marginal_envelope_excess_is_bounded(T):
	ratio = _q(T, 0.0) / (6133 * T * math.log(T))
	assert 1.0 < ratio < ENVELOPE_EXCESS


@pytest.mark.parametrize("T", HORIZONS)
def test_stable_envelope_excess_is_bounded(T):
	ratio = _q(T, -1.0) / (7260 * math.sqrt(T) * math.log(T))
	assert 0.5 < ratio < ENVELOPE_EXCESS


@pytest.mark.parametrize("M", [10 ** 6, 10 ** 8])
def test_stable_bound_prefactor(M):
	inp = bounds.BoundInputs(k=19, M=M, h=1.0, eps_td=0.0, kappa_P=1.0, mu_P=-1.0)
	prefactor = bounds.kappa_bound_stable(inp, 0) / (math.sqrt(M) * (math.sqrt(20) + 2))
	assert prefactor == pytest.approx(9.8, rel=0.03)


def test_closed_form_identity_grid():
	for T in np.geomspace(1e4, 1e15, 5):
		for mu in (0.0, -0.1, -0.3, -1.0):
			assert _q(T, mu) == pytest.approx(pipeline.closed_form_negative_lognorm(T, 1.0, mu, 1e-10), rel=1e-12)


def _random_case(seed):
	rng = np.random.default_rng(1000 + seed)
	N = int(rng.integers(1, 4))
	M = int(rng.integers(5, 21))
	epsilon = float(rng.choice([1e-2, 1e-3, 1e-5]))
	target = "history" if seed % 2 == 0 else "solution"
	kind = ("stable", "hamiltonian", "forced")[seed % 3]
	if kind == "hamiltonian":
		system = ScenarioHamiltonian({"N": N, "seed": seed}).build()
	else:
		system = negative_lognorm_family(N, float(rng.uniform(-0.5, -0.01)), seed=seed)
		if kind == "forced":
			b = 0.5 * random_unit_vector(N, rng)
			system = OdeSystem(system.A, b, system.x0, "forced")
	return system, TimeGrid(min(1.0, system.max_step()), M), epsilon, target


@pytest.mark.parametrize("seed", range(100))
def test_bounds_hold_on_materialized_embeddings(seed):
	system, grid, epsilon, target = _random_case(seed)
	result = pipeline.verify(system, grid, epsilon, target=target)
	flags = result.flags
	assert flags["kappa"], (result.kappa_numeric, result.kappa_analytic)
	assert flags["norm_L"]
	assert result.norm_L <= math.sqrt(result.k + 1) + 2 + 1e-12
	assert flags["success_probability"], (result.pr_exact, result.pr_lower)
	if target == "history":
		assert result.pr_exact >= (219 / 500 if system.homogeneous else 29 / 500)


@pytest.mark.parametrize("seed", range(30))
def test_discretization_lemmas(seed):
	rng = np.random.default_rng(500 + seed)
	N = int(rng.integers(1, 4))
	grid = TimeGrid(1.0, int(rng.integers(5, 21)))
	system = negative_lognorm_family(N, float(rng.uniform(-0.8, 0.0)), seed=seed)
	plan = discretization.select_truncation(MULTIPLICATIVE, grid.M, grid.T, 0.0, None, 1e-6)
	for row in discretization.truncation_error_report(system.A, None, system.x0, grid, plan)[1:]:
		assert row["rel_err"] <= plan.eps_td
		assert row["power_norm"] <= row["power_bound"] * (1 + 1e-12)

	forced = OdeSystem(system.A, 0.5 * random_unit_vector(N, rng), system.x0)
	norms = discretization.solution_norms(forced, grid)
	plan = discretization.select_truncation(ADDITIVE, grid.M, grid.T, forced.b_norm, norms, 1e-6)
	rows = discretization.truncation_error_report(forced.A, forced.b, forced.x0, grid, plan, c=norms.x_max,
		norms=norms)
	assert max(row["abs_err"] for row in rows) <= plan.eps_td
