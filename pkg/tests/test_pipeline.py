import math

import numpy as np
import pytest

from qode import pipeline
from qode.discretization import ADDITIVE, MULTIPLICATIVE, SolutionNormBounds, TimeGrid
from qode.exceptions import QodeArgument, QodeGuard, QodeMissingNorm
from qode.scenarios import negative_lognorm_family
from qode.scenarios.hamiltonian import ScenarioHamiltonian
from qode.stability import StabilityProfile


def _q(T, mu, epsilon=1e-10):
	return pipeline.estimate(pipeline.negative_lognorm_request(T, 1.0, mu, epsilon)).Q


@pytest.mark.parametrize("T", [1e3, 1e6, 1e10, 1e15])
@pytest.mark.parametrize("mu", [0.0, -0.25, -1.0])
def test_pipeline_matches_closed_form(T, mu):
	assert _q(T, mu) == pytest.approx(pipeline.closed_form_negative_lognorm(T, 1.0, mu, 1e-10), rel=1e-12)


def test_calibration_ratio():
	assert _q(1e10, 0.0) / _q(1e10, -1.0) == pytest.approx(90480, rel=0.02)


def test_monotone_in_mu():
	values = [pipeline.closed_form_negative_lognorm(1e8, 1.0, mu, 1e-10) for mu in (0.0, -0.25, -0.5, -1.0)]
	assert values == sorted(values, reverse=True)


def test_closed_form_rejects_positive_mu():
	with pytest.raises(QodeArgument):
		pipeline.closed_form_negative_lognorm(1e6, 1.0, 0.1, 1e-10)


def test_request_validation():
	grid = TimeGrid(1.0, 10)
	profile = StabilityProfile.stable(1.0, -1.0)
	with pytest.raises(QodeArgument):
		pipeline.EstimateRequest(profile, grid, 1.5)
	with pytest.raises(QodeArgument) as error:
		pipeline.EstimateRequest(profile, grid, 1e-3, omega=0.5)
	assert error.value.field == "omega"
	assert pipeline.EstimateRequest(profile, grid, 1e-3, scheme="mult").scheme == MULTIPLICATIVE


def test_both_schemes_and_minimum():
	norms = SolutionNormBounds(x_min=0.5, x_max=2.0, x_rms=1.0, x_final=1.0, b_norm=0.1, gbar_times=1.0,
		gbar_plus=1.0, lambda_prob=1000.0)
	req = pipeline.EstimateRequest(StabilityProfile.stable(1.0, -0.5), TimeGrid(1.0, 1000), 1e-6, norms)
	report = pipeline.estimate(req)
	assert {r.scheme for r in report.records} == {MULTIPLICATIVE, ADDITIVE}
	assert all(r.skipped is None for r in report.records)
	assert report.Q == min(r.Q for r in report.records)
	chosen = report.record()
	assert report.Q == chosen.rounds * chosen.q_qlsa
	assert report.state_prep_queries == 4 * report.Q


def test_missing_norms_skip_branch():
	req = pipeline.negative_lognorm_request(1e6, 1.0, -1.0, 1e-10)
	auto = pipeline.estimate(pipeline.EstimateRequest(req.profile, req.grid, req.epsilon, omega=1.0))
	assert auto.chosen == MULTIPLICATIVE
	assert auto.record(ADDITIVE).skipped
	with pytest.raises(QodeMissingNorm):
		pipeline.estimate(pipeline.EstimateRequest(req.profile, req.grid, req.epsilon, omega=1.0, scheme="add"))


def test_solution_target_idling():
	norms = SolutionNormBounds(gbar_times=1.0)
	stable = pipeline.EstimateRequest(StabilityProfile.stable(1.0, -1.0), TimeGrid(1.0, 10 ** 4), 1e-6, norms,
		target="solution", scheme="mult")
	record = pipeline.estimate(stable).record()
	block = record.k + 1
	assert record.p == math.ceil(100 / block) * block
	marginal = pipeline.EstimateRequest(StabilityProfile.marginal(1.0), TimeGrid(1.0, 10 ** 4), 1e-6, norms,
		target="solution", scheme="mult")
	record = pipeline.estimate(marginal).record()
	assert record.p == math.ceil(10 ** 4 / (record.k + 1)) * (record.k + 1)


def test_estimate_is_deterministic():
	req = pipeline.negative_lognorm_request(1e9, 1.0, -0.5, 1e-8)
	assert pipeline.estimate(req).as_dict() == pipeline.estimate(req).as_dict()


def test_sweep_single_value_equals_estimate():
	template = pipeline.negative_lognorm_request(1e6, 1.0, -1.0, 1e-10)
	[row] = pipeline.sweep(template, "T", [1e8])
	direct = pipeline.estimate(pipeline.negative_lognorm_request(1e8, 1.0, -1.0, 1e-10))
	assert row.as_dict() == direct.as_dict()


def test_sweep_validation():
	template = pipeline.negative_lognorm_request(1e6, 1.0, -1.0, 1e-10)
	with pytest.raises(QodeArgument):
		pipeline.sweep(template, "T", [])
	with pytest.raises(QodeArgument):
		pipeline.sweep(template, "T", [1e8, 1e7])
	with pytest.raises(QodeArgument):
		pipeline.sweep(template, "omega", [1.0])
	with pytest.raises(QodeArgument):
		pipeline.sweep(template, "mu", [0.5])


def test_mu_sweep_brackets():
	template = pipeline.negative_lognorm_request(1e10, 1.0, -1.0, 1e-10)
	reports = pipeline.sweep(template, "mu", [-1.0, -0.5, -0.25, 0.0])
	Q = [r.Q for r in reports]
	assert Q == sorted(Q)
	assert reports[-1].profile["classification"] == "marginal-or-unstable"


def test_cost_per_time_decreases_for_stable_systems():
	template = pipeline.negative_lognorm_request(1e6, 1.0, -1.0, 1e-10)
	values = np.geomspace(1e6, 1e15, 6)
	reports = pipeline.sweep(template, "T", values, jobs=2)
	per_time = [r.Q / v for r, v in zip(reports, values)]
	assert all(a > b for a, b in zip(per_time, per_time[1:]))


def test_fast_forwarding_exponents():
	values = np.geomspace(1e8, 1e15, 8)
	stable = pipeline.fast_forwarding_fit(pipeline.negative_lognorm_request(1e8, 1.0, -1.0, 1e-10), values)
	assert 0.49 <= stable.slope <= 0.55
	hamiltonian = pipeline.fast_forwarding_fit(pipeline.negative_lognorm_request(1e8, 1.0, 0.0, 1e-10), values)
	assert 0.98 <= hamiltonian.slope <= 1.08


@pytest.mark.parametrize("target", ["history", "solution"])
def test_verify_stable_system(decaying_system, target):
	result = pipeline.verify(decaying_system, TimeGrid(1.0, 30), 1e-3, target=target)
	assert result.passed, result.flags
	assert result.norm_L <= math.sqrt(result.k + 1) + 2
	assert result.as_dict()["passed"] is True


def test_verify_hamiltonian_uses_envelope_branch():
	system = ScenarioHamiltonian({"N": 2, "seed": 5}).build()
	result = pipeline.verify(system, TimeGrid(1.0, 20), 1e-3)
	assert result.estimate.profile["classification"] == "marginal-or-unstable"
	assert "C_max" in result.estimate.profile
	assert result.passed, result.flags


def test_verify_forced_system_additive(forced_scalar):
	result = pipeline.verify(forced_scalar, TimeGrid(1.0, 15), 1e-3, scheme="add")
	assert result.scheme == ADDITIVE
	assert result.passed, result.flags


def test_verify_guard():
	system = negative_lognorm_family(2, -0.5, seed=1)
	with pytest.raises(QodeGuard):
		pipeline.verify(system, TimeGrid(1.0, 10 ** 6), 1e-3)


def test_request_from_system_fills_norms(decaying_system):
	req = pipeline.request_from_system(decaying_system, TimeGrid(1.0, 10), 1e-3, target="solution")
	assert req.profile.is_stable
	assert req.norms.x_final == pytest.approx(math.exp(-0.5), rel=1e-9)
	assert req.norms.gbar_times >= 1.0
	assert req.omega == 1.0
	assert pipeline.estimate(req).Q > 0
