import numpy as np
import pytest

from qode.discretization import TimeGrid
from qode.scenarios import negative_lognorm_family
from qode.system import OdeSystem


@pytest.fixture
def rng():
	return np.random.default_rng(20240611)


@pytest.fixture
def decaying_system():
	"""Unit-norm homogeneous system with μ(A) = −0.05."""
	return negative_lognorm_family(3, -0.05, seed=7)


@pytest.fixture
def forced_scalar():
	"""dx/dt = −x/2 + 1, x(0) = 1."""
	return OdeSystem(np.array([[-0.5]]), [1.0], [1.0], "forced decay")


@pytest.fixture
def short_grid():
	return TimeGrid(1.0, 20)


@pytest.fixture
def isolated_preferences(tmp_path):
	return str(tmp_path / "preferences.cfg")
