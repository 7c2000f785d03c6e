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

from qode.exceptions import QodeArgument
from qode.scenarios.scenario_base import ScenarioBase
from qode.scenarios.negative_lognorm import ScenarioNegativeLognorm, negative_lognorm_family
from qode.scenarios.hamiltonian import ScenarioHamiltonian, hamiltonian_case
from qode.scenarios.damped_oscillators import ScenarioDampedOscillators, damped_oscillators
from qode.scenarios.carleman import ScenarioCarleman, carleman_quadratic


def get_available_scenarios():
	list = []
	# Fixed order, __subclasses__() is not
	for scenario_name in ["negative-lognorm", "hamiltonian", "damped-oscillators", "carleman"]:
		for item in ScenarioBase.__subclasses__():
			if (item.name == scenario_name and item.is_available()):
				list.append(item)
	return list


def get_scenario(name):
	for item in get_available_scenarios():
		if item.name == name:
			return item
	raise QodeArgument("unknown scenario %r" % (name,), field="scenario")
