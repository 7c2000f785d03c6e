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

import abc

from qode.exceptions import QodeArgument


class ScenarioBase(metaclass=abc.ABCMeta):
	"""A family of ODE systems built from a flat parameter dictionary."""
	name = None
	description = ""
	# name -> default; the default's type is used to parse string values
	defaults = {}

	def __init__(self, params=None):
		params = dict(params or {})
		unknown = set(params) - set(self.defaults)
		if unknown:
			raise QodeArgument("%s has no parameter %s" % (self.name, ", ".join(sorted(unknown))),
				field=sorted(unknown)[0])
		self.params = dict(self.defaults)
		for key, value in params.items():
			self.params[key] = self._coerce(key, value)

	def _coerce(self, key, value):
		default = self.defaults[key]
		if not isinstance(value, str):
			return value
		try:
			if isinstance(default, bool):
				if value.lower() not in ("true", "false", "1", "0"):
					raise ValueError(value)
				return value.lower() in ("true", "1")
			if isinstance(default, int):
				return int(value)
			if isinstance(default, float):
				return float(value)
		except ValueError:
			raise QodeArgument("%s is not a valid %s" % (value, type(default).__name__), field=key)
		return value

	@staticmethod
	@abc.abstractmethod
	def is_available():
		return

	@abc.abstractmethod
	def build(self):
		"""Return the OdeSystem for the current parameters."""
		pass

	def describe(self):
		return {"name": self.name, "description": self.description, "parameters": dict(self.params)}
