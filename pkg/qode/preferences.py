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

import configparser
import logging
import os

from qode import macros

logger = logging.getLogger(__name__)

targets = ("history", "solution")
schemes = ("auto", "multiplicative", "additive")
amplification_modes = ("repeat", "grover")


class qode_preferences:
	def __init__(self):

		#Setting Default Values
		self.epsilon = 1e-10;self.omega = 1.0;self.ancillas = 0;
		self.target = "history";self.scheme = "auto";
		self.amplification = "repeat";self.jobs = 1;
		self.grid_points = macros.envelope_grid_points;
		self.exact_truncation = False;

	# FUNCTION TO Read PREFERENCES #
	def set_from_file(self,filename):
		config = configparser.ConfigParser()
		try:
			found = config.read(filename)
		except configparser.Error as error:
			logger.warning("Unreadable preferences %s: %s", filename, error)
			found = []
		if found != []:
			try:
				self.epsilon = config.getfloat('cfg',"epsilon")
				self.omega = config.getfloat('cfg',"omega")
				self.ancillas = config.getint('cfg',"ancillas")
				self.target = self._choice(config.get('cfg',"target"),targets)
				self.scheme = self._choice(config.get('cfg',"scheme"),schemes)
				self.amplification = self._choice(config.get('cfg',"amplification"),amplification_modes)
				self.jobs = max(1,config.getint('cfg',"jobs"))
				self.grid_points = config.getint('cfg',"grid_points")
				self.exact_truncation = config.getboolean('cfg',"exact_truncation")
			except (configparser.Error, ValueError) as error:
				logger.warning("Malformed preferences %s (%s), using defaults", filename, error)
				self.__init__()
		else:
			self.__init__()

	@staticmethod
	def _choice(value,allowed):
		if value not in allowed:
			raise ValueError("{} is not one of {}".format(value,", ".join(allowed)))
		return value

	def save_to_file(self,filename):
		directory = os.path.dirname(filename)
		if directory:
			os.makedirs(directory,exist_ok=True)
		config = configparser.ConfigParser()
		config.add_section('cfg')
		config.set('cfg',"epsilon",repr(self.epsilon))
		config.set('cfg',"omega",repr(self.omega))
		config.set('cfg',"ancillas",str(self.ancillas))
		config.set('cfg',"target",self.target)
		config.set('cfg',"scheme",self.scheme)
		config.set('cfg',"amplification",self.amplification)
		config.set('cfg',"jobs",str(self.jobs))
		config.set('cfg',"grid_points",str(self.grid_points))
		config.set('cfg',"exact_truncation",str(self.exact_truncation))
		with open(filename,'w') as configfile:
			config.write(configfile)

	def as_dict(self):
		return {"epsilon":self.epsilon,"omega":self.omega,"ancillas":self.ancillas,
			"target":self.target,"scheme":self.scheme,
			"amplification":self.amplification,"jobs":self.jobs,
			"grid_points":self.grid_points,"exact_truncation":self.exact_truncation}


def load(filename=None):
	preferences = qode_preferences()
	preferences.set_from_file(filename or macros.preferences_file_path)
	return preferences


if __name__ == "__main__":
	print(load().as_dict())
