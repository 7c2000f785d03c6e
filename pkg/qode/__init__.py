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

"""Classical toolkit for query-count bounds of quantum linear ODE solvers."""

from qode import macros

__version__ = macros.version
