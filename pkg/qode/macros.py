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

import math
import os

from scipy import special

version = "1.0"

app_name = "Query-count bounds for quantum linear ODE solvers"

app_name_abbreviated = "qode"

config_dir = os.path.join(os.path.expanduser("~"), ".qode")

preferences_file_path = os.path.join(config_dir, "preferences.cfg")

log_env_var = "QODE_LOG"

default_log_level = "WARNING"


# Modified Bessel function value that bounds Σ_j 1/j!²
i0_2 = float(special.i0(2.0))

k_inhomogeneous = (3.0 - math.e) ** 2

k_homogeneous = 1.0


# Stability classification and envelopes
stability_threshold = -1e-12

envelope_margin = 1.01

envelope_grid_points = 64

default_check_horizon = 10.0

lyapunov_kappa_warning = 1e12

lyapunov_residual_tolerance = 1e-8

certificate_slack = 1e-8


# Dense/iterative linear algebra
dense_svd_limit = 5000

embedding_size_guard = 10 ** 6

power_iteration_limit = 10 ** 4

power_iteration_tolerance = 1e-13

power_iteration_block = 6

singular_ratio = 1e-14

# e^{μt} above this exponent overflows a double
expm_exponent_limit = 700.0

step_norm_slack = 1e-12


# Truncation
exact_search_limit = 500

direct_sum_limit = 10 ** 4


# QLSA cost model
qlsa_success_constant = 0.39

qlsa_count_slope = 0.204

qlsa_floor_slope = 0.201

qlsa_max_error = 0.2

qlsa_min_kappa = math.sqrt(12.0)

qubit_overhead = 13

round_slack = 1e-9


# Scenario guards
carleman_size_guard = 10 ** 4

hermitian_tolerance = 1e-12


# Command line exit codes
exit_ok = 0

exit_failed_checks = 1

exit_validation = 2

exit_computation = 3

csv_columns = ["axis_value", "scheme", "k", "p", "omega_tilde", "kappa_L",
	"pr_lower", "eps_L", "q_qlsa", "rounds", "Q", "Q_per_T"]
