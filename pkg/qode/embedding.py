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

"""The linear system L y = c whose solution carries the discrete trajectory.

Stage m < M owns blocks (m, 0) … (m, p_m + k); stage M owns (M, 0) … (M, p_M).
Block rows:

    (m, 0)        y = Σ_{j=0}^{k} y^{(m-1, p_{m-1}+j)}     (m ≥ 1)
    (m, r)        y = y^{(m, r-1)}                         1 ≤ r ≤ p_m
    (m, p_m+j)    y = (Ah/j) y^{(m, p_m+j-1)}              1 ≤ j ≤ k

with right-hand side x0 at (0, 0) and h·b at every (m, p_m + 1), m < M.
"""

import dataclasses
import logging
import math

import numpy as np
import scipy.linalg
import scipy.sparse

from qode import discretization
from qode import macros
from qode import numerics
from qode.exceptions import QodeArgument, QodeGuard

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class IdlingPlan:
	p: tuple

	def __post_init__(self):
		if len(self.p) == 0:
			raise QodeArgument("idling plan needs M+1 entries", field="p")
		if any(int(v) != v or v < 0 for v in self.p):
			raise QodeArgument("idling counts must be nonnegative integers", field="p")
		object.__setattr__(self, "p", tuple(int(v) for v in self.p))

	@property
	def M(self):
		return len(self.p) - 1

	@property
	def p_final(self):
		return self.p[-1]

	@property
	def is_history(self):
		return not any(self.p)

	@classmethod
	def history(cls, M):
		return cls((0,) * (M + 1))

	@classmethod
	def solution(cls, M, p):
		return cls((0,) * M + (p,))


@dataclasses.dataclass
class LinearEmbedding:
	A: np.ndarray
	h: float
	k: int
	idling: IdlingPlan
	L: scipy.sparse.csr_matrix
	c: np.ndarray
	offsets: tuple

	@property
	def N(self):
		return self.A.shape[0]

	@property
	def M(self):
		return self.idling.M

	@property
	def block_dim(self):
		return self.offsets[-1] + self.idling.p_final + 1

	@property
	def omega_k(self):
		return math.sqrt(self.k + 1) + 2

	def stage_size(self, m):
		return self.idling.p[m] + (self.k + 1 if m < self.M else 1)

	def index_map(self, m, r):
		if not 0 <= r < self.stage_size(m):
			raise QodeArgument("block (%d, %d) does not exist" % (m, r), field="r")
		return self.offsets[m] + r

	def rescaled(self):
		"""(L/ω_k, c/ω_k), the pair with ‖L̃‖ ≤ 1."""
		return self.L / self.omega_k, self.c / self.omega_k


def _offsets(idling, k):
	offsets = [0]
	for m in range(idling.M):
		offsets.append(offsets[-1] + idling.p[m] + k + 1)
	return tuple(offsets)


def _block_entries(pairs, N):
	# Scalar (row, col) indices of identity blocks at the given block pairs
	pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
	diag = np.arange(N)
	rows = (pairs[:, :1] * N + diag).ravel()
	cols = (pairs[:, 1:] * N + diag).ravel()
	return rows, cols


def build_embedding(system, grid, k, idling):
	"""Assemble the sparse L and c for the given truncation order and idling."""
	if idling.M != grid.M:
		raise QodeArgument("idling plan has %d stages, grid has M = %d" % (idling.M + 1, grid.M), field="p")
	if int(k) != k or k < 0:
		raise QodeArgument("k must be a nonnegative integer", field="k")
	if k == 0 and not system.homogeneous and grid.M > 0:
		raise QodeArgument("k = 0 leaves no block for the forcing term", field="k")
	discretization.check_step(system.A, grid.h)
	N = system.N
	offsets = _offsets(idling, k)
	block_dim = offsets[-1] + idling.p_final + 1
	if block_dim * N > macros.embedding_size_guard:
		raise QodeGuard("embedding has %d rows, above the %d guard" % (block_dim * N, macros.embedding_size_guard),
			field="M")

	minus_identity = []
	taylor_pairs = []
	taylor_scale = []
	for m in range(idling.M + 1):
		o = offsets[m]
		p = idling.p[m]
		if m > 0:
			tail = offsets[m - 1] + idling.p[m - 1]
			minus_identity.extend((o, tail + j) for j in range(k + 1))
		minus_identity.extend((o + r, o + r - 1) for r in range(1, p + 1))
		if m < idling.M:
			for j in range(1, k + 1):
				taylor_pairs.append((o + p + j, o + p + j - 1))
				taylor_scale.append(1.0 / j)

	diag_rows, diag_cols = _block_entries([(i, i) for i in range(block_dim)], N)
	rows = [diag_rows]
	cols = [diag_cols]
	vals = [np.ones(diag_rows.shape[0], dtype=complex)]
	if minus_identity:
		r, c = _block_entries(minus_identity, N)
		rows.append(r)
		cols.append(c)
		vals.append(-np.ones(r.shape[0], dtype=complex))
	if taylor_pairs:
		Ah = system.A * grid.h
		ai, aj = np.nonzero(Ah)
		av = Ah[ai, aj]
		pairs = np.asarray(taylor_pairs, dtype=np.int64)
		scale = np.asarray(taylor_scale)
		rows.append((pairs[:, :1] * N + ai).ravel())
		cols.append((pairs[:, 1:] * N + aj).ravel())
		vals.append((-scale[:, None] * av[None, :]).ravel())
	size = block_dim * N
	L = scipy.sparse.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
		shape=(size, size)).tocsr()

	c = np.zeros((block_dim, N), dtype=complex)
	c[0] = system.x0
	if k >= 1:
		for m in range(idling.M):
			c[offsets[m] + idling.p[m] + 1] = grid.h * system.b
	logger.debug("embedding: %d blocks of size %d, %d nonzeros", block_dim, N, L.nnz)
	return LinearEmbedding(system.A, grid.h, int(k), idling, L, c.reshape(-1), offsets)


def apply_forward(emb, rhs):
	"""L⁻¹ rhs by block forward substitution."""
	N = emb.N
	R = np.asarray(rhs, dtype=complex).reshape(emb.block_dim, N)
	y = np.empty_like(R)
	Ah = emb.A * emb.h
	p = emb.idling.p
	for m in range(emb.M + 1):
		o = emb.offsets[m]
		head = R[o].copy()
		if m > 0:
			tail = emb.offsets[m - 1] + p[m - 1]
			head += y[tail:tail + emb.k + 1].sum(axis=0)
		y[o] = head
		for r in range(1, p[m] + 1):
			y[o + r] = y[o + r - 1] + R[o + r]
		if m < emb.M:
			for j in range(1, emb.k + 1):
				y[o + p[m] + j] = Ah @ y[o + p[m] + j - 1] / j + R[o + p[m] + j]
	return y.reshape(-1)


def apply_adjoint(emb, rhs):
	"""L⁻† rhs by block backward substitution."""
	N = emb.N
	W = np.asarray(rhs, dtype=complex).reshape(emb.block_dim, N)
	z = np.empty_like(W)
	AhH = (emb.A * emb.h).conj().T
	p = emb.idling.p
	for m in range(emb.M, -1, -1):
		o = emb.offsets[m]
		for r in range(emb.stage_size(m) - 1, -1, -1):
			value = W[o + r].copy()
			if r < p[m]:
				value += z[o + r + 1]
			elif r < p[m] + emb.k and m < emb.M:
				value += AhH @ z[o + r + 1] / (r - p[m] + 1)
			if m < emb.M and r >= p[m]:
				value += z[emb.offsets[m + 1]]
			z[o + r] = value
	return z.reshape(-1)


def solve_forward(emb):
	return apply_forward(emb, emb.c)


def residual(emb, y):
	return float(np.linalg.norm(emb.L @ y - emb.c))


def measure_embedding(emb):
	"""Measured ‖L‖ and κ_L; dense SVD when small, iterative with the sweeps otherwise."""
	size = emb.L.shape[0]
	if size <= macros.dense_svd_limit:
		s = scipy.linalg.svdvals(emb.L.toarray())
		sigma_max, sigma_min = float(s[0]), float(s[-1])
		logger.debug("dense SVD of the %dx%d embedding", size, size)
	else:
		solve = lambda rhs, adjoint: apply_adjoint(emb, rhs) if adjoint else apply_forward(emb, rhs)
		sigma_max, sigma_min = numerics.extreme_singular_values(emb.L, solve=solve)
		logger.debug("iterative extreme singular values of the %dx%d embedding", size, size)
	return {"norm_L": sigma_max, "kappa_numeric": sigma_max / sigma_min}


def stage_vectors(y, emb, m):
	o = emb.offsets[m]
	return np.asarray(y).reshape(emb.block_dim, emb.N)[o:o + emb.stage_size(m)]


def data_blocks(y, emb):
	"""The (M+1, N) array of y^{(m,0)}, the discrete trajectory."""
	blocks = np.asarray(y).reshape(emb.block_dim, emb.N)
	return blocks[list(emb.offsets)]


def success_probabilities_exact(y, emb):
	blocks = np.asarray(y).reshape(emb.block_dim, emb.N)
	total = float(np.vdot(y, y).real)
	history = 0.0
	for m in range(emb.M + 1):
		o = emb.offsets[m]
		history += float(np.sum(np.abs(blocks[o:o + emb.idling.p[m] + 1]) ** 2))
	final = float(np.sum(np.abs(blocks[emb.offsets[-1]]) ** 2))
	return {"pr_history": history / total, "pr_solution": (emb.idling.p_final + 1) * final / total}


def dump_coordinates(emb, path):
	"""Write L as 'row col re im' lines with 17 significant digits."""
	coo = emb.L.tocoo()
	order = np.lexsort((coo.col, coo.row))
	with open(path, "w", encoding="utf-8", newline="\n") as f:
		for i in order:
			v = coo.data[i]
			# + 0.0 prints -0.0 as 0
			f.write("%d %d %.17g %.17g\n" % (coo.row[i], coo.col[i], v.real + 0.0, v.imag + 0.0))


if __name__ == "__main__":
	from qode.system import OdeSystem
	system = OdeSystem(np.array([[-0.5]]), None, [1.0], "decay")
	emb = build_embedding(system, discretization.TimeGrid(1.0, 1), 1, IdlingPlan.history(1))
	print(emb.L.toarray().real)
