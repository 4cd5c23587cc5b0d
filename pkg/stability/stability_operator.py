#!/usr/bin/env python3

###########################################################################
#
#  Copyright 2026 The bandwidth-verifier Authors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#
###########################################################################

"""Stability operator of leaves as hypersurfaces of prescribed null
expansion p.

    L phi = -Lap phi + 2 <W, grad phi>
            + (div W - |W|^2 + Q - (p^2 - 2 p tr k + 2 nu(p)) / 2) phi
    Q = R_Sigma / 2 - mu - J(nu) - |chi|^2 / 2

The operator is sometimes printed with a bare "W" in place of -|W|^2 in
the zeroth order term; -|W|^2 is used here. W vanishes for every warped
band with diagonal k, so no value depends on it.
"""

import functools
import logging

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

import models
from errors import ConfigError, ConsistencyError, ConvergenceError, DomainError
from geometry import warped_geometry

W_TERM_NOTE = (
    "The zeroth order term of the stability operator is printed as"
    " (div W - W + Q); it is evaluated as div W - |W|^2 + Q."
)

MAX_ITERATIONS = 10000
MAX_SITES = 2_000_000
REGROUPING_TOL = 1e-10
# Scalar curvature of the unit-volume flat torus tau.
FLAT_TORUS_SCALAR = 0.0


def level_set_data(
    band: models.WarpedBandSpec, k: models.ExtrinsicSpec, p, t: float
) -> models.LevelSetData:
  """Geometry of the leaf at t with prescribed expansion p.

  chi = h + k on the leaf has the n-1 equal eigenvalues f'/f + b, so its
  trace-free part vanishes. The leaf metric f(t)^2 tau is a flat torus,
  so R_Sigma = 0, and k(d_t, e_i) = 0 for every ExtrinsicSpec, so W and
  div W vanish. All of them are still evaluated from those pieces.

  Args:
    band: the band.
    k: second fundamental form.
    p: prescribed expansion, anything warped_geometry.as_profile accepts.
    t: interior point of the band.
  Returns:
    The LevelSetData.
  """
  t = float(t)
  if not band.t0 < t < band.t1:
    raise DomainError(
        f"Leaf t={t} is not interior to [{band.t0}, {band.t1}]."
    )
  p_fn, dp_fn = warped_geometry.as_profile(p, band, k)
  n = band.n
  a, b, _, _ = k.components(t, n)
  h = float(warped_geometry.mean_curvature(band, t)) / (n - 1)
  chi_eigs = np.full(n - 1, h + float(b))
  chi = float(np.mean(chi_eigs))
  mu, j_t = warped_geometry.constraint_fields(band, k, t)
  chi0_norm_sq = float(np.sum((chi_eigs - chi) ** 2))
  chi_norm_sq = float(np.sum(chi_eigs**2))
  scale = float(band.warp.f(t))
  r_sigma = FLAT_TORUS_SCALAR / scale**2
  # k(d_t, e_i) in an orthonormal leaf frame
  mixed = np.zeros(n - 1)
  return models.LevelSetData(
      t=t,
      scale=scale,
      h=h,
      chi=chi,
      chi0_norm_sq=chi0_norm_sq,
      chi_norm_sq=chi_norm_sq,
      W=float(np.linalg.norm(mixed)),
      div_W=0.0,
      R_sigma=r_sigma,
      mu=float(mu),
      J_nu=float(j_t),
      Q=0.5 * r_sigma - float(mu) - float(j_t) - 0.5 * chi_norm_sq,
      theta=(n - 1) * chi,
      p_val=float(p_fn(t)),
      p_normal_deriv=float(dp_fn(t)),
      trk=float(a + (n - 1) * b),
  )


@functools.cache
def _note_w_term() -> None:
  logging.warning(W_TERM_NOTE)


def stability_zeroth_coeff(
    data: models.LevelSetData, n: int, trk: float | None = None
) -> float:
  """Zeroth order coefficient of L, which is L applied to constants on
  symmetric leaves.

  When theta = p on the leaf the value is compared with the regrouped form
  R_Sigma/2 - |chi0|^2/2 - [mu + J(nu) + (n/(n-1) p^2 - 2 p tr k
  + 2 nu(p))/2] + div W - |W|^2.
  """
  _note_w_term()
  trk = data.trk if trk is None else float(trk)
  p, dp = data.p_val, data.p_normal_deriv
  coeff = (
      data.div_W - data.W**2 + data.Q - 0.5 * (p * p - 2 * p * trk + 2 * dp)
  )
  if abs(data.theta - p) <= 1e-12 * max(1.0, abs(p)):
    decomposition = data.chi_norm_sq - data.chi0_norm_sq - p * p / (n - 1)
    regrouped = (
        0.5 * data.R_sigma
        - 0.5 * data.chi0_norm_sq
        - (data.mu + data.J_nu + 0.5 * (n / (n - 1) * p * p - 2 * p * trk
                                        + 2 * dp))
        + data.div_W
        - data.W**2
    )
    scale = max(1.0, abs(coeff), abs(data.Q))
    if (
        abs(regrouped - coeff) > REGROUPING_TOL * scale
        or abs(decomposition) > REGROUPING_TOL * max(1.0, p * p)
    ):
      raise ConsistencyError(
          f"Stability coefficient {coeff!r} and its regrouping"
          f" {regrouped!r} disagree at t={data.t}."
      )
  else:
    logging.debug(
        "theta != p at t=%s, regrouping check skipped.", data.t
    )
  return float(coeff)


def _periodic_second_difference(size: int, dx: float) -> sparse.csr_matrix:
  main = -2.0 * np.ones(size)
  off = np.ones(size - 1)
  matrix = sparse.diags([off, main, off], [-1, 0, 1], format="lil")
  matrix[0, size - 1] = 1.0
  matrix[size - 1, 0] = 1.0
  return matrix.tocsr() / dx**2


def _periodic_first_difference(size: int, dx: float) -> sparse.csr_matrix:
  off = 0.5 * np.ones(size - 1)
  matrix = sparse.diags([-off, off], [-1, 1], format="lil")
  matrix[0, size - 1] = -0.5
  matrix[size - 1, 0] = 0.5
  return matrix.tocsr() / dx


def _axis_operator(
    one_d: sparse.csr_matrix, axis: int, dims: int, size: int
) -> sparse.csr_matrix:
  eye = sparse.identity(size, format="csr")
  result = None
  for i in range(dims):
    factor = one_d if i == axis else eye
    result = factor if result is None else sparse.kron(result, factor,
                                                        format="csr")
  return result


def discretize_operator(
    data: models.LevelSetData, n: int, lattice_n: int
) -> tuple[sparse.csr_matrix, float]:
  """Periodic finite-difference L on the lattice (Z / lattice_n)^(n-1).

  The torus [0, 1)^(n-1) carries the metric f(t)^2 tau, so the Laplacian
  is scaled by 1/f^2; W points along the first axis.

  Returns:
    The sparse matrix of L and its zeroth order coefficient.
  """
  dims = n - 1
  dx = 1.0 / lattice_n
  second = _periodic_second_difference(lattice_n, dx)
  laplacian = None
  for axis in range(dims):
    term = _axis_operator(second, axis, dims, lattice_n)
    laplacian = term if laplacian is None else laplacian + term
  laplacian = laplacian / data.scale**2
  coeff = stability_zeroth_coeff(data, n)
  sites = lattice_n**dims
  operator = -laplacian + coeff * sparse.identity(sites, format="csr")
  if data.W != 0:
    gradient = _axis_operator(
        _periodic_first_difference(lattice_n, dx), 0, dims, lattice_n
    )
    operator = operator + 2 * data.W / data.scale * gradient
  return operator.tocsr(), coeff


def _start_vector(dims: int, lattice_n: int) -> np.ndarray:
  x = np.arange(lattice_n) / lattice_n
  one_d = 1.0 + 0.5 * np.cos(2 * np.pi * x)
  start = np.ones(1)
  for _ in range(dims):
    start = np.kron(start, one_d)
  return start


def principal_eigenvalue(
    data: models.LevelSetData, n: int, lattice_n: int = 16
) -> models.EigenResult:
  """Principal eigenpair of L by shifted inverse power iteration.

  Args:
    data: leaf data.
    n: dimension of the band; the lattice has n-1 axes.
    lattice_n: sites per axis, at least 8.
  Returns:
    The EigenResult with the eigenfunction normalized to max 1.
  """
  if lattice_n < 8:
    raise ConfigError(f"lattice_n must be at least 8, got {lattice_n}.")
  if not data.scale > 0:
    raise DomainError(f"Leaf scale f(t)={data.scale} is not positive.")
  dims = n - 1
  if lattice_n**dims > MAX_SITES:
    raise ConfigError(
        f"Lattice {lattice_n}^{dims} exceeds {MAX_SITES} sites."
    )
  operator, coeff = discretize_operator(data, n, lattice_n)
  shift = 1.0 + abs(coeff)
  shifted = operator + shift * sparse.identity(operator.shape[0], format="csr")
  symmetric = data.W == 0
  if symmetric:

    def solve(rhs):
      solution, info = sparse_linalg.cg(shifted, rhs, rtol=1e-12, atol=0.0)
      if info != 0:
        raise ConvergenceError(f"Conjugate gradient failed with info={info}.")
      return solution

  else:
    solve = sparse_linalg.factorized(shifted.tocsc())

  vector = _start_vector(dims, lattice_n)
  vector /= np.max(np.abs(vector))
  estimate = np.inf
  for iteration in range(1, MAX_ITERATIONS + 1):
    vector = solve(vector)
    vector /= np.max(np.abs(vector))
    image = operator @ vector
    previous, estimate = estimate, float(vector @ image / (vector @ vector))
    residual = float(
        np.max(np.abs(image - estimate * vector)) / np.max(np.abs(vector))
    )
    if residual <= 1e-9 and abs(estimate - previous) <= 1e-13 * max(
        1.0, abs(estimate)
    ):
      break
  else:
    raise ConvergenceError(
        f"Inverse power iteration did not converge in {MAX_ITERATIONS}"
        f" iterations (residual {residual:.3g})."
    )
  if vector.sum() < 0:
    vector = -vector
  if np.min(vector) <= 0:
    raise ConsistencyError(
        "Principal eigenvector has non-positive entries; check the"
        " discretization."
    )
  logging.info(
      "Principal eigenvalue at t=%s lattice=%s: %.12g after %s iterations",
      data.t,
      lattice_n,
      estimate,
      iteration,
  )
  return models.EigenResult(
      lambda1=estimate,
      eigenfunction=vector.reshape((lattice_n,) * dims),
      lattice_n=lattice_n,
      iterations=iteration,
      residual=residual,
  )
