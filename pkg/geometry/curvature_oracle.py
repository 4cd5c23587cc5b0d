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

"""Independent finite-difference evaluation of curvature and divergence
for warped bands.

Only samples of f (and of the components of k) enter: the metric
diag(1, f^2, ..., f^2) is sampled at t, t +- h, t +- 2h, its Christoffel
symbols are formed from central differences and contracted to the Ricci
tensor. Every result is computed with steps h and h/2 and rejected when
the two disagree.
"""

import numpy as np

import models
from errors import DomainError, StepTooLargeError

ORACLE_RTOL = 1e-5


def _metric(band: models.WarpedBandSpec, t: float) -> np.ndarray:
  f = float(band.warp.f(t))
  return np.diag([1.0] + [f * f] * (band.n - 1))


def _christoffel(g: np.ndarray, dg_t: np.ndarray) -> np.ndarray:
  """Gamma^m_ij for a metric depending on the first coordinate only."""
  n = g.shape[0]
  dg = np.zeros((n, n, n))
  dg[0] = dg_t
  combo = dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg
  return 0.5 * np.einsum("ml,lij->mij", np.linalg.inv(g), combo)


def _christoffel_at(band: models.WarpedBandSpec, t: float, h: float):
  dg_t = (_metric(band, t + h) - _metric(band, t - h)) / (2 * h)
  return _christoffel(_metric(band, t), dg_t)


def _check_stencil(band: models.WarpedBandSpec, t: float, reach: float):
  if not (band.t0 <= t - reach and t + reach <= band.t1):
    raise DomainError(
        f"Oracle stencil [{t - reach}, {t + reach}] leaves the band"
        f" [{band.t0}, {band.t1}]."
    )


def _scalar_curvature_step(
    band: models.WarpedBandSpec, t: float, h: float
) -> float:
  gamma = _christoffel_at(band, t, h)
  dgamma_t = (
      _christoffel_at(band, t + h, h) - _christoffel_at(band, t - h, h)
  ) / (2 * h)
  n = band.n
  dgamma = np.zeros((n, n, n, n))
  dgamma[0] = dgamma_t
  # R_ij = d_m G^m_ij - d_j G^m_im + G^m_mp G^p_ij - G^m_jp G^p_im
  ricci = (
      np.einsum("mmij->ij", dgamma)
      - np.einsum("jmim->ij", dgamma)
      + np.einsum("mmp,pij->ij", gamma, gamma)
      - np.einsum("mjp,pim->ij", gamma, gamma)
  )
  ginv = np.linalg.inv(_metric(band, t))
  return float(np.einsum("ij,ij->", ginv, ricci))


def _richardson(compute, h: float, what: str) -> float:
  coarse = compute(h)
  fine = compute(h / 2)
  scale = max(1.0, abs(fine))
  if abs(coarse - fine) > ORACLE_RTOL * scale:
    raise StepTooLargeError(
        f"{what}: steps {h:g} and {h / 2:g} disagree"
        f" ({coarse!r} vs {fine!r})."
    )
  return coarse


def curvature_oracle(
    band: models.WarpedBandSpec, t: float, h: float = 1e-4
) -> float:
  """Scalar curvature at t from samples of f only.

  Args:
    band: the band.
    t: evaluation point with t +- 2h inside the band.
    h: finite-difference step.
  Returns:
    R(t) at step h.
  """
  t = float(t)
  _check_stencil(band, t, 2 * h)
  return _richardson(
      lambda step: _scalar_curvature_step(band, t, step),
      h,
      f"curvature oracle at t={t}",
  )


def _k_tensor(
    band: models.WarpedBandSpec, k: models.ExtrinsicSpec, t: float
) -> np.ndarray:
  a, b, _, _ = k.components(t, band.n)
  f = float(band.warp.f(t))
  return np.diag([float(a)] + [float(b) * f * f] * (band.n - 1))


def _current_step(
    band: models.WarpedBandSpec, k: models.ExtrinsicSpec, t: float, h: float
) -> float:
  n = band.n
  g = _metric(band, t)
  ginv = np.linalg.inv(g)
  gamma = _christoffel_at(band, t, h)
  k_t = _k_tensor(band, k, t)
  dk = np.zeros((n, n, n))
  dk[0] = (_k_tensor(band, k, t + h) - _k_tensor(band, k, t - h)) / (2 * h)
  # (div k)_j = g^il (d_l k_ij - G^m_li k_mj - G^m_lj k_im)
  div_k = np.einsum("il,lij->j", ginv, dk)
  div_k -= np.einsum("il,mli,mj->j", ginv, gamma, k_t)
  div_k -= np.einsum("il,mlj,im->j", ginv, gamma, k_t)

  def trace(s):
    return float(np.einsum("ij,ij->", np.linalg.inv(_metric(band, s)),
                           _k_tensor(band, k, s)))

  dtrace = (trace(t + h) - trace(t - h)) / (2 * h)
  return float(div_k[0] - dtrace)


def divergence_oracle(
    band: models.WarpedBandSpec,
    k: models.ExtrinsicSpec,
    t: float,
    h: float = 1e-4,
) -> float:
  """J_t = (div k - d tr k)_t at t from samples of f and k only."""
  t = float(t)
  _check_stencil(band, t, 2 * h)
  return _richardson(
      lambda step: _current_step(band, k, t, step),
      h,
      f"divergence oracle at t={t}",
  )
