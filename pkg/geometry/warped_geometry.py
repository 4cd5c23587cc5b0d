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

"""Module that evaluates the geometry and constraint quantities of warped
bands dt^2 + f(t)^2 tau with a flat torus cross section.

All quantities depend on t only. The leaf {t} x T^(n-1) has unit normal
d/dt and mean curvature H = (n-1) f'/f, and the scalar curvature is
R = -2(n-1) f''/f - (n-1)(n-2) (f'/f)^2.
"""

import dataclasses
import logging
from collections.abc import Callable

import numpy as np

import models
from errors import ConfigError
from helpers import grid_helpers

# Scalar curvature of the catalog bands in units of n(n-1); the saturating
# sigma of each rigid band equals this constant curvature.
CATALOG_CURVATURE_SIGN = {"cosine": 1, "sinh": -1, "power": 0}

# Value printed for the negative rigid band, kept to report the mismatch.
PRINTED_SINH_SIGMA_FACTOR = -2

SINH_SIGMA_NOTE = (
    "The negative scalar rigid band is stated with sigma = -2n(n-1), but its"
    " Riccati equation and mu = R/2 = -n(n-1)/2 saturate at sigma = -n(n-1);"
    " the verifier uses -n(n-1)."
)


def _warp_values(
    band: models.WarpedBandSpec, t
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
  t = band.check(t)
  return band.warp.f(t), band.warp.df(t), band.warp.d2f(t)


def log_slope(band: models.WarpedBandSpec, t) -> np.ndarray:
  """f'/f."""
  f, df, _ = _warp_values(band, t)
  return df / f


def mean_curvature(band: models.WarpedBandSpec, t) -> np.ndarray:
  """Mean curvature H = (n-1) f'/f of the leaf at t for the normal d/dt."""
  return (band.n - 1) * log_slope(band, t)


def mean_curvature_derivative(band: models.WarpedBandSpec, t) -> np.ndarray:
  """H' = (n-1) (f''/f - (f'/f)^2)."""
  f, df, d2f = _warp_values(band, t)
  return (band.n - 1) * (d2f / f - (df / f) ** 2)


def scalar_curvature(band: models.WarpedBandSpec, t) -> np.ndarray:
  """Scalar curvature of dt^2 + f^2 tau with tau flat."""
  f, df, d2f = _warp_values(band, t)
  n = band.n
  return -2 * (n - 1) * d2f / f - (n - 1) * (n - 2) * (df / f) ** 2


def constraint_fields(
    band: models.WarpedBandSpec, k: models.ExtrinsicSpec, t
) -> tuple[np.ndarray, np.ndarray]:
  """Vectorized (mu, J_t) on an array of t.

  mu = (R - |k|^2 + (tr k)^2) / 2 and J_t = H (a - b) - (n-1) b' for
  k = a dt^2 + b f^2 tau.
  """
  t = band.check(t)
  n = band.n
  a, b, _, db = k.components(t, n)
  trk = a + (n - 1) * b
  norm_sq = a**2 + (n - 1) * b**2
  mu = 0.5 * (scalar_curvature(band, t) - norm_sq + trk**2)
  j_t = mean_curvature(band, t) * (a - b) - (n - 1) * db
  return mu, j_t


def constraint_sample(
    band: models.WarpedBandSpec, k: models.ExtrinsicSpec, t: float
) -> models.ConstraintSample:
  """Energy density mu and current J at a single t."""
  mu, j_t = constraint_fields(band, k, float(t))
  return models.ConstraintSample(
      t=float(t), mu=float(mu), J_t=float(j_t), absJ=float(abs(j_t))
  )


def null_expansion(
    band: models.WarpedBandSpec,
    k: models.ExtrinsicSpec,
    t,
    side: models.Side = models.Side.PLUS,
) -> np.ndarray:
  """Null expansion H + tr_Sigma k of the leaf at t.

  Both boundaries use the normal d/dt, so `side` only labels which
  expansion bound the value is compared with.
  """
  t = band.check(t, f"t ({side.value})")
  _, b, _, _ = k.components(t, band.n)
  return mean_curvature(band, t) + (band.n - 1) * b


def as_profile(
    p,
    band: models.WarpedBandSpec | None = None,
    k: models.ExtrinsicSpec | None = None,
) -> tuple[Callable, Callable]:
  """(p, p') callables for a prescribed expansion.

  p may be a number, a GridField1D (cubic spline through the samples), a
  PotentialBuild, a pair of callables, or "theta" for the expansion of
  the leaves themselves (needs band and k).
  """
  if isinstance(p, str) and p == "theta":
    if band is None or k is None:
      raise ConfigError("p = theta needs the band and k.")
    return expansion_profile(band, k)
  if isinstance(p, (int, float)):
    value = float(p)
    return (
        lambda t: np.full_like(np.asarray(t, dtype=float), value),
        lambda t: np.zeros_like(np.asarray(t, dtype=float)),
    )
  if isinstance(p, models.GridField1D):
    spline = p.interpolant()
    return spline, spline.derivative()
  if isinstance(p, models.PotentialBuild):
    return p.p, p.dp
  if isinstance(p, tuple) and len(p) == 2 and all(callable(x) for x in p):
    return p
  raise ConfigError(
      "p must be a number, a GridField1D, a PotentialBuild or a (p, p')"
      " pair of callables."
  )


def expansion_profile(
    band: models.WarpedBandSpec, k: models.ExtrinsicSpec
) -> tuple[Callable, Callable]:
  """(theta, theta') of the leaves, the p for which every leaf has
  prescribed null expansion."""

  def theta(t):
    return null_expansion(band, k, t)

  def dtheta(t):
    t = band.check(t)
    _, _, _, db = k.components(t, band.n)
    return mean_curvature_derivative(band, t) + (band.n - 1) * db

  return theta, dtheta


def transfer_to_mots(
    k: models.ExtrinsicSpec, p, n: int
) -> models.ExtrinsicSpec:
  """Returns k - p g / (n-1).

  A leaf with null expansion p for k is a MOTS for the returned tensor.

  Args:
    k: the second fundamental form.
    p: the prescribed expansion; a constant, a GridField1D or a pair of
      callables (p, p').
    n: dimension of the band.
  Returns:
    The transferred ExtrinsicSpec.
  """
  if isinstance(p, (int, float)) and p == 0:
    return k
  fn, dfn = as_profile(p)
  scale = 1.0 / (n - 1)
  old_shift, old_dshift = k.shift, k.dshift

  def shift(t):
    value = scale * np.asarray(fn(t), dtype=float)
    return value if old_shift is None else value + old_shift(t)

  def dshift(t):
    value = scale * np.asarray(dfn(t), dtype=float)
    return value if old_dshift is None else value + old_dshift(t)

  return dataclasses.replace(k, shift=shift, dshift=dshift)


def catalog_sigma(band: models.WarpedBandSpec) -> float | None:
  """Saturating sigma = R of a catalog band, None for other warps."""
  sign = CATALOG_CURVATURE_SIGN.get(band.warp.kind)
  if sign is None:
    return None
  return float(sign * band.n * (band.n - 1))


def example_identity_residual(
    band: models.WarpedBandSpec, grid_n: int = 1000, analytic: bool = True
) -> models.GridField1D:
  """Residual of R + n/(n-1) H^2 + 2 H' on a uniform grid.

  For catalog bands R is the catalog constant, so the residual checks the
  warp against its rigid Riccati equation. H' is analytic or taken by
  finite differences of H.
  """
  t = grid_helpers.uniform_grid(band.t0, band.t1, grid_n)
  curvature = catalog_sigma(band)
  if curvature is None:
    curvature = scalar_curvature(band, t)
  h = mean_curvature(band, t)
  if analytic:
    dh = mean_curvature_derivative(band, t)
  else:
    dh = grid_helpers.fd_derivative(
        lambda s: mean_curvature(band, s),
        t,
        grid_helpers.fd_step(band.t0, band.t1),
        band.t0,
        band.t1,
    )
  n = band.n
  residual = curvature + n / (n - 1) * h**2 + 2 * dh
  field = models.GridField1D.from_grid(
      t, residual, "identity_residual", kind=band.warp.kind, analytic=analytic
  )
  logging.debug(
      "Identity residual for %s n=%s: %.3g", band.warp.kind, n, field.max_abs()
  )
  return field


def discrepancy_notes(band: models.WarpedBandSpec) -> list[dict]:
  """Notes on printed constants that disagree with the computed ones."""
  if band.warp.kind != "sinh":
    return []
  n = band.n
  return [{
      "topic": "negative scalar rigid band sigma",
      "printed": PRINTED_SINH_SIGMA_FACTOR * n * (n - 1),
      "used": -n * (n - 1),
      "note": SINH_SIGMA_NOTE,
  }]
