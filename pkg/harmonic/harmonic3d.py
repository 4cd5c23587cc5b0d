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

"""Spacetime harmonic functions on warped bands of dimension 3.

For u = u(t) the perturbed equation Lap u + (tr k - 3p/2)|grad u| = 0
reduces to u'' + H u' + q |u'| = 0 with q = tr k - 3p/2. On the monotone
branch u' > 0 it is linear in u' and solved by quadrature.

The Hessian term is evaluated as T = Hess u + k~ |grad u| with
k~ = k - p g / 2, whose trace is the harmonic equation itself. The
printed integrand carries the opposite sign of k; printed_sign=True
evaluates that variant instead.
"""

import functools
import logging

import numpy as np
from scipy import integrate

import models
from errors import ConsistencyError, DimensionError, NormalizationError
from geometry import warped_geometry
from helpers import grid_helpers

DEFAULT_GRID_N = 4001
ROUTE_TOL = 1e-6

HESSIAN_SIGN_NOTE = (
    "The Hessian integrand is printed as Hess u - k|grad u|; it is evaluated"
    " as Hess u + k~|grad u| with k~ = k - p g / 2, whose trace is the"
    " harmonic equation."
)


@functools.cache
def _note_hessian_sign() -> None:
  logging.warning(HESSIAN_SIGN_NOTE)


def reduce_ode(
    band: models.WarpedBandSpec, k: models.ExtrinsicSpec, p
) -> models.ReducedCoefficients:
  """Coefficients H and q = tr k - 3p/2 of the reduced equation."""
  if band.n != 3:
    raise DimensionError(
        f"The spacetime harmonic reduction needs n = 3, got n={band.n}."
    )
  p_fn, dp_fn = warped_geometry.as_profile(p, band, k)

  def mean_curvature(t):
    return warped_geometry.mean_curvature(band, t)

  def q(t):
    return k.trace(t, band.n) - 1.5 * np.asarray(p_fn(t), dtype=float)

  return models.ReducedCoefficients(
      band=band, k=k, p=p_fn, dp=dp_fn, H=mean_curvature, q=q
  )


def solve_reduced(
    coeffs: models.ReducedCoefficients, grid_n: int = DEFAULT_GRID_N
) -> models.HarmonicSolution:
  """Monotone solution with u(t0) = -1 and u(t1) = 1.

  u' = C exp(-int (H + q)) with C fixed by u(t1) - u(t0) = 2.
  """
  band = coeffs.band
  t = grid_helpers.uniform_grid(band.t0, band.t1, grid_n)
  h = t[1] - t[0]
  rate = coeffs.H(t) + coeffs.q(t)
  exponent = integrate.cumulative_simpson(rate, x=t, initial=0.0)
  shape = np.exp(-(exponent - grid_helpers.pairwise_min(exponent)))
  area = integrate.cumulative_simpson(shape, x=t, initial=0.0)
  total = area[-1]
  if not np.isfinite(total) or total <= 0:
    raise NormalizationError(
        f"Cannot normalize u: integral of the slope profile is {total!r}."
    )
  scale = 2.0 / total
  u = -1.0 + scale * area
  u[0], u[-1] = -1.0, 1.0
  du = scale * shape
  d2u = grid_helpers.grid_derivative(du, h)
  residual_values = d2u + coeffs.H(t) * du + coeffs.q(t) * np.abs(du)
  residual = grid_helpers.pairwise_max(np.abs(residual_values))
  monotone = bool(np.all(du > 0))
  logging.debug("Reduced harmonic residual %.3g", residual)
  return models.HarmonicSolution(
      u=models.GridField1D.from_grid(t, u, "u"),
      du=models.GridField1D.from_grid(t, du, "du"),
      d2u=models.GridField1D.from_grid(t, d2u, "d2u"),
      monotone=monotone,
      residual=residual,
  )


def perturbed_densities(mu, j_t, trk, p, dp) -> tuple[np.ndarray, np.ndarray]:
  """mu~ = mu + (3p^2/2 - 2 p tr k)/2 and J~ = J + grad p."""
  p = np.asarray(p, dtype=float)
  return mu + 0.5 * (1.5 * p**2 - 2 * p * trk), j_t + dp


def energy_chain(mu, j_t, trk, p, dp) -> np.ndarray:
  """mu - |J| + (3p^2/2 - 2 p tr k - 2|grad p|)/2, a lower bound of
  mu~ + J~(nu)."""
  p = np.asarray(p, dtype=float)
  return np.asarray(mu - np.abs(j_t), dtype=float) + 0.5 * (
      1.5 * p**2 - 2 * p * trk - 2 * np.abs(dp)
  )


def hessian_tensor(
    u: models.HarmonicSolution,
    coeffs: models.ReducedCoefficients,
    printed_sign: bool = False,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
  """(T_tt, T_tan, |T|) on the solution grid in an orthonormal frame.

  T_tt = u'' + k~(d_t, d_t) u' and T_tan = (H/2 + k~_tan) u' on each of
  the two leaf directions.
  """
  t = u.u.t
  a, b, _, _ = coeffs.k.components(t, 3)
  half_p = 0.5 * np.asarray(coeffs.p(t), dtype=float)
  sign = -1.0 if printed_sign else 1.0
  du, d2u = u.du.values, u.d2u.values
  t_tt = d2u + sign * (a - half_p) * du
  t_tan = (0.5 * coeffs.H(t) + sign * (b - half_p)) * du
  return t_tt, t_tan, np.sqrt(t_tt**2 + 2 * t_tan**2)


def _boundary_terms(u, coeffs, area):
  """Route (a), the raw flux, and route (b), the closed form."""
  band, k = coeffs.band, coeffs.k
  ends = np.array([band.t0, band.t1])
  a, _, _, _ = k.components(ends, 3)
  p_ends = np.asarray(coeffs.p(ends), dtype=float)
  du = np.array([u.du.values[0], u.du.values[-1]])
  d2u = np.array([u.d2u.values[0], u.d2u.values[-1]])
  flux = (d2u + (a - 0.5 * p_ends) * du) * area
  raw = (-flux[0], flux[1])
  theta = warped_geometry.null_expansion(band, k, ends)
  closed = (
      (theta[0] - p_ends[0]) * du[0] * area[0],
      -(theta[1] - p_ends[1]) * du[1] * area[1],
  )
  return raw, closed


def verify_integral_inequality(
    band: models.WarpedBandSpec,
    k: models.ExtrinsicSpec,
    sigma: float,
    p,
    u: models.HarmonicSolution | None = None,
    printed_sign: bool = False,
    grid_n: int = DEFAULT_GRID_N,
    tol: float = 1e-9,
) -> models.InequalityReport:
  """Both sides of the integral inequality for u.

  Leaf integrals carry the leaf area f^2 of the unit-volume torus; the
  flat leaves have K = 0, so the Gauss term vanishes. bulk_bound
  integrates the energy_chain lower bound of mu~ + J~(nu); contradiction
  is flagged when both closed boundary terms are below -tol while
  bulk_bound >= -tol.

  Args:
    band: a 3-dimensional band.
    k: second fundamental form.
    sigma: energy bound, used to flag whether mu - |J| >= sigma / 2.
    p: prescribed expansion profile.
    u: solution from solve_reduced; solved here when omitted.
    printed_sign: evaluate the Hessian term with the printed sign.
    grid_n: grid size when u is solved here.
    tol: tolerance of the hypothesis flags.
  Returns:
    The InequalityReport.
  """
  coeffs = reduce_ode(band, k, p)
  if u is None:
    u = solve_reduced(coeffs, grid_n)
  if printed_sign:
    logging.info("Evaluating the Hessian term with the printed sign.")
  else:
    _note_hessian_sign()
  t = u.u.t
  area_t = np.asarray(band.warp.f(t), dtype=float) ** 2
  raw, closed = _boundary_terms(u, coeffs, area_t[[0, -1]])
  route_gap = max(abs(raw[0] - closed[0]), abs(raw[1] - closed[1]))
  if route_gap > ROUTE_TOL:
    raise ConsistencyError(
        f"Boundary flux routes disagree by {route_gap:.3g}; check the sign"
        " conventions."
    )

  du = u.du.values
  _, _, norm_t = hessian_tensor(u, coeffs, printed_sign)
  mu, j_t = warped_geometry.constraint_fields(band, k, t)
  trk = k.trace(t, 3)
  mu_tilde, j_tilde = perturbed_densities(
      mu, j_t, trk, coeffs.p(t), coeffs.dp(t)
  )
  weight = du * area_t
  bulk_hessian = integrate.simpson(0.5 * norm_t**2 / du**2 * weight, x=t)
  bulk_linear = integrate.simpson(0.5 * norm_t**2 / du * weight, x=t)
  bulk_energy = integrate.simpson((mu_tilde + j_tilde) * weight, x=t)
  chain = energy_chain(mu, j_t, trk, coeffs.p(t), coeffs.dp(t))
  bulk_bound = integrate.simpson(chain * weight, x=t)
  gauss_term = 0.0
  boundary_total = raw[0] + raw[1]
  bulk_total = bulk_hessian + bulk_energy - gauss_term

  hypotheses_hold = bool(
      grid_helpers.pairwise_min(mu - np.abs(j_t) - 0.5 * sigma) >= -tol
      and grid_helpers.pairwise_min(mu_tilde + j_tilde) >= -tol
      and closed[0] <= tol
      and closed[1] <= tol
  )
  # Strict expansion bounds force the boundary side below zero while the
  # energy chain keeps the bulk side above zero.
  contradiction = bool(
      closed[0] < -tol
      and closed[1] < -tol
      and bulk_bound >= -tol
  )
  if contradiction:
    logging.warning(
        "Boundary side %.6g < 0 against the energy chain bound %.6g >= 0.",
        closed[0] + closed[1],
        bulk_bound,
    )
  report = models.InequalityReport(
      boundary_minus=float(raw[0]),
      boundary_plus=float(raw[1]),
      boundary_minus_closed=float(closed[0]),
      boundary_plus_closed=float(closed[1]),
      bulk_hessian=float(bulk_hessian),
      bulk_hessian_linear=float(bulk_linear),
      bulk_energy=float(bulk_energy),
      gauss_term=gauss_term,
      slack=float(boundary_total - bulk_total),
      route_gap=float(route_gap),
      printed_sign=printed_sign,
      bulk_bound=float(bulk_bound),
      hypotheses_hold=hypotheses_hold,
      contradiction=contradiction,
  )
  logging.info(
      "Integral inequality: boundary %.6g, bulk %.6g, slack %.3g",
      boundary_total,
      bulk_total,
      report.slack,
  )
  return report


def harmonic_frame(
    u: models.HarmonicSolution,
    coeffs: models.ReducedCoefficients,
    printed_sign: bool = False,
):
  """(t, u, u', |T|) table of a solution."""
  frame = u.to_frame()[["t", "u", "du"]]
  frame["normT"] = hessian_tensor(u, coeffs, printed_sign)[2]
  return frame
