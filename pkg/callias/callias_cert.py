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

"""Scalar content of the Callias operator estimate on warped bands.

With the potential psi~ = eta o phi (and psi = -n/(2(n-1)) psi~) the
spectral estimate needs

    mu - |J| + (n/(n-1) psi~^2 - 2 psi~ tr k - 2|d psi~|) / 2 - 2|R^E| > 0

in the bulk, theta(t1) > psi~(t1) and theta(t0) < psi~(t0) on the
boundary, and a potential that is a nonzero constant near each boundary.
Nonvanishing of the index is an input assumption and never computed.
"""

import logging

import numpy as np

import models
from errors import AdmissibilityError, ConfigError, ConsistencyError
from geometry import warped_geometry
from helpers import grid_helpers
from width_services import width_checker

INDEX_ASSUMPTION = (
    "index of the Callias operator is nonzero (boundary Dirac index assumed,"
    " not computed)"
)
NON_CONSTANT_REASON = "non-constant near boundary"


def classify_callias(
    margins: list[float], admissible: bool, tol: float
) -> models.Verdict:
  """Verdict of a Callias certificate.

  All margins above tol on an admissible potential close the inequality
  chain; margins within tol mark a marginal (tight) certificate.
  """
  if any(not margin >= -tol for margin in margins):
    return models.Verdict.HYPOTHESIS_VIOLATED
  if admissible and all(margin > tol for margin in margins):
    return models.Verdict.CONTRADICTION_CERTIFIED
  if all(abs(margin) <= tol for margin in margins):
    return models.Verdict.TIGHT
  return models.Verdict.CONSISTENT


def build_callias_input(
    band: models.WarpedBandSpec,
    eta: models.EtaSolution,
    t_minus: float,
    t_plus: float,
    eps: float = 0.0,
    plateau: float = 0.0,
    re_bound: float = 0.0,
    variant: models.PotentialVariant = models.PotentialVariant.STRICT,
    grid_n: int = width_checker.DEFAULT_GRID_N,
) -> models.CalliasInput:
  """Potential psi~ = eta o phi with plateaus and its admissibility.

  On a plateau 2 psi + tr k = -n/(n-1) eta(phi) + lambda, which has to be
  a nonzero constant.

  Args:
    band: the band.
    eta: closed-form eta (its lambda is the constant tr k).
    t_minus: t-.
    t_plus: t+.
    eps: enlargement of [t-, t+].
    plateau: width of the constant regions near both boundaries.
    re_bound: sup norm bound of the bundle curvature term, >= 0.
    variant: strict (contradiction setup) or rigid (saturation runs).
    grid_n: grid nodes; cell midpoints are added.
  Returns:
    The CalliasInput.
  """
  if not re_bound >= 0:
    raise ConfigError(f"re_bound must be >= 0, got {re_bound}.")
  potential = width_checker.width_checker.build_potential(
      band, eta, t_minus, t_plus, eps=eps, variant=variant, plateau=plateau
  )
  grid = grid_helpers.grid_with_midpoints(band.t0, band.t1, grid_n)
  n = band.n
  psi_tilde = potential.p(grid)
  psi = -n / (2 * (n - 1)) * psi_tilde
  if not np.allclose(-2 * (n - 1) / n * psi, psi_tilde, rtol=1e-15, atol=1e-15):
    raise ConsistencyError("psi~ = -2(n-1)/n psi does not hold.")

  lam = eta.params.lam
  constants = None
  if variant == models.PotentialVariant.RIGID or plateau <= 0:
    admissible, reason = False, NON_CONSTANT_REASON
  else:
    lo, hi = t_minus - eps, t_plus + eps
    constants = tuple(
        float(-n / (n - 1) * eta.value(end) + lam) for end in (lo, hi)
    )
    floor = 1e-12 * max(1.0, abs(lam))
    for side, end, constant in zip(("minus", "plus"), (lo, hi), constants):
      if abs(constant) <= floor:
        raise AdmissibilityError(
            f"2 psi + tr k vanishes on the {side} plateau (phi={end:.12g})."
        )
    on_plateau = (grid <= band.t0 + plateau) | (grid >= band.t1 - plateau)
    plateau_values = -n / (n - 1) * psi_tilde[on_plateau] + lam
    lower = plateau_values[grid[on_plateau] <= band.t0 + plateau]
    upper = plateau_values[grid[on_plateau] >= band.t1 - plateau]
    for values, constant in ((lower, constants[0]), (upper, constants[1])):
      if values.size and np.max(np.abs(values - constant)) > 1e-12 * max(
          1.0, abs(constant)
      ):
        raise ConsistencyError("2 psi + tr k is not constant on a plateau.")
    admissible, reason = True, "constant nonzero near boundary"

  logging.info(
      "Callias potential (%s, plateau %s): admissible=%s",
      variant.value,
      plateau,
      admissible,
  )
  return models.CalliasInput(
      psi_tilde=models.GridField1D.from_grid(grid, psi_tilde, "psi_tilde"),
      psi=models.GridField1D.from_grid(grid, psi, "psi"),
      dpsi_tilde_bound=models.GridField1D.from_grid(
          grid, potential.grad_bound(grid), "dpsi_tilde_bound"
      ),
      re_bound=float(re_bound),
      potential=potential,
      admissible=admissible,
      reason=reason,
      plateau_constants=constants,
  )


def evaluate_certificate(
    band: models.WarpedBandSpec,
    k: models.ExtrinsicSpec,
    callias_input: models.CalliasInput,
    sigma: float,
    tol: float = width_checker.DEFAULT_TOL,
) -> models.CalliasCertificate:
  """Bulk and boundary margins of the Callias estimate.

  The bulk bracket is checked pointwise against the modified dominant
  energy margin of the width checker and against mu - |J| - sigma/2 plus
  half its lemma chain, both evaluated from the potential itself.
  """
  potential = callias_input.potential
  grid = callias_input.psi_tilde.t
  n = band.n
  lam, trk = width_checker.width_checker.resolve_lambda(
      band, k, grid, models.CheckMode.CMC, potential.eta.params.lam
  )
  mu, j_t = warped_geometry.constraint_fields(band, k, grid)
  psi_tilde = callias_input.psi_tilde.values
  dpsi_bound = callias_input.dpsi_tilde_bound.values
  re_term = 2 * callias_input.re_bound

  bracket = (
      mu
      - np.abs(j_t)
      + 0.5 * (n / (n - 1) * psi_tilde**2 - 2 * psi_tilde * trk
               - 2 * dpsi_bound)
      - re_term
  )
  shared = width_checker.modified_dec_field(
      mu - np.abs(j_t), potential.p(grid), potential.grad_bound(grid), trk, n
  )
  chain = width_checker.width_checker.lemma_chain_field(
      potential, n, sigma, lam, grid
  )
  split = (
      mu - np.abs(j_t) - 0.5 * sigma + 0.5 * chain
      - potential.p(grid) * (trk - lam)
  )
  scale = max(1.0, np.max(np.abs(bracket)), np.max(np.abs(chain)))
  for name, other in (
      ("modified energy margin", shared - re_term),
      ("energy margin plus lemma chain", split - re_term),
  ):
    gap = np.max(np.abs(bracket - other))
    if gap > 1e-12 * scale:
      raise ConsistencyError(
          f"Callias bracket and {name} differ by {gap:.3g}."
      )

  theta = warped_geometry.null_expansion(band, k, [band.t0, band.t1])
  margins = {
      "bulk_margin": grid_helpers.pairwise_min(bracket),
      "boundary_margin_plus": float(theta[1] - psi_tilde[-1]),
      "boundary_margin_minus": float(-theta[0] + psi_tilde[0]),
  }
  dpsi = potential.dp(grid)
  defect = (
      0.5 * sigma
      + n / (2 * (n - 1)) * psi_tilde**2
      + dpsi
      - psi_tilde * trk
  )
  verdict = classify_callias(
      list(margins.values()), callias_input.admissible, tol
  )
  log = (
      logging.error
      if verdict == models.Verdict.CONTRADICTION_CERTIFIED
      else logging.info
  )
  log("Callias certificate: %s %s", verdict.value, margins)
  return models.CalliasCertificate(
      **margins,
      admissible=callias_input.admissible,
      admissibility_reason=callias_input.reason,
      riccati_defect=grid_helpers.pairwise_max(np.abs(defect)),
      verdict=verdict,
      tol=tol,
      assumptions=(INDEX_ASSUMPTION,),
  )
