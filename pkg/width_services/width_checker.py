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

"""Service that checks the band width estimate on warped bands

For a band with mu - |J| >= sigma / 2 and boundary expansions
theta(t0) <= eta(t-), theta(t1) >= eta(t+) the width is at most t+ - t-.
The checker evaluates every hypothesis margin on a grid, builds the
potential p = eta o phi of the proof and issues a Certificate.
"""

import logging

import numpy as np

import models
from errors import ConfigError, DomainError, GeometryError, ModeError
from geometry import warped_geometry
from helpers import grid_helpers
from riccati import eta_riccati

DEFAULT_TOL = 1e-9
DEFAULT_GRID_N = 2001


def classify_verdict(
    hypothesis_margins: list[float], conclusion: float, tol: float
) -> models.Verdict:
  """Verdict from hypothesis margins and the conclusion margin.

  A hypothesis holds when its margin is >= -tol. The theorem is violated
  when every hypothesis holds and the conclusion exceeds tol.
  """
  if any(not margin >= -tol for margin in hypothesis_margins):
    return models.Verdict.HYPOTHESIS_VIOLATED
  if all(abs(m) <= tol for m in hypothesis_margins) and abs(conclusion) <= tol:
    return models.Verdict.TIGHT
  if conclusion > tol:
    return models.Verdict.THEOREM_VIOLATED
  return models.Verdict.CONSISTENT


def modified_dec_field(
    dominant: np.ndarray,
    p: np.ndarray,
    grad_p: np.ndarray,
    trk,
    n: int,
) -> np.ndarray:
  """mu - |J| + (n/(n-1) p^2 - 2 p tr k - 2|grad p|) / 2."""
  return dominant + 0.5 * (n / (n - 1) * p**2 - 2 * p * trk - 2 * grad_p)


def _check_in_domain(eta: models.EtaSolution, lo: float, hi: float) -> None:
  if not eta.contains([lo, hi]):
    raise DomainError(
        f"[{lo:.12g}, {hi:.12g}] is not inside the eta domain"
        f" ({eta.domain[0]:.12g}, {eta.domain[1]:.12g})."
    )


class WidthChecker:
  """Class that builds width potentials and certificates"""

  def build_potential(
      self,
      band: models.WarpedBandSpec,
      eta: models.EtaSolution,
      t_minus: float,
      t_plus: float,
      eps: float = 0.0,
      variant: models.PotentialVariant = models.PotentialVariant.STRICT,
      plateau: float = 0.0,
      tol: float = DEFAULT_TOL,
  ) -> models.PotentialBuild:
    """Builds phi and p = eta o phi.

    The strict variant maps the band affinely onto [t- - eps, t+ + eps]
    after constant plateaus of width `plateau` at both ends; it exists
    only when width > t+ - t- + 2 eps. The rigid variant is
    phi = t- + (t - t0) and needs width = t+ - t-.

    Args:
      band: the band.
      eta: closed-form eta.
      t_minus: t-.
      t_plus: t+.
      eps: enlargement of [t-, t+] (strict variant).
      variant: strict or rigid.
      plateau: width of the constant regions near both boundaries.
      tol: tolerance of the rigid width equality.
    Returns:
      The PotentialBuild.
    """
    if not t_minus < t_plus:
      raise ConfigError(f"Need t- < t+, got t-={t_minus}, t+={t_plus}.")
    if eps < 0 or plateau < 0:
      raise ConfigError("eps and plateau must be non-negative.")
    width = band.width
    t0, t1 = band.t0, band.t1
    if variant == models.PotentialVariant.RIGID:
      if abs(width - (t_plus - t_minus)) > tol:
        raise GeometryError(
            f"Rigid potential needs width = t+ - t-, got width={width:.12g}"
            f" and t+ - t-={t_plus - t_minus:.12g}."
        )
      _check_in_domain(eta, t_minus, t_plus)
      return models.PotentialBuild(
          variant=variant,
          knots_t=(t0, t1),
          knots_phi=(t_minus, t_plus),
          lip=(t_plus - t_minus) / width,
          plateaus=(0.0, 0.0),
          t_minus=t_minus,
          t_plus=t_plus,
          eps=0.0,
          eta=eta,
      )

    span = t_plus - t_minus + 2 * eps
    ramp = width - 2 * plateau
    if not ramp > span:
      raise GeometryError(
          f"Strict potential needs width - 2*plateau > t+ - t- + 2*eps, got"
          f" {ramp:.12g} <= {span:.12g}."
      )
    lo, hi = t_minus - eps, t_plus + eps
    _check_in_domain(eta, lo, hi)
    if plateau > 0:
      knots_t = (t0, t0 + plateau, t1 - plateau, t1)
      knots_phi = (lo, lo, hi, hi)
    else:
      knots_t, knots_phi = (t0, t1), (lo, hi)
    return models.PotentialBuild(
        variant=variant,
        knots_t=knots_t,
        knots_phi=knots_phi,
        lip=span / ramp,
        plateaus=(plateau, plateau),
        t_minus=t_minus,
        t_plus=t_plus,
        eps=eps,
        eta=eta,
    )

  def distance_potential(
      self,
      band: models.WarpedBandSpec,
      eta: models.EtaSolution,
      t_minus: float,
      t_plus: float,
  ) -> models.PotentialBuild:
    """phi = min(t- + dist(x, boundary-), t+), Lipschitz 1."""
    _check_in_domain(eta, t_minus, t_plus)
    t0, t1 = band.t0, band.t1
    if t_minus + band.width <= t_plus:
      knots_t, knots_phi = (t0, t1), (t_minus, t_minus + band.width)
    else:
      kink = t0 + (t_plus - t_minus)
      knots_t, knots_phi = (t0, kink, t1), (t_minus, t_plus, t_plus)
    return models.PotentialBuild(
        variant=models.PotentialVariant.RIGID,
        knots_t=knots_t,
        knots_phi=knots_phi,
        lip=1.0,
        plateaus=(0.0, 0.0),
        t_minus=t_minus,
        t_plus=t_plus,
        eps=0.0,
        eta=eta,
    )

  def affine_potential(
      self,
      band: models.WarpedBandSpec,
      eta: models.EtaSolution,
      t_minus: float,
      t_plus: float,
  ) -> models.PotentialBuild:
    """phi mapping [t0, t1] affinely onto [t-, t+]; Lip may exceed 1."""
    if not t_minus < t_plus:
      raise ConfigError(f"Need t- < t+, got t-={t_minus}, t+={t_plus}.")
    _check_in_domain(eta, t_minus, t_plus)
    return models.PotentialBuild(
        variant=models.PotentialVariant.AFFINE,
        knots_t=(band.t0, band.t1),
        knots_phi=(t_minus, t_plus),
        lip=(t_plus - t_minus) / band.width,
        plateaus=(0.0, 0.0),
        t_minus=t_minus,
        t_plus=t_plus,
        eps=0.0,
        eta=eta,
    )

  def resolve_lambda(
      self,
      band: models.WarpedBandSpec,
      k: models.ExtrinsicSpec,
      grid: np.ndarray,
      mode: models.CheckMode,
      lam: float | None,
  ) -> tuple[float, np.ndarray]:
    """The lambda (or Lambda) fed to eta, validated against tr k."""
    trk = k.trace(grid, band.n)
    if mode == models.CheckMode.CMC:
      value = float(trk[0]) if lam is None else float(lam)
      spread = grid_helpers.pairwise_max(np.abs(trk - value))
      if spread > 1e-12 * max(1.0, abs(value)):
        raise ConfigError(
            f"cmc mode needs tr k constant = {value:.12g}, deviation"
            f" {spread:.3g}."
        )
      return value, trk
    sup = grid_helpers.pairwise_max(trk)
    value = sup if lam is None else float(lam)
    if sup > value + 1e-12 * max(1.0, abs(value)):
      raise ConfigError(
          f"sup_trace mode needs tr k <= Lambda={value:.12g}, sup is"
          f" {sup:.12g}."
      )
    return value, trk

  def check_theorem(
      self,
      band: models.WarpedBandSpec,
      k: models.ExtrinsicSpec,
      sigma: float,
      t_minus: float,
      t_plus: float,
      grid_n: int = DEFAULT_GRID_N,
      mode: models.CheckMode = models.CheckMode.CMC,
      lam: float | None = None,
      tol: float = DEFAULT_TOL,
      branch: models.Branch = models.Branch.ABOVE,
  ) -> models.Certificate:
    """Evaluates every hypothesis and the conclusion of the width estimate.

    Args:
      band: the band.
      k: second fundamental form.
      sigma: energy bound.
      t_minus: t-.
      t_plus: t+.
      grid_n: grid nodes; cell midpoints are added.
      mode: cmc (tr k = lambda) or sup_trace (tr k <= Lambda).
      lam: lambda or Lambda; taken from k when omitted.
      tol: margin tolerance.
      branch: branch of Rational and Coth eta.
    Returns:
      The Certificate.
    """
    if not t_minus < t_plus:
      raise ConfigError(f"Need t- < t+, got t-={t_minus}, t+={t_plus}.")
    grid = grid_helpers.grid_with_midpoints(band.t0, band.t1, grid_n)
    lam_value, trk = self.resolve_lambda(band, k, grid, mode, lam)
    eta = eta_riccati.eta_closed(
        models.EtaParams(sigma=sigma, lam=lam_value, n=band.n), branch
    )
    _check_in_domain(eta, t_minus, t_plus)
    eta_min = None
    if mode == models.CheckMode.SUP_TRACE:
      eta_min = float(eta.value(t_plus))
      if not eta_min > 0:
        raise ModeError(
            f"sup_trace mode needs eta(t+) > 0, got {eta_min:.12g}."
        )

    n = band.n
    mu, j_t = warped_geometry.constraint_fields(band, k, grid)
    dominant = mu - np.abs(j_t)
    potential = self.distance_potential(band, eta, t_minus, t_plus)
    p = potential.p(grid)
    mod_dec = modified_dec_field(
        dominant, p, potential.grad_bound(grid), lam_value, n
    )
    theta = warped_geometry.null_expansion(band, k, [band.t0, band.t1])
    certificate = models.Certificate(
        dec_margin=grid_helpers.pairwise_min(dominant - 0.5 * sigma),
        mod_dec_margin=grid_helpers.pairwise_min(mod_dec),
        boundary_minus=float(eta.value(t_minus) - theta[0]),
        boundary_plus=float(theta[1] - eta.value(t_plus)),
        conclusion=band.width - (t_plus - t_minus),
        verdict=models.Verdict.CONSISTENT,
        mode=mode,
        tol=tol,
        eta_min=eta_min,
        details={
            "band": band.describe(),
            "k": k.describe(),
            "sigma": sigma,
            "lambda": lam_value,
            "t_minus": t_minus,
            "t_plus": t_plus,
            "grid_n": grid_n,
            "width": band.width,
            "eta": eta.to_dict(),
            "potential": potential.to_dict(),
            "trk_max": grid_helpers.pairwise_max(trk),
        },
    )
    certificate.verdict = classify_verdict(
        list(certificate.margins().values()), certificate.conclusion, tol
    )
    log = (
        logging.error
        if certificate.verdict == models.Verdict.THEOREM_VIOLATED
        else logging.info
    )
    log(
        "Width certificate for %s band n=%s: %s (conclusion %.3g)",
        band.warp.kind,
        n,
        certificate.verdict.value,
        certificate.conclusion,
    )
    return certificate

  def lemma_chain_field(
      self,
      potential: models.PotentialBuild,
      n: int,
      sigma: float,
      lam: float,
      grid: np.ndarray,
  ) -> np.ndarray:
    """n/(n-1) p^2 - 2 p lambda - 2|grad p| + sigma at the grid points."""
    p = potential.p(grid)
    return (
        n / (n - 1) * p**2 - 2 * p * lam - 2 * potential.grad_bound(grid)
        + sigma
    )

  def lemma_chain_margin(
      self,
      potential: models.PotentialBuild,
      band: models.WarpedBandSpec,
      sigma: float,
      lam: float,
      grid_n: int = DEFAULT_GRID_N,
  ) -> float:
    """min of n/(n-1) p^2 - 2 p lambda - 2|grad p| + sigma on the grid.

    Positive for every strict potential since eta' < 0 and Lip(phi) < 1.
    """
    grid = grid_helpers.grid_with_midpoints(band.t0, band.t1, grid_n)
    return grid_helpers.pairwise_min(
        self.lemma_chain_field(potential, band.n, sigma, lam, grid)
    )


width_checker = WidthChecker()
