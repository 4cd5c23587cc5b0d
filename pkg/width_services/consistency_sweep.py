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

"""Randomized exercise of the width estimate on perturbed catalog bands.

Every trial draws a band, an umbilic k, a sigma below the pointwise
minimum of 2(mu - |J|) and a pair t-, t+. No trial whose hypotheses hold
may end with a conclusion above tol.
"""

import functools
import logging
import math

import numpy as np

import models
from errors import ConfigError
from geometry import warped_geometry
from helpers import generic_helpers, grid_helpers
from riccati import eta_riccati
from warps import catalog_warps, warp_registry
from width_services import width_checker

SIGMA_GAP = 1e-6


def _draw_band(rng: np.random.Generator) -> models.WarpedBandSpec:
  n = int(rng.integers(2, 7))
  kind = str(rng.choice(warp_registry.CATALOG_KINDS))
  if kind == "cosine":
    bound = 0.9 * math.pi / n
    t0 = -bound * rng.uniform(0.05, 1.0)
    t1 = bound * rng.uniform(0.05, 1.0)
  else:
    t0 = rng.uniform(0.2, 1.0)
    t1 = t0 + rng.uniform(0.2, 1.5)
  base = warp_registry.warp_factory_service.get_warp(kind, n=n)
  warp = catalog_warps.PerturbedWarp(
      base,
      amplitude=rng.uniform(0.0, 0.2),
      frequency=rng.uniform(0.5, 4.0),
      phase=rng.uniform(0.0, 2 * math.pi),
  )
  return models.WarpedBandSpec(n=n, t0=float(t0), t1=float(t1), warp=warp)


def _bracket(eta: models.EtaSolution) -> tuple[float, float]:
  lo, hi = eta.domain
  if math.isinf(lo):
    lo = hi - 1e6
  if math.isinf(hi):
    hi = lo + 1e6
  shrink = 1e-9 * max(1.0, hi - lo)
  return lo + shrink, hi - shrink


def _place(
    eta: models.EtaSolution, value: float, bracket: tuple[float, float]
) -> float | None:
  try:
    return eta_riccati.eta_inverse(eta, value, *bracket)
  except ConfigError:
    return None


def draw_trial(rng: np.random.Generator, index: int) -> dict:
  """Draws the inputs of one trial; the draw order is fixed."""
  band = _draw_band(rng)
  lam = float(rng.uniform(-2.0, 2.0))
  sigma_slack = float(rng.uniform(0.0, 0.5))
  slack_minus = float(rng.uniform(0.0, 0.3))
  slack_plus = float(rng.uniform(0.0, 0.3))
  random_ends = bool(rng.uniform() < 0.3)
  ends = rng.uniform(0.0, 1.0, size=2)
  return {
      "index": index,
      "band": band,
      "lam": lam,
      "sigma_slack": sigma_slack,
      "slack_minus": slack_minus,
      "slack_plus": slack_plus,
      "random_ends": random_ends,
      "ends": ends,
  }


def run_trial(trial: dict, grid_n: int, tol: float) -> dict:
  """Evaluates one drawn trial."""
  band = trial["band"]
  k = models.ExtrinsicSpec.umbilic(trial["lam"])
  grid = grid_helpers.grid_with_midpoints(band.t0, band.t1, grid_n)
  mu, j_t = warped_geometry.constraint_fields(band, k, grid)
  sigma = (
      grid_helpers.pairwise_min(2 * (mu - np.abs(j_t)))
      - trial["sigma_slack"]
      - SIGMA_GAP
  )
  eta = eta_riccati.eta_closed(
      models.EtaParams(sigma=sigma, lam=trial["lam"], n=band.n)
  )
  bracket = _bracket(eta)
  summary = {
      "index": trial["index"],
      "n": band.n,
      "warp": band.warp.describe(),
      "interval": [band.t0, band.t1],
      "lambda": trial["lam"],
      "sigma": sigma,
      "eta_case": eta.case.value,
  }
  if trial["random_ends"]:
    lo, hi = bracket
    span = min(hi - lo, 4 * band.width)
    t_minus = lo + (hi - lo - span) * trial["ends"][0]
    t_plus = t_minus + span * max(trial["ends"][1], 1e-3)
  else:
    theta = warped_geometry.null_expansion(band, k, [band.t0, band.t1])
    t_minus = _place(eta, theta[0] + trial["slack_minus"], bracket)
    t_plus = _place(eta, theta[1] - trial["slack_plus"], bracket)
  if t_minus is None or t_plus is None or not t_minus < t_plus:
    return {**summary, "verdict": "skipped"}
  try:
    certificate = width_checker.width_checker.check_theorem(
        band, k, sigma, t_minus, t_plus, grid_n=grid_n, tol=tol
    )
  except ConfigError as ex:
    logging.debug("Trial %s skipped: %s", trial["index"], ex)
    return {**summary, "verdict": "skipped"}
  return {
      **summary,
      "t_minus": t_minus,
      "t_plus": t_plus,
      "verdict": certificate.verdict.value,
      "conclusion": certificate.conclusion,
      "margins": certificate.margins(),
  }


def consistency_sweep(
    seed: int,
    trials: int,
    grid_n: int = width_checker.DEFAULT_GRID_N,
    tol: float = width_checker.DEFAULT_TOL,
) -> dict:
  """Runs `trials` seeded random width checks.

  Args:
    seed: seed of the numpy generator, echoed in the report.
    trials: number of trials, at least 1.
    grid_n: grid nodes per check.
    tol: margin tolerance.
  Returns:
    The sweep report with verdict counts and the indices of any
    THEOREM-VIOLATED trial.
  """
  if int(trials) < 1:
    raise ConfigError(f"A sweep needs at least one trial, got {trials}.")
  rng = np.random.default_rng(seed)
  drawn = [draw_trial(rng, i) for i in range(int(trials))]
  tasks = [functools.partial(run_trial, t, grid_n, tol) for t in drawn]
  results = generic_helpers.execute_tasks_in_parallel(tasks)

  counts = {verdict.value: 0 for verdict in models.Verdict}
  del counts[models.Verdict.CONTRADICTION_CERTIFIED.value]
  counts["skipped"] = 0
  for result in results:
    counts[result["verdict"]] += 1
  violations = [
      r["index"]
      for r in results
      if r["verdict"] == models.Verdict.THEOREM_VIOLATED.value
  ]
  if violations:
    logging.error("THEOREM-VIOLATED in sweep trials %s", violations)
  logging.info("Sweep seed=%s trials=%s: %s", seed, trials, counts)
  return {
      "seed": seed,
      "trials": int(trials),
      "grid_n": grid_n,
      "tol": tol,
      "counts": counts,
      "violations": violations,
      "results": results,
  }
