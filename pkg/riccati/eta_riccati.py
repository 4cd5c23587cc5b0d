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

"""Closed-form and numerical solutions of the Riccati comparison equation

    sigma + n/(n-1) eta^2 - 2 eta lambda + 2 eta' = 0,  eta' < 0.

With m = (n-1) lambda / n, kappa = n / (2(n-1)) and the discriminant
d = sigma - (n-1) lambda^2 / n the solutions are

    Rational (d = 0):  eta = m + 1 / (kappa (t - c))
    Tan      (d > 0):  eta = m - b tan(kappa b (t - c)), b = sqrt((n-1) d / n)
    Coth     (d < 0):  eta = m + a coth(kappa a (t - c)), a = sqrt(-(n-1) d / n)
"""

import logging
import math

import numpy as np
from scipy import optimize

import models
from errors import (
    ConfigError,
    DomainError,
    EtaBlowUpError,
    NotMonotoneError,
    StepTooLargeError,
)
from helpers import grid_helpers

BLOW_UP_LIMIT = 1e12


def eps_classify(params: models.EtaParams) -> float:
  return 1e-12 * max(1.0, abs(params.sigma), params.lam**2)


def classify(params: models.EtaParams) -> models.EtaCase:
  """Case of the closed form from the sign of the discriminant."""
  d = params.discriminant
  eps = eps_classify(params)
  if abs(d) <= eps:
    return models.EtaCase.RATIONAL
  return models.EtaCase.TAN if d > eps else models.EtaCase.COTH


def tan_rate(params: models.EtaParams) -> float:
  """b = sqrt((n-1) d / n) of the Tan case."""
  return math.sqrt((params.n - 1) * params.discriminant / params.n)


def coth_rate(params: models.EtaParams) -> float:
  """a = sqrt((n-1)/n ((n-1)/n lambda^2 - sigma)) of the Coth case."""
  return math.sqrt(-(params.n - 1) * params.discriminant / params.n)


def coth_roots(params: models.EtaParams) -> tuple[float, float]:
  """Roots m -+ a of n/(n-1) x^2 - 2 lambda x + sigma."""
  a = coth_rate(params)
  return params.stationary - a, params.stationary + a


def domain_bounds(
    params: models.EtaParams, branch: models.Branch = models.Branch.ABOVE
) -> models.DomainBounds:
  """Maximal interval on which eta exists and decreases.

  Bounded only in the Tan case, where r+- = c +- (n-1) pi / (n b). In the
  other cases the branch (c, inf) or (-inf, c) is reported.
  """
  case = classify(params)
  c = params.c
  if case == models.EtaCase.TAN:
    half_width = math.pi / (2 * params.kappa * tan_rate(params))
    return models.DomainBounds(c - half_width, c + half_width, True)
  if branch == models.Branch.ABOVE:
    return models.DomainBounds(c, math.inf, False)
  return models.DomainBounds(-math.inf, c, False)


def eta_closed(
    params: models.EtaParams, branch: models.Branch = models.Branch.ABOVE
) -> models.EtaSolution:
  """Closed-form eta of the matching case on its maximal domain."""
  case = classify(params)
  m, kappa, c = params.stationary, params.kappa, params.c
  bounds = domain_bounds(params, branch)

  if case == models.EtaCase.RATIONAL:

    def value(t):
      return m + 1.0 / (kappa * (t - c))

    def derivative(t):
      return -1.0 / (kappa * (t - c) ** 2)

  elif case == models.EtaCase.TAN:
    b = tan_rate(params)

    def value(t):
      return m - b * np.tan(kappa * b * (t - c))

    def derivative(t):
      return -kappa * b**2 / np.cos(kappa * b * (t - c)) ** 2

  else:
    a = coth_rate(params)

    def value(t):
      return m + a / np.tanh(kappa * a * (t - c))

    def derivative(t):
      return -kappa * a**2 / np.sinh(kappa * a * (t - c)) ** 2

  return models.EtaSolution(
      case=case,
      params=params,
      domain=(bounds.r_minus, bounds.r_plus),
      branch=None if case == models.EtaCase.TAN else branch,
      value_fn=value,
      derivative_fn=derivative,
  )


def _rk4_march(
    params: models.EtaParams, eta0: float, t_start: float, h: float, steps: int
) -> tuple[np.ndarray, float | None]:
  """Fixed-step RK4 from (t_start, eta0); h may be negative.

  Returns the values (NaN after an escape) and the estimated escape time.
  """
  values = np.full(steps + 1, np.nan)
  values[0] = eta0
  rhs = params.rhs
  eta = float(eta0)
  for i in range(steps):
    k1 = rhs(eta)
    k2 = rhs(eta + 0.5 * h * k1)
    k3 = rhs(eta + 0.5 * h * k2)
    k4 = rhs(eta + h * k3)
    new = eta + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    # A step that moves against the sign of eta' has crossed a pole.
    wrapped = k1 != 0 and (new - eta) * h * k1 < 0
    if not math.isfinite(new) or abs(new) > BLOW_UP_LIMIT or wrapped:
      t_last = t_start + i * h
      gap = abs(eta - params.stationary)
      reach = 1.0 / (params.kappa * gap) if gap > 0 else abs(h)
      return values, t_last + math.copysign(min(abs(h), reach), h)
    eta = new
    values[i + 1] = eta
  return values, None


def _integrate(
    params: models.EtaParams,
    t_init: float,
    eta_init: float,
    k_lo: int,
    k_hi: int,
    h: float,
) -> tuple[np.ndarray, list[float]]:
  forward, escape_up = _rk4_march(params, eta_init, t_init, h, k_hi)
  backward, escape_down = _rk4_march(params, eta_init, t_init, -h, -k_lo)
  values = np.concatenate([backward[:0:-1], forward])
  escapes = [e for e in (escape_down, escape_up) if e is not None]
  return values, escapes


def eta_solve_numeric(
    params: models.EtaParams,
    t_init: float,
    eta_init: float,
    t_range: tuple[float, float],
    step: float,
    on_blow_up: str = "flag",
) -> models.GridField1D:
  """Integrates eta' = -(sigma + n/(n-1) eta^2 - 2 eta lambda) / 2 by RK4.

  The grid is t_init + k*step covering t_range, integrated outwards from
  t_init in both directions. An escape (|eta| > 1e12) truncates the field
  with NaN and is recorded in meta, or raised when on_blow_up="raise".

  Args:
    params: sigma, lambda, n (c is unused).
    t_init: initial time, inside t_range.
    eta_init: eta(t_init).
    t_range: (lo, hi) interval to cover.
    step: positive step, below |range| / 16.
    on_blow_up: "flag" or "raise".
  Returns:
    GridField1D named "eta" with meta blow_up, last_valid_t, escape_times
    and halving_error (max deviation from the run at step / 2).
  """
  lo, hi = float(t_range[0]), float(t_range[1])
  if not lo < hi:
    raise ConfigError(f"Empty integration range [{lo}, {hi}].")
  if not lo <= t_init <= hi:
    raise DomainError(f"t_init={t_init} lies outside [{lo}, {hi}].")
  if not step > 0:
    raise ConfigError(f"Step must be positive, got {step}.")
  if step >= (hi - lo) / 16:
    raise StepTooLargeError(
        f"Step {step} is too coarse for the range [{lo}, {hi}]."
    )
  if on_blow_up not in ("flag", "raise"):
    raise ConfigError(f"Unknown on_blow_up policy '{on_blow_up}'.")

  k_lo = math.ceil((lo - t_init) / step - 1e-9)
  k_hi = math.floor((hi - t_init) / step + 1e-9)
  values, escapes = _integrate(params, t_init, eta_init, k_lo, k_hi, step)
  fine, _ = _integrate(params, t_init, eta_init, 2 * k_lo, 2 * k_hi, step / 2)
  coarse_of_fine = fine[::2]
  both = np.isfinite(values) & np.isfinite(coarse_of_fine)
  halving_error = (
      grid_helpers.pairwise_max(np.abs(values[both] - coarse_of_fine[both]))
      if both.any()
      else math.nan
  )

  t0 = t_init + k_lo * step
  valid = np.flatnonzero(np.isfinite(values))
  last_valid = [t0 + valid[0] * step, t0 + valid[-1] * step]
  if escapes:
    logging.info("Numeric eta escapes near t=%s", escapes)
    if on_blow_up == "raise":
      raise EtaBlowUpError(
          f"eta escapes to infinity near t={escapes[0]:.12g}.", escapes[0]
      )
  return models.GridField1D(
      t0=t0,
      h=step,
      values=values,
      name="eta",
      meta={
          "params": params.to_dict(),
          "blow_up": bool(escapes),
          "escape_times": escapes,
          "last_valid_t": last_valid,
          "halving_error": halving_error,
          "t_init": t_init,
          "eta_init": eta_init,
      },
  )


def ode_residual(
    eta: models.EtaSolution | models.GridField1D,
    params: models.EtaParams,
    t: np.ndarray | None = None,
    check_monotone: bool = True,
) -> models.GridField1D:
  """Pointwise residual sigma + n/(n-1) eta^2 - 2 eta lambda + 2 eta'.

  Closed forms use their analytic eta' at t (default: 1000 interior points
  of the domain clipped to [-10, 10] around c); grid fields use
  finite differences on their finite samples. Raises NotMonotoneError when
  eta' >= 0 somewhere.
  """
  if isinstance(eta, models.EtaSolution):
    if t is None:
      lo, hi = eta.domain
      lo, hi = max(lo, params.c - 10.0), min(hi, params.c + 10.0)
      t = np.linspace(lo, hi, 1002)[1:-1]
    t = np.asarray(t, dtype=float)
    values, slope = eta.value(t), eta.derivative(t)
  else:
    finite = np.isfinite(eta.values)
    t, values = eta.t[finite], eta.values[finite]
    slope = grid_helpers.grid_derivative(values, eta.h)
  if check_monotone and np.any(slope >= 0):
    bad = float(t[np.argmax(slope >= 0)])
    raise NotMonotoneError(f"eta' >= 0 at t={bad:.12g}.")
  n = params.n
  residual = (
      params.sigma + n / (n - 1) * values**2 - 2 * values * params.lam
      + 2 * slope
  )
  finite = residual[np.isfinite(residual)]
  max_abs = grid_helpers.pairwise_max(np.abs(finite)) if finite.size else 0.0
  return models.GridField1D.from_grid(t, residual, "residual", max_abs=max_abs)


def eta_inverse(
    eta: models.EtaSolution, value: float, lo: float, hi: float
) -> float:
  """The t in [lo, hi] with eta(t) = value.

  eta decreases strictly, so the root is unique when bracketed.
  """
  if not eta.contains([lo, hi]):
    raise DomainError(
        f"[{lo}, {hi}] is not inside the eta domain {eta.domain}."
    )
  upper, lower = float(eta.value(lo)), float(eta.value(hi))
  if not lower <= value <= upper:
    raise DomainError(
        f"eta takes values in [{lower:.12g}, {upper:.12g}] on [{lo}, {hi}],"
        f" not {value:.12g}."
    )
  return optimize.brentq(
      lambda t: float(eta.value(t)) - value, lo, hi, xtol=1e-14
  )
