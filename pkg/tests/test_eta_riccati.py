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

"""Module to test the Riccati comparison function eta"""

import dataclasses
import math

import numpy as np
import pytest
from scipy import optimize

import models
from errors import (
    ConfigError,
    DomainError,
    EtaBlowUpError,
    NotMonotoneError,
    StepTooLargeError,
)
from riccati import eta_riccati


def _params(sigma, lam=0.0, n=3, c=0.0):
  return models.EtaParams(sigma=sigma, lam=lam, n=n, c=c)


@pytest.mark.parametrize(
    "sigma,lam,case",
    [
        (6.0, 0.0, models.EtaCase.TAN),
        (0.0, 0.0, models.EtaCase.RATIONAL),
        (-6.0, 0.0, models.EtaCase.COTH),
        (1.5, 1.5, models.EtaCase.RATIONAL),
        (1.0, 3.0, models.EtaCase.COTH),
        (1.0, 0.5, models.EtaCase.TAN),
    ],
)
def test_classify(sigma, lam, case):
  assert eta_riccati.classify(_params(sigma, lam)) == case


def test_tan_domain_is_bounded():
  bounds = eta_riccati.domain_bounds(_params(6.0))
  assert bounds.bounded
  assert bounds.r_minus == pytest.approx(-math.pi / 3)
  assert bounds.r_plus == pytest.approx(math.pi / 3)


def test_unbounded_branches():
  above = eta_riccati.domain_bounds(_params(-6.0, c=0.2))
  below = eta_riccati.domain_bounds(_params(-6.0, c=0.2), models.Branch.BELOW)
  assert (above.r_minus, above.r_plus, above.bounded) == (0.2, math.inf, False)
  assert (below.r_minus, below.r_plus) == (-math.inf, 0.2)


def test_domain_end_is_where_eta_escapes():
  """The zero of 1/eta past the origin is the right end of the domain."""
  eta = eta_riccati.eta_closed(_params(6.0))
  pole = optimize.brentq(
      lambda t: 1.0 / eta.value_fn(t), 0.5 * math.pi / 3, 1.5 * math.pi / 3,
      xtol=1e-14,
  )
  assert pole == pytest.approx(eta.domain[1], abs=1e-12)


def test_rigid_closed_forms_for_n3():
  """eta equals the mean curvature of the three rigid bands."""
  t = np.linspace(0.2, 0.9, 15)
  cosine = eta_riccati.eta_closed(_params(6.0))
  sinh = eta_riccati.eta_closed(_params(-6.0))
  power = eta_riccati.eta_closed(_params(0.0))
  assert np.allclose(cosine.value(t), -2 * np.tan(1.5 * t), rtol=1e-13)
  assert np.allclose(sinh.value(t), 2 / np.tanh(1.5 * t), rtol=1e-13)
  assert np.allclose(power.value(t), 4 / (3 * t), rtol=1e-13)
  assert sinh.branch == models.Branch.ABOVE
  assert cosine.branch is None


@pytest.mark.parametrize(
    "sigma,lam,n,t",
    [
        (6.0, 0.0, 3, np.linspace(-0.9, 0.9, 401)),
        (-6.0, 0.0, 3, np.linspace(0.1, 5.0, 401)),
        (0.0, 0.0, 3, np.linspace(0.1, 5.0, 401)),
        (2.0, 1.0, 4, np.linspace(-1.0, 1.0, 401)),
        (0.5, 2.0, 5, np.linspace(0.1, 3.0, 401)),
    ],
)
def test_closed_forms_solve_the_ode(sigma, lam, n, t):
  params = _params(sigma, lam, n)
  eta = eta_riccati.eta_closed(params)
  residual = eta_riccati.ode_residual(eta, params, t=t)
  scale = max(1.0, float(np.max(eta.value(t) ** 2)))
  assert residual.meta["max_abs"] <= 1e-11 * scale
  assert np.all(eta.derivative(t) < 0)


def test_default_residual_grid():
  params = _params(6.0, 0.0, 3, c=0.1)
  eta = eta_riccati.eta_closed(params)
  residual = eta_riccati.ode_residual(eta, params)
  assert residual.t0 > eta.domain[0]
  assert residual.t1 < eta.domain[1]


def test_eta_outside_domain():
  eta = eta_riccati.eta_closed(_params(6.0))
  with pytest.raises(DomainError):
    eta.value(1.1)


def test_eta_inverse():
  eta = eta_riccati.eta_closed(_params(6.0))
  assert eta_riccati.eta_inverse(eta, 0.0, -0.5, 0.5) == pytest.approx(
      0.0, abs=1e-12
  )
  target = float(eta.value(0.3))
  assert eta_riccati.eta_inverse(eta, target, -0.5, 0.5) == pytest.approx(0.3)
  with pytest.raises(DomainError):
    eta_riccati.eta_inverse(eta, 100.0, -0.5, 0.5)


@pytest.mark.parametrize(
    "sigma,n,c", [(1.0, 1, 0.0), (math.nan, 3, 0.0), (1.0, 3, math.inf)]
)
def test_invalid_params(sigma, n, c):
  with pytest.raises(ConfigError):
    models.EtaParams(sigma=sigma, lam=0.0, n=n, c=c)


def test_numeric_matches_tan_case():
  params = _params(6.0)
  field = eta_riccati.eta_solve_numeric(params, 0.0, 0.0, (-0.8, 0.8), 1e-3)
  exact = -2 * np.tan(1.5 * field.t)
  assert np.max(np.abs(field.values - exact)) <= 1e-7
  assert field.meta["blow_up"] is False
  assert field.meta["halving_error"] <= 1e-7
  assert field.t0 == pytest.approx(-0.8)
  assert field.t1 == pytest.approx(0.8)


def test_numeric_matches_coth_case():
  params = _params(-6.0)
  eta = eta_riccati.eta_closed(params)
  field = eta_riccati.eta_solve_numeric(
      params, 1.0, float(eta.value(1.0)), (0.5, 1.5), 1e-3
  )
  assert np.max(np.abs(field.values - eta.value(field.t))) <= 1e-8


def test_numeric_residual():
  params = _params(2.0, 1.0, 4)
  field = eta_riccati.eta_solve_numeric(params, 0.0, 0.3, (-0.5, 0.5), 1e-3)
  residual = eta_riccati.ode_residual(field, params)
  assert residual.meta["max_abs"] <= 1e-6


def test_numeric_flags_blow_up():
  """Starting at eta(0) = 0 the tan solution escapes at pi/3."""
  params = _params(6.0)
  field = eta_riccati.eta_solve_numeric(params, 0.0, 0.0, (-0.5, 1.5), 1e-3)
  assert field.meta["blow_up"] is True
  assert field.meta["escape_times"][0] == pytest.approx(math.pi / 3, abs=1e-2)
  assert np.isnan(field.values[-1])
  assert field.meta["last_valid_t"][1] < math.pi / 3


def test_numeric_raises_on_blow_up():
  params = _params(6.0)
  with pytest.raises(EtaBlowUpError):
    eta_riccati.eta_solve_numeric(
        params, 0.0, 0.0, (-0.5, 1.5), 1e-3, on_blow_up="raise"
    )


def test_numeric_argument_checks():
  params = _params(6.0)
  with pytest.raises(StepTooLargeError):
    eta_riccati.eta_solve_numeric(params, 0.0, 0.0, (-0.8, 0.8), 0.2)
  with pytest.raises(DomainError):
    eta_riccati.eta_solve_numeric(params, 1.0, 0.0, (-0.8, 0.8), 1e-3)
  with pytest.raises(ConfigError):
    eta_riccati.eta_solve_numeric(
        params, 0.0, 0.0, (-0.8, 0.8), 1e-3, on_blow_up="ignore"
    )


def test_increasing_data_is_rejected():
  t = np.linspace(0.0, 1.0, 21)
  field = models.GridField1D.from_grid(t, t, "eta")
  with pytest.raises(NotMonotoneError):
    eta_riccati.ode_residual(field, _params(6.0))


def test_grid_fields_are_read_only():
  samples = np.array([1.0, 2.0, 3.0])
  field = models.GridField1D(t0=0.0, h=0.5, values=samples, name="eta")
  samples[0] = 10.0
  assert field.values[0] == 1.0
  with pytest.raises(ValueError):
    field.values[1] = 0.0
  with pytest.raises(dataclasses.FrozenInstanceError):
    field.h = 0.25
  numeric = eta_riccati.eta_solve_numeric(
      _params(6.0), 0.0, 0.0, (-0.5, 0.5), 1e-2
  )
  assert not numeric.values.flags.writeable
