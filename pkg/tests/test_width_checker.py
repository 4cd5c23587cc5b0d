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

"""Module to test the width certificates and potentials"""

import numpy as np
import pytest

import models
from conftest import make_band
from errors import ConfigError, DomainError, GeometryError, ModeError
from riccati import eta_riccati
from warps import custom_warps
from width_services import width_checker

checker = width_checker.width_checker


def _eta(sigma=6.0, lam=0.0, n=3):
  return eta_riccati.eta_closed(models.EtaParams(sigma=sigma, lam=lam, n=n))


@pytest.mark.parametrize(
    "band_fixture,sigma",
    [("cosine_band", 6.0), ("sinh_band", -6.0), ("power_band", 0.0)],
)
def test_rigid_bands_are_tight(request, time_symmetric, band_fixture, sigma):
  """Each rigid band saturates every hypothesis and the conclusion."""
  band = request.getfixturevalue(band_fixture)
  certificate = checker.check_theorem(
      band, time_symmetric, sigma, band.t0, band.t1
  )
  assert certificate.verdict == models.Verdict.TIGHT
  for margin in certificate.margins().values():
    assert abs(margin) <= 1e-9
  assert certificate.conclusion == pytest.approx(0.0, abs=1e-12)


def test_narrow_band_is_consistent(time_symmetric):
  """A band of width 1 with t+ - t- = 1.4 satisfies the estimate."""
  band = make_band("cosine", 3, -0.5, 0.5)
  certificate = checker.check_theorem(band, time_symmetric, 6.0, -0.7, 0.7)
  assert certificate.verdict == models.Verdict.CONSISTENT
  assert certificate.conclusion == pytest.approx(-0.4)
  assert certificate.mod_dec_margin == pytest.approx(0.0, abs=1e-9)
  assert certificate.boundary_minus > 0
  assert certificate.boundary_plus > 0


def test_energy_bound_above_curvature(cosine_band, time_symmetric):
  certificate = checker.check_theorem(
      cosine_band, time_symmetric, 6.1, -0.7, 0.7
  )
  assert certificate.dec_margin == pytest.approx(-0.05)
  assert certificate.verdict == models.Verdict.HYPOTHESIS_VIOLATED


def test_certificate_details(cosine_band, time_symmetric):
  certificate = checker.check_theorem(
      cosine_band, time_symmetric, 6.0, -0.7, 0.7, grid_n=101
  )
  details = certificate.to_dict()["details"]
  assert details["lambda"] == 0.0
  assert details["grid_n"] == 101
  assert details["eta"]["case"] == "Tan"
  assert certificate.to_dict()["verdict"] == "tight"


def test_sup_trace_mode_needs_positive_eta(cosine_band, time_symmetric):
  with pytest.raises(ModeError):
    checker.check_theorem(
        cosine_band,
        time_symmetric,
        6.0,
        -0.7,
        0.7,
        mode=models.CheckMode.SUP_TRACE,
    )


def test_sup_trace_mode_on_positive_eta(time_symmetric):
  band = make_band("cosine", 3, -0.7, -0.1)
  certificate = checker.check_theorem(
      band, time_symmetric, 6.0, -0.7, -0.1, mode=models.CheckMode.SUP_TRACE
  )
  assert certificate.eta_min == pytest.approx(2 * np.tan(0.15))
  assert certificate.verdict == models.Verdict.TIGHT


def test_cmc_mode_needs_constant_trace(cosine_band):
  a, da, _ = custom_warps.lambdify_expression("t")
  b, db, _ = custom_warps.lambdify_expression("0")
  k = models.ExtrinsicSpec.diagonal(a, b, da, db)
  with pytest.raises(ConfigError):
    checker.check_theorem(cosine_band, k, 6.0, -0.7, 0.7)
  with pytest.raises(ConfigError):
    checker.check_theorem(
        cosine_band,
        k,
        6.0,
        -0.7,
        0.7,
        mode=models.CheckMode.SUP_TRACE,
        lam=0.0,
    )


def test_ends_outside_eta_domain(cosine_band, time_symmetric):
  with pytest.raises(DomainError):
    checker.check_theorem(cosine_band, time_symmetric, 6.0, -0.7, 1.2)
  with pytest.raises(ConfigError):
    checker.check_theorem(cosine_band, time_symmetric, 6.0, 0.5, 0.1)


@pytest.mark.parametrize(
    "margins,conclusion,verdict",
    [
        ([0.0, 0.0], 0.0, models.Verdict.TIGHT),
        ([0.1, 0.0], -0.2, models.Verdict.CONSISTENT),
        ([0.1, -1e-3], -0.2, models.Verdict.HYPOTHESIS_VIOLATED),
        ([0.1, 0.2], 0.3, models.Verdict.THEOREM_VIOLATED),
        ([0.1, float("nan")], 0.3, models.Verdict.HYPOTHESIS_VIOLATED),
    ],
)
def test_classify_verdict(margins, conclusion, verdict):
  assert width_checker.classify_verdict(margins, conclusion, 1e-9) == verdict


def test_strict_potential():
  band = make_band("cosine", 3, -0.8, 0.8)
  potential = checker.build_potential(band, _eta(), -0.7, 0.7, eps=0.04)
  assert potential.lip == pytest.approx(0.925)
  assert potential.phi(band.t0) == pytest.approx(-0.74)
  assert potential.phi(band.t1) == pytest.approx(0.74)
  assert checker.lemma_chain_margin(potential, band, 6.0, 0.0) > 0


def test_strict_potential_with_plateaus():
  band = make_band("cosine", 3, -0.8, 0.8)
  potential = checker.build_potential(
      band, _eta(), -0.7, 0.7, eps=0.04, plateau=0.05
  )
  assert potential.lip == pytest.approx(1.48 / 1.5)
  t = np.array([-0.8, -0.76, 0.77, 0.8])
  assert np.allclose(potential.phi(t), [-0.74, -0.74, 0.74, 0.74])
  assert np.allclose(potential.dp(t[:2]), 0.0)


def test_strict_potential_needs_room(cosine_band):
  with pytest.raises(GeometryError):
    checker.build_potential(cosine_band, _eta(), -0.7, 0.7)


def test_rigid_potential_needs_equal_width(cosine_band):
  rigid = models.PotentialVariant.RIGID
  potential = checker.build_potential(
      cosine_band, _eta(), -0.7, 0.7, variant=rigid
  )
  assert potential.lip == pytest.approx(1.0)
  with pytest.raises(GeometryError):
    checker.build_potential(cosine_band, _eta(), -0.6, 0.7, variant=rigid)


def test_potential_argument_checks(cosine_band):
  with pytest.raises(ConfigError):
    checker.build_potential(cosine_band, _eta(), -0.3, 0.3, eps=-0.1)
  with pytest.raises(ConfigError):
    checker.build_potential(cosine_band, _eta(), 0.3, -0.3)


def test_distance_potential_saturates(cosine_band):
  potential = checker.distance_potential(cosine_band, _eta(), -0.7, 0.3)
  assert potential.lip == 1.0
  assert potential.phi(0.3) == pytest.approx(0.3)
  assert potential.phi(0.5) == pytest.approx(0.3)
  assert potential.phi(-0.2) == pytest.approx(-0.2)


def test_affine_potential(cosine_band):
  potential = checker.affine_potential(cosine_band, _eta(), -0.35, 0.35)
  assert potential.lip == pytest.approx(0.5)
  assert potential.variant == models.PotentialVariant.AFFINE
