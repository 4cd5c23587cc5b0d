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

"""Module to test the Callias certificate"""

import dataclasses
import math

import numpy as np
import pytest

import models
from callias import callias_cert
from conftest import make_band
from errors import AdmissibilityError, ConfigError, ConsistencyError
from riccati import eta_riccati
from width_services import width_checker


def _eta(sigma=6.0, lam=0.0, n=3):
  return eta_riccati.eta_closed(models.EtaParams(sigma=sigma, lam=lam, n=n))


def _rigid_input(band, re_bound=0.0):
  return callias_cert.build_callias_input(
      band,
      _eta(),
      band.t0,
      band.t1,
      re_bound=re_bound,
      variant=models.PotentialVariant.RIGID,
  )


def test_rigid_band_is_tight(cosine_band, time_symmetric):
  callias_input = _rigid_input(cosine_band)
  certificate = callias_cert.evaluate_certificate(
      cosine_band, time_symmetric, callias_input, 6.0
  )
  assert abs(certificate.bulk_margin) <= 1e-9
  assert abs(certificate.boundary_margin_plus) <= 1e-9
  assert abs(certificate.boundary_margin_minus) <= 1e-9
  assert certificate.riccati_defect <= 1e-9
  assert certificate.verdict == models.Verdict.TIGHT
  assert certificate.admissible is False
  assert certificate.admissibility_reason == callias_cert.NON_CONSTANT_REASON
  assert certificate.assumptions == (callias_cert.INDEX_ASSUMPTION,)


def test_bundle_curvature_lowers_the_bulk(cosine_band, time_symmetric):
  callias_input = _rigid_input(cosine_band, re_bound=0.1)
  certificate = callias_cert.evaluate_certificate(
      cosine_band, time_symmetric, callias_input, 6.0
  )
  assert certificate.bulk_margin == pytest.approx(-0.2, abs=1e-9)
  assert certificate.verdict == models.Verdict.HYPOTHESIS_VIOLATED


def test_bulk_matches_the_modified_energy_margin(cosine_band, time_symmetric):
  callias_input = _rigid_input(cosine_band, re_bound=0.05)
  certificate = callias_cert.evaluate_certificate(
      cosine_band, time_symmetric, callias_input, 6.0
  )
  t = callias_input.psi_tilde.t
  shared = width_checker.modified_dec_field(
      np.full_like(t, 3.0),
      callias_input.psi_tilde.values,
      callias_input.dpsi_tilde_bound.values,
      0.0,
      3,
  )
  assert certificate.bulk_margin == pytest.approx(
      np.min(shared) - 0.1, abs=1e-9
  )


def test_psi_scaling(cosine_band):
  callias_input = _rigid_input(cosine_band)
  assert np.allclose(
      -4 / 3 * callias_input.psi.values,
      callias_input.psi_tilde.values,
      rtol=1e-15,
      atol=1e-15,
  )


def test_plateau_potential_is_admissible():
  band = make_band("cosine", 3, -0.9, 0.9)
  callias_input = callias_cert.build_callias_input(
      band, _eta(), -0.7, 0.7, eps=0.04, plateau=0.1
  )
  assert callias_input.admissible is True
  minus, plus = callias_input.plateau_constants
  assert minus == pytest.approx(-3 * math.tan(1.11), rel=1e-12)
  assert plus == pytest.approx(3 * math.tan(1.11), rel=1e-12)
  assert callias_input.to_dict()["admissible"] is True


def test_vanishing_plateau_constant():
  band = make_band("cosine", 3, -0.9, 0.9)
  with pytest.raises(AdmissibilityError):
    callias_cert.build_callias_input(band, _eta(), 0.0, 0.3, plateau=0.1)


def test_negative_bundle_bound(cosine_band):
  with pytest.raises(ConfigError):
    _rigid_input(cosine_band, re_bound=-1.0)


@pytest.mark.parametrize(
    "margins,admissible,verdict",
    [
        ([0.1, 0.2, 0.3], True, models.Verdict.CONTRADICTION_CERTIFIED),
        ([0.1, 0.2, 0.3], False, models.Verdict.CONSISTENT),
        ([0.1, 0.0, 0.3], True, models.Verdict.CONSISTENT),
        ([0.1, -0.2, 0.3], True, models.Verdict.HYPOTHESIS_VIOLATED),
        ([0.0, 0.0, 0.0], False, models.Verdict.TIGHT),
    ],
)
def test_classify_callias(margins, admissible, verdict):
  assert callias_cert.classify_callias(margins, admissible, 1e-9) == verdict


def _wide_input(re_bound=0.0):
  band = make_band("cosine", 3, -0.8, 0.8)
  callias_input = callias_cert.build_callias_input(
      band, _eta(), -0.7, 0.7, eps=0.04, plateau=0.05, re_bound=re_bound
  )
  return band, callias_input


def test_wide_band_strict_potential(time_symmetric):
  """Lip(phi) = 1.48 / 1.5 < 1 keeps the bulk strictly positive, but on
  the rigid band theta(t1) = eta(0.8) < eta(0.74) = psi~(t1), so the
  boundary margins fail and nothing is certified."""
  band, callias_input = _wide_input()
  assert callias_input.admissible is True
  assert callias_input.potential.lip == pytest.approx(1.48 / 1.5)
  certificate = callias_cert.evaluate_certificate(
      band, time_symmetric, callias_input, 6.0
  )
  assert certificate.bulk_margin > 1e-3
  expected = -2 * math.tan(1.2) + 2 * math.tan(1.11)
  assert certificate.boundary_margin_plus == pytest.approx(expected, rel=1e-9)
  assert certificate.boundary_margin_minus == pytest.approx(
      expected, rel=1e-9
  )
  assert certificate.boundary_margin_plus < 0
  assert certificate.verdict == models.Verdict.HYPOTHESIS_VIOLATED
  assert certificate.verdict != models.Verdict.CONTRADICTION_CERTIFIED


def test_bulk_matches_the_lemma_chain(time_symmetric):
  band, callias_input = _wide_input()
  certificate = callias_cert.evaluate_certificate(
      band, time_symmetric, callias_input, 6.0
  )
  grid = callias_input.psi_tilde.t
  chain = width_checker.width_checker.lemma_chain_field(
      callias_input.potential, 3, 6.0, 0.0, grid
  )
  assert certificate.bulk_margin == pytest.approx(
      0.5 * np.min(chain), abs=1e-12
  )
  assert np.min(chain) == pytest.approx(
      width_checker.width_checker.lemma_chain_margin(
          callias_input.potential, band, 6.0, 0.0
      ),
      abs=1e-12,
  )


@pytest.mark.parametrize("field", ["psi_tilde", "dpsi_tilde_bound"])
def test_altered_input_is_inconsistent(time_symmetric, field):
  band, callias_input = _wide_input()
  original = getattr(callias_input, field)
  altered = models.GridField1D.from_grid(
      original.t, original.values + 1e-3, field
  )
  callias_input = dataclasses.replace(callias_input, **{field: altered})
  with pytest.raises(ConsistencyError):
    callias_cert.evaluate_certificate(
        band, time_symmetric, callias_input, 6.0
    )
