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

"""Shared bands and extrinsic data for the tests"""

import pytest

import models
from warps import catalog_warps


def make_band(kind: str, n: int, t0: float, t1: float) -> models.WarpedBandSpec:
  warps = {
      "cosine": catalog_warps.CosineWarp,
      "sinh": catalog_warps.SinhWarp,
      "power": catalog_warps.PowerWarp,
  }
  return models.WarpedBandSpec(n=n, t0=t0, t1=t1, warp=warps[kind](n))


@pytest.fixture
def cosine_band():
  """Positive scalar rigid band for n=3 on [-0.7, 0.7]."""
  return make_band("cosine", 3, -0.7, 0.7)


@pytest.fixture
def sinh_band():
  return make_band("sinh", 3, 0.5, 1.5)


@pytest.fixture
def power_band():
  return make_band("power", 3, 0.5, 1.5)


@pytest.fixture
def time_symmetric():
  return models.ExtrinsicSpec.umbilic(0.0)
