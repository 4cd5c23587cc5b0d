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

"""Module that registers all the warps of the band catalog and builds
warps from their JSON description

For example:
    - CosineWarp - {"kind": "cosine"}
    - PerturbedWarp - {"kind": "perturbed", "base": "sinh", "amplitude": 0.1}
    - ExpressionWarp - {"kind": "expression", "expression": "1 + t**2"}
    - TableWarp - {"kind": "table", "path": "warp.csv"}
"""

from errors import ConfigError
from warps import catalog_warps
from warps import custom_warps
from warps import warp_factory
from warps.warp_proto import WarpProto

# Warp Factory
warp_factory_service = warp_factory.WarpFactory()

CATALOG_KINDS = ("cosine", "sinh", "power")


def register_warps():
  """Register the different catalog warps"""
  warp_factory_service.register_warp("cosine", catalog_warps.CosineWarp)
  warp_factory_service.register_warp("sinh", catalog_warps.SinhWarp)
  warp_factory_service.register_warp("power", catalog_warps.PowerWarp)
  warp_factory_service.register_warp("flat", custom_warps.FlatWarp)
  warp_factory_service.register_warp(
      "expression", custom_warps.ExpressionWarp
  )
  warp_factory_service.register_warp("table", custom_warps.TableWarp)


def build_warp(description: dict, n: int) -> WarpProto:
  """Builds a warp from its JSON description.

  Args:
    description: a dict with a "kind" key plus kind-specific parameters.
    n: dimension of the band.
  Returns:
    The warp instance.
  """
  params = dict(description)
  kind = params.pop("kind", None)
  if kind is None:
    raise ConfigError("Warp description needs a 'kind'.")
  try:
    if kind in CATALOG_KINDS:
      _no_extra_keys(kind, params)
      return warp_factory_service.get_warp(kind, n=n)
    if kind == "perturbed":
      base = params.pop("base", "cosine")
      if base not in CATALOG_KINDS:
        raise ConfigError(f"Perturbed warp base must be catalog, got {base}.")
      base_warp = warp_factory_service.get_warp(base, n=n)
      return catalog_warps.PerturbedWarp(base_warp, **params)
    return warp_factory_service.get_warp(kind, **params)
  except TypeError as ex:
    raise ConfigError(f"Bad parameters for warp '{kind}': {ex}") from ex


def _no_extra_keys(kind: str, params: dict) -> None:
  if params:
    raise ConfigError(
        f"Warp '{kind}' takes no parameters, got {sorted(params)}."
    )


register_warps()
