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

"""Warp factory that implements a factory class to retrieve/register
warps for the different band kinds"""

from errors import ConfigError
from warps.warp_proto import WarpProto


class WarpFactory:
  """Warp factory that implements a factory class to retrieve/register
  warp classes for the catalog band kinds"""

  def __init__(self):
    """Init method for WarpFactory."""
    self._warps = {}

  def register_warp(self, warp_kind: str, warp: type[WarpProto]) -> None:
    """Register warp class

    Args:
        warp_kind: the kind of the warp (e.g. cosine, sinh, etc.)
        warp: the class (concrete implementation) of the warp
    """
    self._warps[warp_kind] = warp

  def get_warp(self, warp_kind: str, **params) -> WarpProto:
    """Get warp by kind

    Args:
        warp_kind: the kind of the warp (e.g. cosine, sinh, etc.)
        params: constructor arguments of the warp class
    Returns:
        warp: an instance (concrete implementation) of the warp
    """
    warp = self._warps.get(warp_kind)
    if not warp:
      raise ConfigError(
          f"Unknown warp kind '{warp_kind}', expected one of"
          f" {sorted(self._warps)}."
      )
    return warp(**params)

  def kinds(self) -> list[str]:
    return sorted(self._warps)
