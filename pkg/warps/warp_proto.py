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

"""Parent class to provide structural inheritance for warp functions f(t)
of the band metric dt^2 + f(t)^2 tau.

For example:
    - CosineWarp - f(t) = cos(nt/2)^(2/n), the positive scalar band
    - SinhWarp - f(t) = sinh(nt/2)^(2/n), the negative scalar band
    - PowerWarp - f(t) = (nt/2)^(2/n), the scalar flat band
    - CallableWarp - user supplied f with optional derivatives
"""

from typing import Protocol

import numpy as np


class WarpProto(Protocol):
  """Parent class to provide structural inheritance for warps"""

  kind: str

  def f(self, t: float | np.ndarray) -> float | np.ndarray:
    """Warp value."""

  def df(self, t: float | np.ndarray) -> float | np.ndarray:
    """First derivative of the warp."""

  def d2f(self, t: float | np.ndarray) -> float | np.ndarray:
    """Second derivative of the warp."""

  def validate_interval(self, n: int, t0: float, t1: float) -> None:
    """Raises DomainError if [t0, t1] is outside the warp's natural domain."""

  def describe(self) -> dict:
    """JSON-serializable description used in config echoes."""
