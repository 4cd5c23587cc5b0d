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

"""Class that implements the catalog warps of the three rigid bands.

Each warp has the form f(t) = s(nt/2)^(2/n) so f'/f = s'/s evaluated at
nt/2; derivatives are computed from that log-derivative.
"""

import numpy as np

from errors import DomainError


class CatalogWarp:
  """Shared implementation for f(t) = s(nt/2)^(2/n)."""

  kind = ""

  def __init__(self, n: int):
    if int(n) < 2:
      raise DomainError(f"Band dimension must be at least 2, got {n}.")
    self.n = int(n)

  def _base(self, x: np.ndarray) -> np.ndarray:
    raise NotImplementedError

  def _log_slope(self, t: np.ndarray) -> np.ndarray:
    """(log f)'."""
    raise NotImplementedError

  def _log_curvature(self, t: np.ndarray) -> np.ndarray:
    """(log f)''."""
    raise NotImplementedError

  def f(self, t):
    t = np.asarray(t, dtype=float)
    return self._base(self.n * t / 2) ** (2.0 / self.n)

  def df(self, t):
    return self.f(t) * self._log_slope(np.asarray(t, dtype=float))

  def d2f(self, t):
    t = np.asarray(t, dtype=float)
    slope = self._log_slope(t)
    return self.f(t) * (self._log_curvature(t) + slope**2)

  def validate_interval(self, n: int, t0: float, t1: float) -> None:
    if int(n) != self.n:
      raise DomainError(
          f"Warp {self.kind} was built for n={self.n}, band has n={n}."
      )
    if not t0 < t1:
      raise DomainError(f"Empty band interval [{t0}, {t1}].")

  def describe(self) -> dict:
    return {"kind": self.kind}


class CosineWarp(CatalogWarp):
  """f(t) = cos(nt/2)^(2/n): scalar curvature n(n-1)."""

  kind = "cosine"

  def _base(self, x):
    return np.cos(x)

  def _log_slope(self, t):
    return -np.tan(self.n * t / 2)

  def _log_curvature(self, t):
    return -(self.n / 2) / np.cos(self.n * t / 2) ** 2

  def validate_interval(self, n: int, t0: float, t1: float) -> None:
    super().validate_interval(n, t0, t1)
    bound = np.pi / self.n
    if not (-bound < t0 and t1 < bound):
      raise DomainError(
          f"CosineBand needs [t0, t1] inside (-pi/n, pi/n) = ({-bound:.12g},"
          f" {bound:.12g}), got [{t0}, {t1}]."
      )


class SinhWarp(CatalogWarp):
  """f(t) = sinh(nt/2)^(2/n): scalar curvature -n(n-1)."""

  kind = "sinh"

  def _base(self, x):
    return np.sinh(x)

  def _log_slope(self, t):
    return 1.0 / np.tanh(self.n * t / 2)

  def _log_curvature(self, t):
    return -(self.n / 2) / np.sinh(self.n * t / 2) ** 2

  def validate_interval(self, n: int, t0: float, t1: float) -> None:
    super().validate_interval(n, t0, t1)
    if t0 <= 0:
      raise DomainError(f"SinhBand needs t0 > 0, got t0={t0}.")


class PowerWarp(CatalogWarp):
  """f(t) = (nt/2)^(2/n): scalar flat."""

  kind = "power"

  def _base(self, x):
    return x

  def _log_slope(self, t):
    return 2.0 / (self.n * t)

  def _log_curvature(self, t):
    return -2.0 / (self.n * t**2)

  def validate_interval(self, n: int, t0: float, t1: float) -> None:
    super().validate_interval(n, t0, t1)
    if t0 <= 0:
      raise DomainError(f"PowerBand needs t0 > 0, got t0={t0}.")


class PerturbedWarp:
  """Catalog warp times (1 + amplitude * sin(frequency * t + phase))."""

  kind = "perturbed"

  def __init__(
      self,
      base: CatalogWarp,
      amplitude: float,
      frequency: float,
      phase: float = 0.0,
  ):
    if not 0 <= abs(amplitude) < 1:
      raise DomainError(
          f"Perturbation amplitude must be below 1, got {amplitude}."
      )
    self.base = base
    self.n = base.n
    self.amplitude = float(amplitude)
    self.frequency = float(frequency)
    self.phase = float(phase)

  def _factor(self, t, order: int = 0):
    arg = self.frequency * np.asarray(t, dtype=float) + self.phase
    a, w = self.amplitude, self.frequency
    if order == 0:
      return 1 + a * np.sin(arg)
    if order == 1:
      return a * w * np.cos(arg)
    return -a * w**2 * np.sin(arg)

  def f(self, t):
    return self.base.f(t) * self._factor(t)

  def df(self, t):
    return self.base.df(t) * self._factor(t) + self.base.f(t) * self._factor(
        t, 1
    )

  def d2f(self, t):
    return (
        self.base.d2f(t) * self._factor(t)
        + 2 * self.base.df(t) * self._factor(t, 1)
        + self.base.f(t) * self._factor(t, 2)
    )

  def validate_interval(self, n: int, t0: float, t1: float) -> None:
    self.base.validate_interval(n, t0, t1)

  def describe(self) -> dict:
    return {
        "kind": self.kind,
        "base": self.base.kind,
        "amplitude": self.amplitude,
        "frequency": self.frequency,
        "phase": self.phase,
    }
