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

"""Grid construction, finite differences and order-independent reductions"""

from collections.abc import Callable

import numpy as np

from errors import DomainError


def uniform_grid(t0: float, t1: float, size: int) -> np.ndarray:
  """Uniform grid of `size` points on [t0, t1] with both endpoints exact."""
  if size < 2:
    raise DomainError(f"A grid needs at least 2 points, got {size}.")
  grid = t0 + (t1 - t0) * np.arange(size, dtype=float) / (size - 1)
  grid[-1] = t1
  return grid


def grid_with_midpoints(t0: float, t1: float, size: int) -> np.ndarray:
  """Grid nodes plus cell midpoints, in increasing order."""
  return uniform_grid(t0, t1, 2 * size - 1)


def pairwise_reduce(
    values: np.ndarray, op: Callable[[np.ndarray, np.ndarray], np.ndarray]
) -> float:
  """Reduces `values` by a balanced binary tree of `op` applications.

  The tree shape only depends on the number of values, so the result does
  not depend on the order in which samples were produced.
  """
  level = np.asarray(values, dtype=float).ravel()
  if level.size == 0:
    raise ValueError("Cannot reduce an empty array.")
  while level.size > 1:
    if level.size % 2:
      level = np.append(level, level[-1])
    level = op(level[0::2], level[1::2])
  return float(level[0])


def pairwise_min(values: np.ndarray) -> float:
  return pairwise_reduce(values, np.minimum)


def pairwise_max(values: np.ndarray) -> float:
  return pairwise_reduce(values, np.maximum)


def fd_step(t0: float, t1: float) -> float:
  """Default finite-difference step for user supplied warps."""
  return max(1e-5, 1e-5 * abs(t1 - t0))


def fd_derivative(
    fn: Callable[[np.ndarray], np.ndarray],
    t: float | np.ndarray,
    h: float,
    lo: float,
    hi: float,
    order: int = 1,
) -> np.ndarray:
  """First or second derivative of `fn` by finite differences.

  Uses 4th-order central stencils where t ± 2h stays in [lo, hi] and
  2nd-order one-sided stencils otherwise. `fn` is never sampled outside
  [lo, hi].

  Args:
    fn: vectorized function of t.
    t: evaluation point(s).
    h: step.
    lo: lower end of the admissible interval.
    hi: upper end of the admissible interval.
    order: 1 or 2.
  Returns:
    The derivative estimate with the shape of `t`.
  """
  if order not in (1, 2):
    raise ValueError(f"Unsupported derivative order {order}.")
  t = np.asarray(t, dtype=float)
  scalar = t.ndim == 0
  t = np.atleast_1d(t)
  out = np.empty_like(t)

  central = (t - 2 * h >= lo) & (t + 2 * h <= hi)
  forward = ~central & (t + 3 * h <= hi) & (t - 2 * h < lo)
  backward = ~central & ~forward

  if central.any():
    tc = t[central]
    fm2, fm1 = fn(tc - 2 * h), fn(tc - h)
    fp1, fp2 = fn(tc + h), fn(tc + 2 * h)
    if order == 1:
      out[central] = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    else:
      f0 = fn(tc)
      out[central] = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h**2)
  for mask, sign in ((forward, 1.0), (backward, -1.0)):
    if not mask.any():
      continue
    tm = t[mask]
    s = sign * h
    f0, f1, f2 = fn(tm), fn(tm + s), fn(tm + 2 * s)
    if order == 1:
      out[mask] = (-3 * f0 + 4 * f1 - f2) / (2 * s)
    else:
      f3 = fn(tm + 3 * s)
      out[mask] = (2 * f0 - 5 * f1 + 4 * f2 - f3) / h**2
  return out[0] if scalar else out


def grid_derivative(values: np.ndarray, h: float) -> np.ndarray:
  """Derivative of uniformly sampled data, 4th order everywhere.

  Falls back to np.gradient for fewer than 5 samples.
  """
  values = np.asarray(values, dtype=float)
  if values.size < 5:
    return np.gradient(values, h, edge_order=min(2, values.size - 1))
  out = np.empty_like(values)
  out[2:-2] = (
      values[:-4] - 8 * values[1:-3] + 8 * values[3:-1] - values[4:]
  ) / (12 * h)
  v = values
  out[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (
      12 * h
  )
  out[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h)
  out[-1] = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / (
      12 * h
  )
  out[-2] = (3 * v[-1] + 10 * v[-2] - 18 * v[-3] + 6 * v[-4] - v[-5]) / (
      12 * h
  )
  return out
