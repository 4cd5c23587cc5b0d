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

"""Class that implements user supplied warps: Python callables, closed-form
expressions and sampled (t, f, f', f'') tables.
"""

import logging
from collections.abc import Callable

import numpy as np
import pandas
import sympy
from scipy import interpolate

from errors import ConfigError, DerivativeUnavailableError, DomainError
from helpers import grid_helpers


class CallableWarp:
  """Warp given as a callable f with optional analytic f', f''.

  Missing derivatives are either taken by finite differences (when
  `finite_differences` is set) or reported as unavailable.
  """

  kind = "custom"

  def __init__(
      self,
      f: Callable,
      df: Callable | None = None,
      d2f: Callable | None = None,
      finite_differences: bool = False,
      interval: tuple[float, float] | None = None,
      label: str = "callable",
  ):
    self._f = f
    self._df = df
    self._d2f = d2f
    self.finite_differences = finite_differences
    self.interval = interval
    self.label = label

  def _vectorized(self, fn: Callable, t) -> np.ndarray:
    t_arr = np.asarray(t, dtype=float)
    values = np.asarray(fn(t_arr), dtype=float)
    if values.shape != t_arr.shape:
      values = np.broadcast_to(values, t_arr.shape).copy()
    return values

  def f(self, t):
    return self._vectorized(self._f, t)

  def _numeric(self, t, order: int):
    if not self.finite_differences:
      raise DerivativeUnavailableError(
          f"Warp '{self.label}' has no analytic derivative of order {order}"
          " and finite differences are disabled."
      )
    if self.interval is None:
      raise DerivativeUnavailableError(
          f"Warp '{self.label}' needs its interval for finite differences."
      )
    lo, hi = self.interval
    return grid_helpers.fd_derivative(
        self.f, t, grid_helpers.fd_step(lo, hi), lo, hi, order=order
    )

  def df(self, t):
    if self._df is not None:
      return self._vectorized(self._df, t)
    return self._numeric(t, 1)

  def d2f(self, t):
    if self._d2f is not None:
      return self._vectorized(self._d2f, t)
    return self._numeric(t, 2)

  def validate_interval(self, n: int, t0: float, t1: float) -> None:
    if not t0 < t1:
      raise DomainError(f"Empty band interval [{t0}, {t1}].")
    if self.interval is None:
      self.interval = (t0, t1)

  def describe(self) -> dict:
    return {"kind": self.kind, "source": self.label}


class FlatWarp(CallableWarp):
  """f = 1: the product band, flat for every n."""

  kind = "flat"

  def __init__(self):
    super().__init__(
        np.ones_like, np.zeros_like, np.zeros_like, label="flat"
    )

  def describe(self) -> dict:
    return {"kind": self.kind}


def lambdify_expression(expression: str) -> tuple[Callable, Callable, Callable]:
  """Parses an expression in t and returns it with its two derivatives.

  Args:
    expression: a sympy-parsable expression in the symbol t, e.g. "cos(t)".
  Returns:
    (fn, dfn, d2fn) vectorized numpy callables.
  """
  t = sympy.Symbol("t", real=True)
  try:
    expr = sympy.sympify(expression, locals={"t": t})
  except (sympy.SympifyError, TypeError) as ex:
    raise ConfigError(f"Cannot parse expression '{expression}': {ex}") from ex
  unknown = expr.free_symbols - {t}
  if unknown:
    raise ConfigError(
        f"Expression '{expression}' uses unknown symbols"
        f" {sorted(str(s) for s in unknown)}."
    )
  first = sympy.diff(expr, t)
  second = sympy.diff(first, t)
  return tuple(
      sympy.lambdify(t, e, modules="numpy") for e in (expr, first, second)
  )


class ExpressionWarp(CallableWarp):
  """Warp given as a closed-form expression, differentiated symbolically."""

  kind = "expression"

  def __init__(
      self, expression: str, interval: tuple[float, float] | None = None
  ):
    f, df, d2f = lambdify_expression(expression)
    super().__init__(f, df, d2f, interval=interval, label=expression)
    self.expression = expression

  def describe(self) -> dict:
    return {"kind": self.kind, "expression": self.expression}


class TableWarp(CallableWarp):
  """Warp sampled as a CSV table with columns t, f, df, d2f.

  The table must have a uniform step, increasing t and positive f. Values
  between samples come from cubic Hermite splines through (f, f') and
  (f', f'').
  """

  kind = "table"
  columns = ("t", "f", "df", "d2f")

  def __init__(self, path: str, rtol_step: float = 1e-6):
    try:
      table = pandas.read_csv(path)
    except (OSError, pandas.errors.ParserError) as ex:
      raise ConfigError(f"Cannot read warp table {path}: {ex}") from ex
    missing = [c for c in self.columns if c not in table.columns]
    if missing:
      raise ConfigError(f"Warp table {path} is missing columns {missing}.")
    t = table["t"].to_numpy(dtype=float)
    f = table["f"].to_numpy(dtype=float)
    if t.size < 4:
      raise ConfigError(f"Warp table {path} needs at least 4 rows.")
    steps = np.diff(t)
    if np.any(steps <= 0):
      bad = int(np.argmax(steps <= 0))
      raise ConfigError(
          f"Warp table {path}: t is not increasing at row {bad + 1}"
          f" (t={t[bad + 1]!r})."
      )
    if np.max(np.abs(steps - steps[0])) > rtol_step * abs(steps[0]):
      raise ConfigError(f"Warp table {path}: t step is not uniform.")
    if np.any(f <= 0):
      bad = int(np.argmax(f <= 0))
      raise DomainError(
          f"Warp table {path}: f(t) <= 0 at t={t[bad]!r}, the metric"
          " degenerates."
      )
    df = table["df"].to_numpy(dtype=float)
    d2f = table["d2f"].to_numpy(dtype=float)
    value_spline = interpolate.CubicHermiteSpline(t, f, df)
    slope_spline = interpolate.CubicHermiteSpline(t, df, d2f)
    logging.info("Loaded warp table %s with %s rows.", path, t.size)
    super().__init__(
        value_spline,
        slope_spline,
        slope_spline.derivative(),
        interval=(float(t[0]), float(t[-1])),
        label=str(path),
    )
    self.path = str(path)

  def validate_interval(self, n: int, t0: float, t1: float) -> None:
    super().validate_interval(n, t0, t1)
    lo, hi = self.interval
    if t0 < lo or t1 > hi:
      raise DomainError(
          f"Band interval [{t0}, {t1}] is not covered by the warp table"
          f" [{lo}, {hi}]."
      )

  def describe(self) -> dict:
    return {"kind": self.kind, "path": self.path}
