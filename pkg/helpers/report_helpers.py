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

"""Module to emit deterministic reports: canonical JSON, CSV tables and SVG
line plots."""

import enum
import functools
import json
import logging
import math
import pathlib

import matplotlib

matplotlib.use("Agg")
from matplotlib import pyplot
import numpy as np
import pandas

import models
from errors import BandWidthError, UsageError

FLOAT_FORMAT = "%.12g"
PLOT_DECIMALS = 6
PLOT_SIZE = (800, 500)
PLOT_DPI = 72
SVG_HASH_SALT = "bandwidth-verifier"


def canonical_value(value):
  """Converts a report value into plain JSON types with fixed precision.

  Floats are rounded to 12 significant digits; non-finite floats become
  the strings "inf", "-inf" and "nan".
  """
  if isinstance(value, dict):
    return {str(key): canonical_value(item) for key, item in value.items()}
  if isinstance(value, (list, tuple)):
    return [canonical_value(item) for item in value]
  if isinstance(value, np.ndarray):
    return [canonical_value(item) for item in value.tolist()]
  if isinstance(value, enum.Enum):
    return canonical_value(value.value)
  if isinstance(value, (bool, np.bool_)):
    return bool(value)
  if isinstance(value, (int, np.integer)):
    return int(value)
  if isinstance(value, (float, np.floating)):
    value = float(value)
    if not math.isfinite(value):
      return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    rounded = float(FLOAT_FORMAT % value)
    return 0.0 if rounded == 0 else rounded
  if value is None or isinstance(value, str):
    return value
  if hasattr(value, "to_dict"):
    return canonical_value(value.to_dict())
  raise TypeError(f"Cannot serialize {type(value).__name__} in a report.")


def canonical_json(document: dict) -> str:
  """Sorted keys, fixed float format, trailing newline."""
  return (
      json.dumps(
          canonical_value(document),
          sort_keys=True,
          indent=2,
          ensure_ascii=False,
          allow_nan=False,
      )
      + "\n"
  )


def _output_path(path) -> pathlib.Path:
  path = pathlib.Path(path)
  try:
    path.parent.mkdir(parents=True, exist_ok=True)
  except OSError as ex:
    raise BandWidthError(
        f"Cannot create output directory {path.parent}: {ex}"
    ) from ex
  return path


def write_json(document: dict, path) -> pathlib.Path:
  path = _output_path(path)
  try:
    path.write_text(canonical_json(document), encoding="utf-8")
  except OSError as ex:
    raise BandWidthError(f"Cannot write report {path}: {ex}") from ex
  logging.info("Wrote %s", path)
  return path


def write_csv(frame: pandas.DataFrame, path) -> pathlib.Path:
  """Writes a table with the report float format and a fixed line ending."""
  path = _output_path(path)
  try:
    frame.to_csv(
        path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
  except OSError as ex:
    raise BandWidthError(f"Cannot write table {path}: {ex}") from ex
  logging.info("Wrote %s", path)
  return path


def fields_frame(fields: list[models.GridField1D]) -> pandas.DataFrame:
  """One column per field when all share a grid, long format otherwise."""
  first = fields[0]
  shared = all(
      f.values.size == first.values.size
      and np.allclose(f.t, first.t, rtol=0, atol=1e-12)
      for f in fields
  )
  if shared:
    frame = pandas.DataFrame({"t": first.t})
    for f in fields:
      frame[f.name] = f.values
    return frame
  return pandas.concat(
      [
          pandas.DataFrame({"field": f.name, "t": f.t, "value": f.values})
          for f in fields
      ],
      ignore_index=True,
  )


def max_gap(fields: list[models.GridField1D]) -> float | None:
  """Largest pointwise gap between the first two fields, when comparable."""
  if len(fields) < 2:
    return None
  a, b = fields[0], fields[1]
  if a.values.size != b.values.size or not np.allclose(a.t, b.t, atol=1e-12):
    return None
  gap = np.abs(a.values - b.values)
  gap = gap[np.isfinite(gap)]
  return float(np.max(gap)) if gap.size else None


@functools.cache
def _configure_matplotlib() -> None:
  matplotlib.rcParams["svg.hashsalt"] = SVG_HASH_SALT
  matplotlib.rcParams["svg.fonttype"] = "none"
  matplotlib.rcParams["path.simplify"] = False


def emit_plot(
    fields: list[models.GridField1D],
    path,
    title: str = "",
    compare: bool = True,
) -> tuple[pathlib.Path, pathlib.Path]:
  """Writes an SVG line plot of the fields and the CSV of their samples.

  Args:
    fields: at least one GridField1D.
    path: SVG path; the CSV goes next to it with a .csv suffix.
    title: optional plot title.
    compare: annotate the max gap between the first two fields.
  Returns:
    (svg path, csv path).
  """
  if not fields:
    raise UsageError("emit_plot needs at least one field.")
  _configure_matplotlib()
  svg_path = _output_path(path)
  csv_path = write_csv(fields_frame(fields), svg_path.with_suffix(".csv"))

  width, height = PLOT_SIZE
  figure, axes = pyplot.subplots(
      figsize=(width / PLOT_DPI, height / PLOT_DPI), dpi=PLOT_DPI
  )
  try:
    for f in fields:
      values = np.round(f.values, PLOT_DECIMALS)
      axes.plot(np.round(f.t, PLOT_DECIMALS), values, label=f.name)
    gap = max_gap(fields) if compare else None
    if gap is not None:
      axes.annotate(
          f"max gap {fields[0].name} - {fields[1].name}: {gap:.3g}",
          xy=(0.02, 0.95),
          xycoords="axes fraction",
      )
    axes.set_xlabel("t")
    axes.legend(loc="lower right")
    if title:
      axes.set_title(title)
    figure.savefig(svg_path, format="svg", metadata={"Date": None})
  except OSError as ex:
    raise BandWidthError(f"Cannot write plot {svg_path}: {ex}") from ex
  finally:
    pyplot.close(figure)
  logging.info("Wrote %s", svg_path)
  return svg_path, csv_path
