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

"""Module that defines the run parameters"""

import json
import math
import pathlib

import numpy as np

import models
from errors import ConfigError
from warps import custom_warps
from warps import warp_registry

DEFAULT_BAND = {"n": 3, "t0": -0.7, "t1": 0.7, "warp": {"kind": "cosine"}}
DEFAULT_K = {"mode": "umbilic", "lambda": 0.0}

FLOAT_KEYS = ("sigma", "lambda", "t_minus", "t_plus", "eps", "plateau",
              "re_bound", "tol", "leaf_t")
INT_KEYS = ("grid_n", "lattice_n", "seed", "trials")
BOOL_KEYS = ("printed_sign", "quiet", "verbose")
FLAT_BAND_KEYS = ("n", "interval", "warp")
ETA_KEYS = (
    "c", "t_init", "eta_init", "t_min", "t_max", "step", "on_blow_up", "path"
)


class Configuration:
  """Class that stores all parameters of a verifier run."""

  def __init__(self):
    """Initialize with the defaults of every parameter.

    Defaults live here rather than in module constants so that a run is
    fully described by to_dict().
    """
    # band and second fundamental form
    self.band: dict = dict(DEFAULT_BAND)
    self.k: dict = dict(DEFAULT_K)

    # width estimate
    self.sigma: float | None = None  # catalog sigma when None
    self.lam: float | None = None  # taken from k when None
    self.check_mode: str = models.CheckMode.CMC.value
    self.branch: str = models.Branch.ABOVE.value
    self.t_minus: float | None = None
    self.t_plus: float | None = None
    self.tol: float = 1e-9

    # potentials
    self.eps: float = 0.0
    self.plateau: float = 0.0
    self.variant: str = models.PotentialVariant.RIGID.value
    self.re_bound: float = 0.0

    # solvers
    self.grid_n: int = 2001
    self.lattice_n: int = 16
    self.leaf_t: float | None = None  # band midpoint when None
    self.p: float | str = "theta"
    self.printed_sign: bool = False
    self.eta: dict = {}

    # run
    self.seed: int = 42
    self.trials: int = 500
    self.out_dir: str = "out"
    self.quiet: bool = False
    self.verbose: bool = False

  def set_band(self, n: int, t0: float, t1: float, warp: dict) -> None:
    """Set the band T^(n-1) x [t0, t1] and its warp description.

    Args:
      n: dimension of the band.
      t0: lower end of the interval.
      t1: upper end of the interval.
      warp: warp description, e.g. {"kind": "cosine"}.
    """
    if not isinstance(warp, dict):
      raise ConfigError(f"Warp must be a JSON object, got {warp!r}.")
    self.band = {"n": n, "t0": t0, "t1": t1, "warp": dict(warp)}

  def set_extrinsic(self, k: dict) -> None:
    """Set the second fundamental form.

    Args:
      k: {"mode": "umbilic", "lambda": x}, {"mode": "conformal", "psi":
         expr} or {"mode": "diagonal", "a": expr, "b": expr} with
         expressions in t.
    """
    if not isinstance(k, dict) or "mode" not in k:
      raise ConfigError(f"k must be a JSON object with a 'mode', got {k!r}.")
    allowed = {
        "umbilic": {"mode", "lambda"},
        "conformal": {"mode", "psi"},
        "diagonal": {"mode", "a", "b"},
    }
    if k["mode"] not in allowed:
      raise ConfigError(
          f"Unknown k mode '{k['mode']}', expected one of {sorted(allowed)}."
      )
    extra = set(k) - allowed[k["mode"]]
    if extra:
      raise ConfigError(f"Unknown keys {sorted(extra)} for k mode {k['mode']}.")
    self.k = dict(k)

  def set_width_params(
      self,
      sigma: float | None,
      lam: float | None,
      t_minus: float | None,
      t_plus: float | None,
      check_mode: str = models.CheckMode.CMC.value,
      branch: str = models.Branch.ABOVE.value,
      tol: float = 1e-9,
  ) -> None:
    """Set the hypotheses of the width estimate.

    Args:
      sigma: energy bound, the saturating catalog value when None.
      lam: lambda (cmc) or Lambda (sup_trace), from k when None.
      t_minus: t-.
      t_plus: t+.
      check_mode: "cmc" or "sup_trace".
      branch: "t>c" or "t<c" for unbounded eta domains.
      tol: margin tolerance.
    """
    self.sigma = sigma
    self.lam = lam
    self.t_minus = t_minus
    self.t_plus = t_plus
    self.check_mode = _enum_value(models.CheckMode, check_mode, "check_mode")
    self.branch = _enum_value(models.Branch, branch, "branch")
    self.tol = tol

  def set_potential_params(
      self, eps: float, plateau: float, variant: str, re_bound: float
  ) -> None:
    """Set the width potential used by the Callias certificate."""
    self.eps = eps
    self.plateau = plateau
    self.variant = _enum_value(models.PotentialVariant, variant, "variant")
    self.re_bound = re_bound

  def set_run_params(
      self,
      seed: int,
      trials: int,
      out_dir: str,
      quiet: bool = False,
      verbose: bool = False,
  ) -> None:
    self.seed = seed
    self.trials = trials
    self.out_dir = out_dir
    self.quiet = quiet
    self.verbose = verbose

  def to_dict(self) -> dict:
    """Canonical form: every key, JSON types only."""
    document = {
        "band": self.band,
        "k": self.k,
        "sigma": self.sigma,
        "lambda": self.lam,
        "check_mode": self.check_mode,
        "branch": self.branch,
        "t_minus": self.t_minus,
        "t_plus": self.t_plus,
        "tol": self.tol,
        "eps": self.eps,
        "plateau": self.plateau,
        "variant": self.variant,
        "re_bound": self.re_bound,
        "grid_n": self.grid_n,
        "lattice_n": self.lattice_n,
        "leaf_t": self.leaf_t,
        "p": self.p,
        "printed_sign": self.printed_sign,
        "eta": self.eta,
        "seed": self.seed,
        "trials": self.trials,
        "out_dir": self.out_dir,
        "quiet": self.quiet,
        "verbose": self.verbose,
    }
    return dict(sorted(document.items()))

  def update(self, values: dict) -> None:
    """Overrides parameters from a dict of canonical keys.

    None values are skipped so that unset command-line flags keep the
    JSON value. The band may also be given flat, as top-level "n",
    "interval": [t0, t1] and "warp". Unknown keys are rejected.
    """
    values = _nest_band(values)
    known = set(self.to_dict())
    unknown = set(values) - known
    if unknown:
      raise ConfigError(f"Unknown configuration keys {sorted(unknown)}.")
    for key, value in values.items():
      if value is None:
        continue
      if key == "band":
        if not isinstance(value, dict):
          raise ConfigError(f"band must be a JSON object, got {value!r}.")
        extra = set(value) - {"n", "t0", "t1", "warp"}
        if extra:
          raise ConfigError(f"Unknown band keys {sorted(extra)}.")
        merged = {**self.band, **value}
        self.set_band(merged["n"], merged["t0"], merged["t1"], merged["warp"])
      elif key == "k":
        self.set_extrinsic(value)
      elif key == "eta":
        if not isinstance(value, dict) or set(value) - set(ETA_KEYS):
          raise ConfigError(
              f"eta must be an object with keys among {list(ETA_KEYS)}."
          )
        self.eta = dict(value)
      elif key in FLOAT_KEYS:
        setattr(self, "lam" if key == "lambda" else key, _number(key, value))
      elif key in INT_KEYS:
        setattr(self, key, _integer(key, value))
      elif key in BOOL_KEYS:
        if not isinstance(value, bool):
          raise ConfigError(f"{key} must be true or false, got {value!r}.")
        setattr(self, key, value)
      elif key == "check_mode":
        self.check_mode = _enum_value(models.CheckMode, value, key)
      elif key == "branch":
        self.branch = _enum_value(models.Branch, value, key)
      elif key == "variant":
        self.variant = _enum_value(models.PotentialVariant, value, key)
      elif key == "p":
        self.p = _profile_value(value)
      else:
        self.out_dir = str(value)

  @classmethod
  def from_dict(cls, document: dict) -> "Configuration":
    if not isinstance(document, dict):
      raise ConfigError("A configuration must be a JSON object.")
    config = cls()
    config.update(document)
    return config

  @classmethod
  def from_json_file(cls, path: str) -> "Configuration":
    try:
      document = json.loads(pathlib.Path(path).read_text(encoding="utf-8"))
    except OSError as ex:
      raise ConfigError(f"Cannot read configuration {path}: {ex}") from ex
    except json.JSONDecodeError as ex:
      raise ConfigError(f"Configuration {path} is not valid JSON: {ex}") from ex
    return cls.from_dict(document)

  def build_band(self) -> models.WarpedBandSpec:
    """The WarpedBandSpec of the band description."""
    n = _integer("band.n", self.band.get("n"))
    t0 = _number("band.t0", self.band.get("t0"))
    t1 = _number("band.t1", self.band.get("t1"))
    warp = warp_registry.build_warp(self.band.get("warp") or {}, n)
    return models.WarpedBandSpec(n=n, t0=t0, t1=t1, warp=warp)

  def build_extrinsic(self) -> models.ExtrinsicSpec:
    """The ExtrinsicSpec of the k description."""
    mode = self.k["mode"]
    if mode == "umbilic":
      return models.ExtrinsicSpec.umbilic(
          _number("k.lambda", self.k.get("lambda", 0.0))
      )
    if mode == "conformal":
      psi, dpsi, _ = custom_warps.lambdify_expression(str(self.k["psi"]))
      return models.ExtrinsicSpec.conformal(psi, dpsi, label=dict(self.k))
    a, da, _ = custom_warps.lambdify_expression(str(self.k["a"]))
    b, db, _ = custom_warps.lambdify_expression(str(self.k["b"]))
    return models.ExtrinsicSpec.diagonal(a, b, da, db, label=dict(self.k))

  def build_profile(self):
    """The prescribed expansion p: a number, "theta" or an expression."""
    if not isinstance(self.p, str) or self.p == "theta":
      return self.p
    fn, dfn, _ = custom_warps.lambdify_expression(self.p)
    return (
        lambda t: np.broadcast_to(fn(t), np.shape(t)).astype(float),
        lambda t: np.broadcast_to(dfn(t), np.shape(t)).astype(float),
    )


def _nest_band(values: dict) -> dict:
  """Moves flat band keys under "band"; interval becomes t0 and t1."""
  flat = {key: values[key] for key in FLAT_BAND_KEYS if key in values}
  if not flat:
    return values
  band = values.get("band") or {}
  if not isinstance(band, dict):
    raise ConfigError(f"band must be a JSON object, got {band!r}.")
  band = dict(band)
  if "interval" in flat:
    interval = flat.pop("interval")
    if not isinstance(interval, (list, tuple)) or len(interval) != 2:
      raise ConfigError(f"interval must be [t0, t1], got {interval!r}.")
    band["t0"], band["t1"] = interval
  band.update(flat)
  nested = {
      key: value for key, value in values.items() if key not in FLAT_BAND_KEYS
  }
  nested["band"] = band
  return nested


def _number(key: str, value) -> float:
  if isinstance(value, bool):
    raise ConfigError(f"{key} must be a number, got {value!r}.")
  try:
    return float(value)
  except (TypeError, ValueError) as ex:
    raise ConfigError(f"{key} must be a number, got {value!r}.") from ex


def _integer(key: str, value) -> int:
  number = _number(key, value)
  if not math.isfinite(number) or number != int(number):
    raise ConfigError(f"{key} must be an integer, got {value!r}.")
  return int(number)


def _profile_value(value) -> float | str:
  """Numbers (also given as strings) become floats, the rest stays text."""
  if not isinstance(value, str):
    return _number("p", value)
  try:
    return float(value)
  except ValueError:
    return value.strip()


def _enum_value(enum_cls, value, key: str) -> str:
  try:
    return enum_cls(value).value
  except ValueError as ex:
    raise ConfigError(
        f"{key} must be one of {[e.value for e in enum_cls]}, got {value!r}."
    ) from ex
