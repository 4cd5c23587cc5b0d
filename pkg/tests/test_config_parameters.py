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

"""Module to test the run parameters"""

import json
from dataclasses import dataclass

import numpy as np
import pytest

import models
from configuration import Configuration
from errors import ConfigError
from utils import build_run_config, parse_args


@dataclass
class ArgsMock:
  """Mock class to define params"""

  config: str | None = None
  out: str | None = None
  seed: int | None = None
  quiet: bool | None = None
  verbose: bool | None = None
  # width flags
  sigma: float | None = None
  lam: float | None = None
  tminus: float | None = None
  tplus: float | None = None
  grid: int | None = None
  mode: str | None = None
  tol: float | None = None


def test_default_config_builds_the_cosine_band():
  """The defaults describe the positive scalar rigid band."""
  config = build_run_config(ArgsMock())
  band = config.build_band()
  assert band.warp.kind == "cosine"
  assert (band.n, band.t0, band.t1) == (3, -0.7, 0.7)
  assert config.build_extrinsic().mode == models.ExtrinsicMode.UMBILIC
  assert config.sigma is None
  assert config.seed == 42
  assert config.out_dir == "out"


def test_flags_override_the_json_file(tmp_path):
  path = tmp_path / "run.json"
  path.write_text(
      json.dumps({
          "band": {"n": 3, "t0": 0.5, "t1": 1.5, "warp": {"kind": "sinh"}},
          "sigma": -6.0,
          "tol": 1e-8,
          "grid_n": 501,
      }),
      encoding="utf-8",
  )
  args = ArgsMock(config=str(path), sigma=-5.0, grid=101, out="reports")
  config = build_run_config(args)

  assert config.sigma == -5.0
  assert config.grid_n == 101
  assert config.tol == 1e-8
  assert config.out_dir == "reports"
  assert config.build_band().warp.kind == "sinh"


def test_round_trip_through_to_dict():
  config = Configuration()
  config.set_width_params(6.0, 0.0, -0.7, 0.7, check_mode="sup_trace")
  config.set_potential_params(0.04, 0.1, "strict", 0.2)
  config.set_run_params(7, 10, "elsewhere", quiet=True)
  document = config.to_dict()
  assert list(document) == sorted(document)
  assert Configuration.from_dict(document).to_dict() == document


def test_unknown_keys_are_rejected():
  with pytest.raises(ConfigError, match="Unknown configuration keys"):
    Configuration.from_dict({"sigmaa": 6.0})
  with pytest.raises(ConfigError):
    Configuration.from_dict({"band": {"n": 3, "width": 2.0}})
  with pytest.raises(ConfigError):
    Configuration.from_dict({"k": {"mode": "umbilic", "psi": "t"}})


@pytest.mark.parametrize(
    "document",
    [
        {"sigma": "six"},
        {"grid_n": 10.5},
        {"quiet": "yes"},
        {"variant": "loose"},
        {"check_mode": "mean"},
        {"eta": {"speed": 1.0}},
        {"k": {"mode": "shear"}},
        {"interval": [-0.9]},
        {"interval": "wide"},
        {"n": 3, "band": [1, 2]},
    ],
)
def test_bad_values_are_config_errors(document):
  with pytest.raises(ConfigError):
    Configuration.from_dict(document)


def test_invalid_json_file(tmp_path):
  path = tmp_path / "broken.json"
  path.write_text("{", encoding="utf-8")
  with pytest.raises(ConfigError):
    Configuration.from_json_file(str(path))
  with pytest.raises(ConfigError):
    Configuration.from_json_file(str(tmp_path / "missing.json"))


def test_expression_extrinsic_and_profile():
  config = Configuration.from_dict({
      "k": {"mode": "diagonal", "a": "t**2", "b": "0.5"},
      "p": "1 + t",
  })
  k = config.build_extrinsic()
  a, b, da, db = k.components(np.array([0.0, 2.0]), 3)
  assert np.allclose(a, [0.0, 4.0])
  assert np.allclose(b, 0.5)
  assert np.allclose(da, [0.0, 4.0])
  assert np.allclose(db, 0.0)
  p, dp = config.build_profile()
  assert np.allclose(p(np.array([1.0, 2.0])), [2.0, 3.0])
  assert np.allclose(dp(np.array([1.0, 2.0])), 1.0)


def test_numeric_profile_strings():
  assert Configuration.from_dict({"p": "0.25"}).build_profile() == 0.25
  assert Configuration.from_dict({"p": "theta"}).build_profile() == "theta"


def test_subcommand_flags_reach_the_config():
  args = parse_args([
      "--seed", "5", "solve-eta", "--sigma", "6", "--lambda", "0.5",
      "--n", "3", "--step", "0.001", "--t-min", "-0.5", "--out", "x",
  ])
  config = build_run_config(args)
  assert config.seed == 5
  assert config.lam == 0.5
  assert config.eta == {"step": 0.001, "t_min": -0.5}
  assert config.out_dir == "x"
  assert config.band["n"] == 3


def test_flat_band_document():
  """n, interval and warp may sit at the top level of the document."""
  config = Configuration.from_dict({
      "n": 3,
      "interval": [-0.9, 0.9],
      "warp": {"kind": "cosine"},
      "k": {"mode": "umbilic", "lambda": 0.0},
  })
  band = config.build_band()
  assert (band.n, band.t0, band.t1) == (3, -0.9, 0.9)
  assert band.warp.kind == "cosine"
  k = config.build_extrinsic()
  assert k.mode == models.ExtrinsicMode.UMBILIC
  assert config.to_dict()["band"]["t0"] == -0.9
  assert "interval" not in config.to_dict()


def test_flat_interval_keeps_the_nested_warp():
  config = Configuration.from_dict({
      "band": {"n": 3, "t0": 0.5, "t1": 1.5, "warp": {"kind": "sinh"}},
      "interval": [1.0, 2.0],
  })
  band = config.build_band()
  assert (band.t0, band.t1) == (1.0, 2.0)
  assert band.warp.kind == "sinh"


def test_sign_and_eta_path_flags():
  args = parse_args(["harmonic", "--paper-sign"])
  assert build_run_config(args).printed_sign is True
  args = parse_args(["harmonic", "--printed-sign"])
  assert build_run_config(args).printed_sign is True
  assert build_run_config(parse_args(["harmonic"])).printed_sign is False
  for flag in ("closed", "numeric", "both"):
    args = parse_args(["solve-eta", f"--{flag}"])
    assert build_run_config(args).eta["path"] == flag
  assert "path" not in build_run_config(parse_args(["solve-eta"])).eta
