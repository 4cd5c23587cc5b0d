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

"""Module to test the command line runs end to end"""

import json

import numpy as np
import pandas
import pytest

import main


def _run(tmp_path, *args):
  return main.run(["--out", str(tmp_path), "--quiet", *args])


def _load(tmp_path, name):
  return json.loads((tmp_path / name).read_text(encoding="utf-8"))


def _write_config(tmp_path, document):
  path = tmp_path / "config.json"
  path.write_text(json.dumps(document), encoding="utf-8")
  return str(path)


def test_examples_saturate(tmp_path):
  assert _run(tmp_path, "examples") == 0
  report = _load(tmp_path, "examples.json")
  assert [b["band"]["warp"]["kind"] for b in report["bands"]] == [
      "cosine",
      "sinh",
      "power",
  ]
  assert all(b["verdict"] == "tight" for b in report["bands"])
  assert all(b["callias"]["verdict"] == "tight" for b in report["bands"])
  assert report["breaches"] == []
  assert any("-n(n-1)" in note for note in report["notes"])


def test_reports_are_byte_identical(tmp_path):
  assert _run(tmp_path, "check-width") == 0
  first = (tmp_path / "check-width.json").read_bytes()
  assert _run(tmp_path, "check-width") == 0
  assert (tmp_path / "check-width.json").read_bytes() == first


def test_check_width_verdicts(tmp_path):
  assert _run(tmp_path, "check-width") == 0
  assert _load(tmp_path, "check-width.json")["certificate"]["verdict"] == (
      "tight"
  )

  args = ("check-width", "--tminus", "-0.9", "--tplus", "0.9")
  assert _run(tmp_path, *args) == 0
  certificate = _load(tmp_path, "check-width.json")["certificate"]
  assert certificate["verdict"] == "consistent"
  assert certificate["conclusion"] == pytest.approx(-0.4)

  assert _run(tmp_path, "check-width", "--sigma", "6.1") == 2
  certificate = _load(tmp_path, "check-width.json")["certificate"]
  assert certificate["verdict"] == "hypothesis-violated"
  assert certificate["dec_margin"] == pytest.approx(-0.05)


def _cosine_document(t0, t1):
  return {
      "n": 3,
      "interval": [t0, t1],
      "warp": {"kind": "cosine"},
      "k": {"mode": "umbilic", "lambda": 0.0},
  }


@pytest.mark.parametrize(
    "interval, sigma, code, verdict",
    [
        ((-0.7, 0.7), "6", 0, "tight"),
        ((-0.5, 0.5), "6", 0, "consistent"),
        ((-0.7, 0.7), "6.1", 2, "hypothesis-violated"),
    ],
)
def test_check_width_from_flat_documents(
    tmp_path, interval, sigma, code, verdict
):
  path = _write_config(tmp_path, _cosine_document(*interval))
  args = ("--config", path, "check-width", "--sigma", sigma,
          "--tminus", "-0.7", "--tplus", "0.7")
  assert _run(tmp_path, *args) == code
  report = _load(tmp_path, "check-width.json")
  certificate = report["certificate"]
  assert certificate["verdict"] == verdict
  assert report["config"]["band"]["t0"] == interval[0]
  if verdict == "consistent":
    assert certificate["conclusion"] == pytest.approx(-0.4)
  if verdict == "hypothesis-violated":
    assert certificate["dec_margin"] == pytest.approx(-0.05)


def test_flat_document_band_is_tight(tmp_path):
  path = _write_config(tmp_path, _cosine_document(-0.9, 0.9))
  assert _run(tmp_path, "--config", path, "check-width") == 0
  certificate = _load(tmp_path, "check-width.json")["certificate"]
  assert certificate["verdict"] == "tight"


def test_harmonic_printed_sign_flag(tmp_path):
  assert _run(tmp_path, "harmonic", "--paper-sign") == 0
  inequality = _load(tmp_path, "harmonic.json")["inequality"]
  assert inequality["printed_sign"] is True
  assert inequality["bulk_hessian"] > 1e-3
  assert inequality["contradiction"] is False


def test_harmonic_on_the_narrow_band(tmp_path):
  """phi = t - 0.2 keeps the lower boundary term negative while the
  upper one turns positive, so no contradiction is reported."""
  path = _write_config(tmp_path, _cosine_document(-0.5, 0.5))
  args = ("--config", path, "harmonic", "--sigma", "6",
          "--tminus", "-0.7", "--tplus", "0.7")
  assert _run(tmp_path, *args) == 2
  inequality = _load(tmp_path, "harmonic.json")["inequality"]
  assert inequality["hypotheses_hold"] is False
  assert inequality["contradiction"] is False
  assert inequality["boundary_minus_closed"] < 0
  assert inequality["boundary_plus_closed"] > 0
  assert inequality["bulk_bound"] == pytest.approx(0.0, abs=1e-8)
  assert inequality["bulk_total"] >= inequality["bulk_bound"]


def test_check_width_plot(tmp_path):
  assert _run(tmp_path, "check-width", "--plot") == 0
  assert (tmp_path / "check-width.svg").exists()
  assert (tmp_path / "check-width.csv").exists()


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["examples", "--bogus"],
        ["check-width", "--mode", "mean"],
        ["check-width", "--sigma", "six"],
        ["frobnicate"],
    ],
)
def test_usage_errors(tmp_path, args):
  assert _run(tmp_path, *args) == 64


def test_unknown_config_key(tmp_path):
  path = _write_config(tmp_path, {"sigmaa": 6.0})
  assert _run(tmp_path, "--config", path, "check-width") == 65


def test_degenerate_warp(tmp_path):
  path = _write_config(
      tmp_path,
      {
          "band": {
              "n": 3,
              "t0": -1.0,
              "t1": 1.0,
              "warp": {"kind": "expression", "expression": "t"},
          },
          "sigma": 1.0,
      },
  )
  assert _run(tmp_path, "--config", path, "check-width") == 65


def test_harmonic_needs_three_dimensions(tmp_path):
  path = _write_config(
      tmp_path,
      {"band": {"n": 4, "t0": -0.5, "t1": 0.5, "warp": {"kind": "cosine"}}},
  )
  assert _run(tmp_path, "--config", path, "harmonic") == 65


def test_solve_eta_with_rk4(tmp_path):
  code = _run(
      tmp_path,
      "solve-eta",
      "--sigma", "6",
      "--lambda", "0",
      "--n", "3",
      "--t-min", "-0.9",
      "--t-max", "0.9",
      "--step", "1e-3",
  )
  assert code == 0
  report = _load(tmp_path, "solve-eta.json")
  assert report["eta"]["case"] == "Tan"
  assert report["residual_max"] <= 1e-9
  assert report["numeric"]["blow_up"] is False
  assert report["path"] == "both"
  assert report["max_deviation"] <= 1e-6
  assert (tmp_path / "solve-eta.csv").exists()


def test_solve_eta_closed_writes_the_residual(tmp_path):
  code = _run(
      tmp_path,
      "solve-eta",
      "--sigma", "6",
      "--lambda", "0",
      "--n", "3",
      "--t-min", "-0.9",
      "--t-max", "0.9",
      "--closed",
  )
  assert code == 0
  report = _load(tmp_path, "solve-eta.json")
  assert report["path"] == "closed"
  assert report["eta"]["case"] == "Tan"
  assert report["residual_max"] <= 1e-10
  assert "numeric" not in report
  frame = pandas.read_csv(tmp_path / "solve-eta.csv")
  assert list(frame.columns)[:2] == ["t", "eta"]
  assert "residual" in frame.columns
  assert frame["residual"].abs().max() <= 1e-10
  assert np.allclose(
      frame["eta"], -2 * np.tan(1.5 * frame["t"]), rtol=0, atol=1e-10
  )


def test_solve_eta_numeric_only(tmp_path):
  code = _run(
      tmp_path,
      "solve-eta",
      "--sigma", "6",
      "--lambda", "0",
      "--n", "3",
      "--t-min", "-0.9",
      "--t-max", "0.9",
      "--step", "1e-3",
      "--numeric",
  )
  assert code == 0
  report = _load(tmp_path, "solve-eta.json")
  assert report["path"] == "numeric"
  assert "eta" not in report
  assert "max_deviation" not in report
  assert report["numeric"]["blow_up"] is False
  assert report["numeric"]["halving_error"] <= 1e-6
  assert report["numeric"]["residual_max"] <= 1e-2
  frame = pandas.read_csv(tmp_path / "solve-eta.csv")
  assert list(frame.columns) == ["t", "eta", "residual"]


def test_solve_eta_both_reports_the_deviation(tmp_path):
  code = _run(
      tmp_path,
      "solve-eta",
      "--sigma", "6",
      "--lambda", "0",
      "--n", "3",
      "--t-min", "-0.9",
      "--t-max", "0.9",
      "--step", "1e-3",
      "--both",
  )
  assert code == 0
  report = _load(tmp_path, "solve-eta.json")
  assert report["path"] == "both"
  assert report["max_deviation"] <= 1e-6
  assert report["residual_max"] <= 1e-10
  frame = pandas.read_csv(tmp_path / "solve-eta.csv")
  assert list(frame.columns) == [
      "t",
      "eta",
      "eta_rk4",
      "residual",
      "residual_rk4",
      "deviation",
  ]
  assert frame["deviation"].max() <= 1e-6


def test_solve_eta_paths_are_exclusive(tmp_path):
  assert _run(tmp_path, "solve-eta", "--closed", "--numeric") == 64


def test_solve_eta_plot_compares_with_mean_curvature(tmp_path):
  assert _run(tmp_path, "solve-eta", "--plot") == 0
  report = _load(tmp_path, "solve-eta.json")
  assert report["eta_h_gap"] <= 1e-10
  assert (tmp_path / "solve-eta.svg").exists()


def test_stability(tmp_path):
  assert _run(tmp_path, "stability", "--t", "0.2", "--lattice", "16") == 0
  report = _load(tmp_path, "stability.json")
  assert abs(report["eigen"]["lambda1"]) <= 1e-8
  assert report["leaf_t"] == 0.2
  assert (tmp_path / "stability_eigenfunction.csv").exists()


def test_harmonic(tmp_path):
  assert _run(tmp_path, "harmonic") == 0
  report = _load(tmp_path, "harmonic.json")
  assert report["inequality"]["hypotheses_hold"] is True
  assert abs(report["inequality"]["slack"]) <= 1e-6
  assert (tmp_path / "harmonic.csv").exists()


def test_callias(tmp_path):
  assert _run(tmp_path, "callias-cert") == 0
  report = _load(tmp_path, "callias-cert.json")
  assert report["certificate"]["verdict"] == "tight"
  assert report["input"]["admissible"] is False
  assert _run(tmp_path, "callias-cert", "--re-bound", "0.1") == 2


def test_callias_strict_on_a_wide_band(tmp_path):
  path = _write_config(tmp_path, _cosine_document(-0.8, 0.8))
  args = ("--config", path, "callias-cert", "--sigma", "6",
          "--tminus", "-0.7", "--tplus", "0.7", "--eps", "0.04",
          "--plateau", "0.05", "--variant", "strict")
  assert _run(tmp_path, *args) == 2
  report = _load(tmp_path, "callias-cert.json")
  assert report["input"]["admissible"] is True
  certificate = report["certificate"]
  assert certificate["bulk_margin"] > 0
  assert certificate["boundary_margin_plus"] < 0
  assert certificate["verdict"] == "hypothesis-violated"


def test_sweep_is_reproducible(tmp_path):
  args = ("--seed", "3", "sweep", "--trials", "20", "--grid", "201")
  assert _run(tmp_path, *args) == 0
  first = (tmp_path / "sweep.json").read_bytes()
  assert _run(tmp_path, *args) == 0
  assert (tmp_path / "sweep.json").read_bytes() == first
  report = _load(tmp_path, "sweep.json")
  assert report["sweep"]["seed"] == 3
  assert report["sweep"]["trials"] == 20
