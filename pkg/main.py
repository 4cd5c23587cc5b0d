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

"""Module to execute the band-width verifier"""

import dataclasses
import logging
import pathlib
import sys
import time

import numpy as np

import models
import utils
from callias import callias_cert
from configuration import Configuration
from errors import BandWidthError, ConfigError, ConsistencyError, UsageError
from geometry import warped_geometry
from harmonic import harmonic3d
from helpers import generic_helpers
from helpers import grid_helpers
from helpers import report_helpers
from riccati import eta_riccati
from stability import stability_operator
from width_services import consistency_sweep
from width_services import width_checker

VERSION = "0.1.0"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

ETA_PATHS = ("closed", "numeric", "both")

EXAMPLE_BANDS = (
    {"n": 3, "t0": -0.7, "t1": 0.7, "warp": {"kind": "cosine"}},
    {"n": 3, "t0": 0.5, "t1": 1.5, "warp": {"kind": "sinh"}},
    {"n": 3, "t0": 0.5, "t1": 1.5, "warp": {"kind": "power"}},
)
EXAMPLE_TOLS = {
    "identity_residual": 1e-7,
    "eta_h_gap": 1e-10,
    "lambda1": 1e-8,
    "harmonic": 1e-6,
}


def exit_code(verdict: models.Verdict) -> int:
  """Exit code of a verdict: 2 hypothesis-violated, 3 theorem-violated or
  contradiction-certified, 0 otherwise."""
  if verdict == models.Verdict.HYPOTHESIS_VIOLATED:
    return 2
  if verdict in (
      models.Verdict.THEOREM_VIOLATED,
      models.Verdict.CONTRADICTION_CERTIFIED,
  ):
    return 3
  return 0


def _report(config: Configuration, command: str, **sections) -> dict:
  return {
      "command": command,
      "version": VERSION,
      "config": config.to_dict(),
      **sections,
  }


def _output(config: Configuration, name: str) -> pathlib.Path:
  return pathlib.Path(config.out_dir) / name


def _sigma(config: Configuration, band: models.WarpedBandSpec) -> float:
  if config.sigma is not None:
    return config.sigma
  sigma = warped_geometry.catalog_sigma(band)
  if sigma is None:
    raise ConfigError("sigma is required for non-catalog warps.")
  return sigma


def _t_pm(
    config: Configuration, band: models.WarpedBandSpec
) -> tuple[float, float]:
  t_minus = band.t0 if config.t_minus is None else config.t_minus
  t_plus = band.t1 if config.t_plus is None else config.t_plus
  return t_minus, t_plus


def _eta(
    config: Configuration,
    band: models.WarpedBandSpec,
    k: models.ExtrinsicSpec,
    sigma: float,
) -> models.EtaSolution:
  """Closed-form eta with the lambda of the CMC data."""
  grid = grid_helpers.grid_with_midpoints(band.t0, band.t1, config.grid_n)
  lam, _ = width_checker.width_checker.resolve_lambda(
      band, k, grid, models.CheckMode.CMC, config.lam
  )
  return eta_riccati.eta_closed(
      models.EtaParams(sigma=sigma, lam=lam, n=band.n),
      models.Branch(config.branch),
  )


def _eta_path(config: Configuration) -> str:
  """closed, numeric or both; RK4 joins in when only a step is given."""
  path = config.eta.get("path")
  if path is None:
    path = "both" if "step" in config.eta else "closed"
  if path not in ETA_PATHS:
    raise ConfigError(
        f"eta path must be one of {list(ETA_PATHS)}, got {path!r}."
    )
  return path


def _numeric_residual(
    numeric: models.GridField1D, params: models.EtaParams
) -> np.ndarray:
  """ODE residual on the RK4 grid, NaN past a blow-up."""
  finite = np.isfinite(numeric.values)
  residual = np.full(numeric.values.size, np.nan)
  if np.count_nonzero(finite) >= 5:
    residual[finite] = eta_riccati.ode_residual(
        numeric, params, check_monotone=False
    ).values
  return residual


def run_solve_eta(config: Configuration, args) -> int:
  """Closed-form and/or RK4 eta on a range with its ODE residual."""
  band = config.build_band()
  sigma = _sigma(config, band)
  if config.lam is not None:
    lam = config.lam
  elif config.k["mode"] == "umbilic":
    lam = float(config.k.get("lambda", 0.0))
  else:
    lam = 0.0
  path = _eta_path(config)
  params = models.EtaParams(
      sigma=sigma, lam=lam, n=band.n, c=float(config.eta.get("c", 0.0))
  )
  eta = eta_riccati.eta_closed(params, models.Branch(config.branch))
  lo = float(config.eta.get("t_min", band.t0))
  hi = float(config.eta.get("t_max", band.t1))
  sections = {"path": path, "params": params.to_dict()}

  if path == "closed":
    grid = grid_helpers.uniform_grid(lo, hi, config.grid_n)
    fields = [models.GridField1D.from_grid(grid, eta.value(grid), "eta")]
    if band.t0 <= lo and hi <= band.t1:
      fields.append(
          models.GridField1D.from_grid(
              grid, warped_geometry.mean_curvature(band, grid), "H"
          )
      )
    compare = len(fields) == 2
    sections["eta_h_gap"] = report_helpers.max_gap(fields)
  else:
    step = float(
        config.eta.get("step", (hi - lo) / max(config.grid_n - 1, 64))
    )
    t_init = float(config.eta.get("t_init", 0.5 * (lo + hi)))
    eta_init = float(config.eta.get("eta_init", eta.value(t_init)))
    numeric = eta_riccati.eta_solve_numeric(
        params,
        t_init,
        eta_init,
        (lo, hi),
        step,
        on_blow_up=config.eta.get("on_blow_up", "flag"),
    )
    grid = numeric.t
    numeric_residual = _numeric_residual(numeric, params)
    finite = np.isfinite(numeric_residual)
    sections["numeric"] = {
        **numeric.meta,
        "residual_max": (
            grid_helpers.pairwise_max(np.abs(numeric_residual[finite]))
            if finite.any()
            else None
        ),
    }
    rk4_name = "eta" if path == "numeric" else "eta_rk4"
    fields = [dataclasses.replace(numeric, name=rk4_name, meta={})]
    if path == "numeric":
      fields.append(
          models.GridField1D.from_grid(grid, numeric_residual, "residual")
      )
    else:
      closed = models.GridField1D.from_grid(grid, eta.value(grid), "eta")
      deviation = np.abs(numeric.values - closed.values)
      finite = np.isfinite(deviation)
      sections["max_deviation"] = (
          grid_helpers.pairwise_max(deviation[finite])
          if finite.any()
          else None
      )
      fields = [
          closed,
          *fields,
          models.GridField1D.from_grid(
              grid, numeric_residual, "residual_rk4"
          ),
          models.GridField1D.from_grid(grid, deviation, "deviation"),
      ]
    compare = path == "both"

  if path != "numeric":
    residual = eta_riccati.ode_residual(eta, params, grid)
    sections["eta"] = eta.to_dict()
    sections["residual_max"] = residual.meta["max_abs"]
    fields.insert(
        len(fields) if path == "closed" else 2,
        dataclasses.replace(residual, meta={}),
    )

  report_helpers.write_json(
      _report(config, "solve-eta", **sections),
      _output(config, "solve-eta.json"),
  )
  if args.plot:
    report_helpers.emit_plot(
        fields, _output(config, "solve-eta.svg"), title="eta", compare=compare
    )
  else:
    report_helpers.write_csv(
        report_helpers.fields_frame(fields), _output(config, "solve-eta.csv")
    )
  if not config.quiet:
    print(f"eta ({path}): {eta.case.value} on {eta.domain}")
  return 0


def run_check_width(config: Configuration, args) -> int:
  """Width certificate of the configured band."""
  band = config.build_band()
  k = config.build_extrinsic()
  sigma = _sigma(config, band)
  t_minus, t_plus = _t_pm(config, band)
  certificate = width_checker.width_checker.check_theorem(
      band,
      k,
      sigma,
      t_minus,
      t_plus,
      grid_n=config.grid_n,
      mode=models.CheckMode(config.check_mode),
      lam=config.lam,
      tol=config.tol,
      branch=models.Branch(config.branch),
  )
  notes = warped_geometry.discrepancy_notes(band)
  report_helpers.write_json(
      _report(config, "check-width", certificate=certificate, notes=notes),
      _output(config, "check-width.json"),
  )
  if args.plot:
    eta = eta_riccati.eta_closed(
        models.EtaParams(
            sigma=sigma, lam=certificate.details["lambda"], n=band.n
        ),
        models.Branch(config.branch),
    )
    potential = width_checker.width_checker.distance_potential(
        band, eta, t_minus, t_plus
    )
    grid = grid_helpers.uniform_grid(band.t0, band.t1, config.grid_n)
    report_helpers.emit_plot(
        [
            potential.sample(grid)["p"],
            models.GridField1D.from_grid(
                grid, warped_geometry.null_expansion(band, k, grid), "theta"
            ),
        ],
        _output(config, "check-width.svg"),
        title="p and theta",
    )
  if not config.quiet:
    generic_helpers.print_certificate(
        "Width certificate",
        {**certificate.margins(), "conclusion": certificate.conclusion},
        certificate.verdict,
        config.tol,
    )
  return exit_code(certificate.verdict)


def run_stability(config: Configuration, args) -> int:
  """Principal eigenvalue of the stability operator on one leaf."""
  del args
  band = config.build_band()
  k = config.build_extrinsic()
  leaf_t = (
      0.5 * (band.t0 + band.t1) if config.leaf_t is None else config.leaf_t
  )
  data = stability_operator.level_set_data(
      band, k, config.build_profile(), leaf_t
  )
  coeff = stability_operator.stability_zeroth_coeff(data, band.n)
  result = stability_operator.principal_eigenvalue(
      data, band.n, config.lattice_n
  )
  report_helpers.write_json(
      _report(
          config,
          "stability",
          leaf_t=leaf_t,
          zeroth_coeff=coeff,
          eigen=result,
          notes=[stability_operator.W_TERM_NOTE],
      ),
      _output(config, "stability.json"),
  )
  report_helpers.write_csv(
      result.to_frame(), _output(config, "stability_eigenfunction.csv")
  )
  if not config.quiet:
    print(f"lambda1 = {result.lambda1:.12g} (residual {result.residual:.3g})")
  return 0


def run_harmonic(config: Configuration, args) -> int:
  """Integral inequality of the spacetime harmonic reduction (n = 3)."""
  band = config.build_band()
  k = config.build_extrinsic()
  sigma = _sigma(config, band)
  t_minus, t_plus = _t_pm(config, band)
  eta = _eta(config, band, k, sigma)
  potential = width_checker.width_checker.distance_potential(
      band, eta, t_minus, t_plus
  )
  coeffs = harmonic3d.reduce_ode(band, k, potential)
  u = harmonic3d.solve_reduced(coeffs, config.grid_n)
  report = harmonic3d.verify_integral_inequality(
      band, k, sigma, potential, u=u, printed_sign=config.printed_sign,
      tol=config.tol,
  )
  frame = harmonic3d.harmonic_frame(u, coeffs, config.printed_sign)
  report_helpers.write_json(
      _report(
          config,
          "harmonic",
          inequality=report,
          residual=u.residual,
          monotone=u.monotone,
          notes=[harmonic3d.HESSIAN_SIGN_NOTE],
      ),
      _output(config, "harmonic.json"),
  )
  report_helpers.write_csv(frame, _output(config, "harmonic.csv"))
  if args.plot:
    report_helpers.emit_plot(
        [
            u.u,
            models.GridField1D.from_grid(
                frame["t"].to_numpy(), frame["normT"].to_numpy(), "normT"
            ),
        ],
        _output(config, "harmonic.svg"),
        title="u and |T|",
        compare=False,
    )
  if not config.quiet:
    print(
        f"boundary {report.boundary_total:.6g}, bulk {report.bulk_total:.6g},"
        f" contradiction {report.contradiction}"
    )
  if report.contradiction:
    return 3
  return 0 if report.hypotheses_hold else 2


def run_callias(config: Configuration, args) -> int:
  """Scalar certificate of the Callias estimate."""
  del args
  band = config.build_band()
  k = config.build_extrinsic()
  sigma = _sigma(config, band)
  t_minus, t_plus = _t_pm(config, band)
  eta = _eta(config, band, k, sigma)
  callias_input = callias_cert.build_callias_input(
      band,
      eta,
      t_minus,
      t_plus,
      eps=config.eps,
      plateau=config.plateau,
      re_bound=config.re_bound,
      variant=models.PotentialVariant(config.variant),
      grid_n=config.grid_n,
  )
  certificate = callias_cert.evaluate_certificate(
      band, k, callias_input, sigma, tol=config.tol
  )
  report_helpers.write_json(
      _report(
          config,
          "callias-cert",
          input=callias_input,
          certificate=certificate,
      ),
      _output(config, "callias-cert.json"),
  )
  if not config.quiet:
    generic_helpers.print_certificate(
        "Callias certificate",
        {
            "bulk_margin": certificate.bulk_margin,
            "boundary_margin_plus": certificate.boundary_margin_plus,
            "boundary_margin_minus": certificate.boundary_margin_minus,
        },
        certificate.verdict,
        config.tol,
    )
  return exit_code(certificate.verdict)


def _example_band(band_config: dict, tol: float) -> tuple[dict, list[str]]:
  """Every saturation check on one rigid band."""
  config = Configuration.from_dict({"band": band_config})
  band = config.build_band()
  k = models.ExtrinsicSpec.umbilic(0.0)
  sigma = warped_geometry.catalog_sigma(band)
  eta = eta_riccati.eta_closed(models.EtaParams(sigma=sigma, lam=0.0, n=band.n))
  grid = grid_helpers.uniform_grid(band.t0, band.t1, 1000)

  identity = warped_geometry.example_identity_residual(band).max_abs()
  gap = grid_helpers.pairwise_max(
      np.abs(eta.value(grid) - warped_geometry.mean_curvature(band, grid))
  )
  certificate = width_checker.width_checker.check_theorem(
      band, k, sigma, band.t0, band.t1, tol=tol
  )
  data = stability_operator.level_set_data(
      band, k, "theta", 0.5 * (band.t0 + band.t1)
  )
  eigen = stability_operator.principal_eigenvalue(data, band.n, 16)
  potential = width_checker.width_checker.distance_potential(
      band, eta, band.t0, band.t1
  )
  inequality = harmonic3d.verify_integral_inequality(band, k, sigma, potential)
  callias_input = callias_cert.build_callias_input(
      band, eta, band.t0, band.t1, variant=models.PotentialVariant.RIGID
  )
  callias = callias_cert.evaluate_certificate(
      band, k, callias_input, sigma, tol=tol
  )

  harmonic_max = max(
      abs(value)
      for key, value in inequality.to_dict().items()
      if isinstance(value, float)
  )
  breaches = []
  checks = {
      "identity_residual": identity,
      "eta_h_gap": gap,
      "lambda1": abs(eigen.lambda1),
      "harmonic": harmonic_max,
  }
  for name, value in checks.items():
    if not value <= EXAMPLE_TOLS[name]:
      breaches.append(f"{band.warp.kind}: {name}={value:.3g}")
  for name, verdict in (("width", certificate.verdict),
                        ("callias", callias.verdict)):
    if verdict != models.Verdict.TIGHT:
      breaches.append(f"{band.warp.kind}: {name} verdict {verdict.value}")

  section = {
      "band": band.describe(),
      "sigma": sigma,
      "checks": checks,
      "width": certificate,
      "stability": eigen,
      "harmonic": inequality,
      "callias": callias,
      "verdict": certificate.verdict,
  }
  return section, breaches


def run_examples(config: Configuration, args) -> int:
  """Saturation corpus of the three rigid bands."""
  del args
  sections, breaches, notes = [], [], []
  for band_config in EXAMPLE_BANDS:
    section, band_breaches = _example_band(band_config, config.tol)
    sections.append(section)
    breaches.extend(band_breaches)
    notes.extend(
        note["note"]
        for note in warped_geometry.discrepancy_notes(
            Configuration.from_dict({"band": band_config}).build_band()
        )
    )
  for note in notes:
    logging.warning(note)
  notes += [stability_operator.W_TERM_NOTE, harmonic3d.HESSIAN_SIGN_NOTE]
  report_helpers.write_json(
      _report(
          config,
          "examples",
          bands=sections,
          notes=notes,
          breaches=breaches,
          tolerances=EXAMPLE_TOLS,
      ),
      _output(config, "examples.json"),
  )
  if not config.quiet:
    for section in sections:
      generic_helpers.print_certificate(
          f"{section['band']['warp']['kind']} band",
          section["width"].margins(),
          section["verdict"],
          config.tol,
      )
  if breaches:
    raise ConsistencyError(f"Saturation corpus breached: {breaches}")
  return 0


def run_sweep(config: Configuration, args) -> int:
  """Seeded random width checks."""
  del args
  report = consistency_sweep.consistency_sweep(
      config.seed, config.trials, grid_n=config.grid_n, tol=config.tol
  )
  report_helpers.write_json(
      _report(config, "sweep", sweep=report), _output(config, "sweep.json")
  )
  if not config.quiet:
    print(f"Sweep counts: {report['counts']}")
  return 3 if report["violations"] else 0


COMMANDS = {
    "solve-eta": run_solve_eta,
    "check-width": run_check_width,
    "stability": run_stability,
    "harmonic": run_harmonic,
    "callias-cert": run_callias,
    "examples": run_examples,
    "sweep": run_sweep,
}


def _configure_logging(config: Configuration) -> None:
  level = logging.INFO
  if config.quiet:
    level = logging.WARNING
  elif config.verbose:
    level = logging.DEBUG
  logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def run(arg_list: list[str] | None = None) -> int:
  """Runs one subcommand and returns its exit code.

  Args:
    arg_list: A list of command line arguments

  """
  try:
    args = utils.parse_args(arg_list)
  except UsageError as ex:
    logging.error("%s", ex)
    return ex.exit_code
  except SystemExit as ex:
    return int(ex.code or 0)

  try:
    config = utils.build_run_config(args)
    _configure_logging(config)
    start_time = time.time()
    logging.info("Starting %s... ", args.command)
    code = COMMANDS[args.command](config, args)
    logging.info(
        "%s took %.2f s, exit code %s",
        args.command,
        time.time() - start_time,
        code,
    )
    return code
  except BandWidthError as ex:
    logging.error("%s: %s", type(ex).__name__, ex)
    return ex.exit_code
  except Exception as ex:
    logging.exception("Internal error: %s", ex)
    return 70


def main(arg_list: list[str] | None = None) -> None:
  """Command line entry point. See utils.parse_args for the flags."""
  sys.exit(run(arg_list))


if __name__ == "__main__":
  main()
