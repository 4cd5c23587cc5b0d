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

"""Utils Module for command line parsing and run configuration"""

import argparse
import textwrap

import models
from configuration import Configuration
from errors import UsageError

COMMANDS = (
    "solve-eta",
    "check-width",
    "stability",
    "harmonic",
    "callias-cert",
    "examples",
    "sweep",
)


class VerifierArgumentParser(argparse.ArgumentParser):
  """ArgumentParser that raises UsageError instead of exiting with 2."""

  def error(self, message: str):
    raise UsageError(f"{self.prog}: {message}")


def _global_flags(parser: argparse.ArgumentParser, default) -> None:
  parser.add_argument(
      "--config", help="JSON configuration file.", default=default
  )
  parser.add_argument(
      "--out", help="Output directory for reports.", default=default
  )
  parser.add_argument(
      "--seed", type=int, help="Seed of random sweeps.", default=default
  )
  parser.add_argument(
      "--quiet",
      help="Only log warnings and errors.",
      action="store_true",
      default=default,
  )
  parser.add_argument(
      "--verbose",
      "-v",
      help="Log every step.",
      action="store_true",
      default=default,
  )


def _width_flags(parser: argparse.ArgumentParser) -> None:
  parser.add_argument("--sigma", type=float, help="Energy bound sigma.")
  parser.add_argument("--tminus", type=float, help="t-.")
  parser.add_argument("--tplus", type=float, help="t+.")
  parser.add_argument("--grid", type=int, help="Grid nodes.")


def parse_args(arg_list: list[str] | None = None) -> argparse.Namespace:
  """Parses command line arguments"""

  parser = VerifierArgumentParser(
      prog="bandwidth-verifier",
      formatter_class=argparse.RawDescriptionHelpFormatter,
      description=textwrap.dedent("""\
        Numerical verifier of band-width estimates for CMC initial data
        sets on warped bands.

        Every run is described by a JSON configuration (--config) whose
        keys can be overridden by the flags of each subcommand. See
        configuration.py for all parameters.

        Example: python main.py --config cosine.json check-width \
        --sigma 6 --tminus -0.7 --tplus 0.7
    """),
  )
  _global_flags(parser, None)
  shared = VerifierArgumentParser(add_help=False)
  _global_flags(shared, argparse.SUPPRESS)

  commands = parser.add_subparsers(dest="command", metavar="COMMAND")
  commands.required = True

  solve_eta = commands.add_parser(
      "solve-eta", parents=[shared], help="Closed-form and RK4 eta."
  )
  solve_eta.add_argument("--sigma", type=float, help="Energy bound sigma.")
  solve_eta.add_argument("--lambda", dest="lam", type=float, help="lambda.")
  solve_eta.add_argument("--n", type=int, help="Dimension of the band.")
  solve_eta.add_argument("--c", type=float, help="Shift of eta.")
  solve_eta.add_argument(
      "--branch", choices=[b.value for b in models.Branch], default=None
  )
  solve_eta.add_argument("--t-init", type=float, help="RK4 initial time.")
  solve_eta.add_argument("--eta-init", type=float, help="RK4 initial value.")
  solve_eta.add_argument("--t-min", type=float, help="Lower end of range.")
  solve_eta.add_argument("--t-max", type=float, help="Upper end of range.")
  solve_eta.add_argument("--step", type=float, help="RK4 step.")
  solve_eta.add_argument(
      "--on-blow-up", choices=("flag", "raise"), default=None
  )
  paths = solve_eta.add_mutually_exclusive_group()
  for path, text in (
      ("closed", "Closed-form eta only."),
      ("numeric", "RK4 eta only."),
      ("both", "Both, with their max deviation."),
  ):
    paths.add_argument(
        f"--{path}", dest="eta_path", action="store_const", const=path,
        help=text,
    )
  solve_eta.add_argument("--grid", type=int, help="Grid nodes.")
  solve_eta.add_argument("--plot", action="store_true", help="Emit SVG.")

  check_width = commands.add_parser(
      "check-width", parents=[shared], help="Width estimate certificate."
  )
  _width_flags(check_width)
  check_width.add_argument(
      "--mode", choices=[m.value for m in models.CheckMode], default=None
  )
  check_width.add_argument("--lambda", dest="lam", type=float, help="lambda.")
  check_width.add_argument("--tol", type=float, help="Margin tolerance.")
  check_width.add_argument("--plot", action="store_true", help="Emit SVG.")

  stability = commands.add_parser(
      "stability", parents=[shared], help="Principal eigenvalue of L."
  )
  stability.add_argument("--t", type=float, help="Leaf t.")
  stability.add_argument("--lattice", type=int, help="Sites per axis.")
  stability.add_argument(
      "--p", help="Prescribed expansion: number, expression or theta."
  )

  harmonic = commands.add_parser(
      "harmonic", parents=[shared], help="Spacetime harmonic reduction."
  )
  _width_flags(harmonic)
  harmonic.add_argument(
      "--paper-sign",
      "--printed-sign",
      dest="printed_sign",
      action="store_true",
      default=None,
      help="Hessian term with the printed sign.",
  )
  harmonic.add_argument("--plot", action="store_true", help="Emit SVG.")

  callias = commands.add_parser(
      "callias-cert", parents=[shared], help="Callias estimate certificate."
  )
  _width_flags(callias)
  callias.add_argument("--eps", type=float, help="Enlargement of [t-, t+].")
  callias.add_argument("--plateau", type=float, help="Plateau width.")
  callias.add_argument("--re-bound", type=float, help="Bound of |R^E|.")
  callias.add_argument(
      "--variant",
      choices=[
          models.PotentialVariant.STRICT.value,
          models.PotentialVariant.RIGID.value,
      ],
      default=None,
  )

  commands.add_parser(
      "examples", parents=[shared], help="Rigid band saturation corpus."
  )

  sweep = commands.add_parser(
      "sweep", parents=[shared], help="Seeded random width checks."
  )
  sweep.add_argument("--trials", type=int, help="Number of trials.")
  sweep.add_argument("--grid", type=int, help="Grid nodes per check.")

  return parser.parse_args(arg_list)


def build_run_config(args: argparse.Namespace) -> Configuration:
  """Builds the run configuration: JSON file first, then flags.

  Args:
      args: The parser arguments.
  Returns:
      config: The parameter configuration of the run.
  """
  config = (
      Configuration.from_json_file(args.config)
      if args.config
      else Configuration()
  )
  flag = lambda name: getattr(args, name, None)
  eta = {
      key: flag(key)
      for key in ("c", "t_init", "eta_init", "t_min", "t_max", "step",
                  "on_blow_up")
      if flag(key) is not None
  }
  if flag("eta_path") is not None:
    eta["path"] = flag("eta_path")
  config.update({
      "band": {"n": flag("n")} if flag("n") is not None else None,
      "sigma": flag("sigma"),
      "lambda": flag("lam"),
      "check_mode": flag("mode"),
      "branch": flag("branch"),
      "t_minus": flag("tminus"),
      "t_plus": flag("tplus"),
      "tol": flag("tol"),
      "eps": flag("eps"),
      "plateau": flag("plateau"),
      "variant": flag("variant"),
      "re_bound": flag("re_bound"),
      "grid_n": flag("grid"),
      "lattice_n": flag("lattice"),
      "leaf_t": flag("t"),
      "p": flag("p"),
      "printed_sign": flag("printed_sign"),
      "eta": {**config.eta, **eta} if eta else None,
      "seed": flag("seed"),
      "trials": flag("trials"),
      "out_dir": flag("out"),
      "quiet": flag("quiet") or None,
      "verbose": flag("verbose") or None,
  })
  return config
