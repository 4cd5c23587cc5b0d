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

"""Errors raised by the band width verifier.

Every error carries the process exit code the CLI maps it to.
"""


class BandWidthError(Exception):
  """Base class for all verifier errors."""

  exit_code: int = 70


class UsageError(BandWidthError):
  """Bad command line usage."""

  exit_code = 64


class ConfigError(BandWidthError):
  """Invalid or inconsistent run configuration."""

  exit_code = 65


class DomainError(ConfigError):
  """A point or interval lies outside the domain of a band or solution."""


class GeometryError(ConfigError):
  """A geometric precondition (e.g. on the band width) fails."""


class DerivativeUnavailableError(ConfigError):
  """A warp derivative was requested but neither analytic nor numeric."""


class StepTooLargeError(ConfigError):
  """A finite-difference or integration step is too coarse."""


class ModeError(ConfigError):
  """The requested checking mode cannot be used with these inputs."""


class DimensionError(ConfigError):
  """The operation is only defined in another dimension."""


class NotMonotoneError(ConfigError):
  """A candidate eta violates the strict decrease eta' < 0."""


class AdmissibilityError(ConfigError):
  """A Callias potential is not admissible."""


class EtaBlowUpError(ConfigError):
  """Numeric integration of eta escaped to infinity."""

  def __init__(self, message: str, escape_time: float):
    super().__init__(message)
    self.escape_time = escape_time


class ConvergenceError(BandWidthError):
  """An iterative solver did not converge."""

  exit_code = 70


class ConsistencyError(BandWidthError):
  """Two independent evaluations of the same quantity disagree."""

  exit_code = 70


class NormalizationError(BandWidthError):
  """A solution could not be normalized."""

  exit_code = 70
