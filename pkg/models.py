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

"""Modules to define the domain types of the band width verifier"""

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas
from scipy import interpolate

from errors import ConfigError, DomainError
from helpers import grid_helpers
from warps.warp_proto import WarpProto

# Relative slack when deciding whether t lies in a closed interval.
DOMAIN_FUZZ = 1e-12


class Side(Enum):
  """Enum that represents the boundary a null expansion value feeds"""

  PLUS = "plus"
  MINUS = "minus"


class ExtrinsicMode(Enum):
  """Enum that represents the shapes of the second fundamental form k"""

  UMBILIC = "umbilic"
  DIAGONAL = "diagonal"
  CONFORMAL = "conformal"


class EtaCase(Enum):
  """Enum that represents the three closed forms of eta"""

  RATIONAL = "Rational"
  TAN = "Tan"
  COTH = "Coth"


class Branch(Enum):
  """Enum that represents the side of the pole for Rational and Coth eta"""

  ABOVE = "t>c"
  BELOW = "t<c"


class PotentialVariant(Enum):
  """Enum that represents the constructions of the width function phi"""

  STRICT = "strict"
  RIGID = "rigid"
  AFFINE = "affine"


class CheckMode(Enum):
  """Enum that represents the mean curvature hypothesis being checked"""

  CMC = "cmc"
  SUP_TRACE = "sup_trace"


class Verdict(Enum):
  """Enum that represents the outcome of a certificate"""

  CONSISTENT = "consistent"
  TIGHT = "tight"
  HYPOTHESIS_VIOLATED = "hypothesis-violated"
  THEOREM_VIOLATED = "THEOREM-VIOLATED"
  CONTRADICTION_CERTIFIED = "contradiction-certified"


def check_in_interval(t, t0: float, t1: float, what: str = "t") -> np.ndarray:
  """Raises DomainError if any t lies outside [t0, t1]."""
  t = np.asarray(t, dtype=float)
  fuzz = DOMAIN_FUZZ * max(1.0, abs(t0), abs(t1))
  bad = (t < t0 - fuzz) | (t > t1 + fuzz) | ~np.isfinite(t)
  if np.any(bad):
    offending = float(np.atleast_1d(t)[np.atleast_1d(bad)][0])
    raise DomainError(
        f"{what}={offending!r} lies outside the interval [{t0}, {t1}]."
    )
  return t


@dataclass(frozen=True, eq=False)
class GridField1D:
  """Class that represents a scalar field sampled on t0 + k*h

  The samples are a read-only copy of the values given at construction.
  """

  t0: float
  h: float
  values: np.ndarray
  name: str = "field"
  meta: dict = field(default_factory=dict)

  def __post_init__(self):
    values = np.array(self.values, dtype=float)
    values.flags.writeable = False
    object.__setattr__(self, "values", values)

  @classmethod
  def from_grid(
      cls, t: np.ndarray, values: np.ndarray, name: str, **meta
  ) -> "GridField1D":
    t = np.asarray(t, dtype=float)
    h = (t[-1] - t[0]) / (t.size - 1) if t.size > 1 else 0.0
    return cls(float(t[0]), float(h), np.asarray(values, dtype=float), name,
               dict(meta))

  @property
  def t(self) -> np.ndarray:
    return self.t0 + self.h * np.arange(self.values.size, dtype=float)

  @property
  def t1(self) -> float:
    return self.t0 + self.h * (self.values.size - 1)

  def max_abs(self) -> float:
    finite = self.values[np.isfinite(self.values)]
    return grid_helpers.pairwise_max(np.abs(finite)) if finite.size else 0.0

  def interpolant(self) -> interpolate.CubicSpline:
    """Cubic spline through the samples; its derivative() gives the slope."""
    return interpolate.CubicSpline(self.t, self.values)

  def to_frame(self) -> pandas.DataFrame:
    return pandas.DataFrame({"t": self.t, self.name: self.values})


@dataclass(frozen=True, eq=False)
class WarpedBandSpec:
  """Class that represents the band T^(n-1) x [t0, t1] with metric
  dt^2 + f(t)^2 tau"""

  n: int
  t0: float
  t1: float
  warp: WarpProto
  positivity_samples: int = 2001

  def __post_init__(self):
    if int(self.n) != self.n or self.n < 2:
      raise DomainError(
          f"Band dimension n must be an integer >= 2, got {self.n}."
      )
    if not (np.isfinite(self.t0) and np.isfinite(self.t1)) or not (
        self.t0 < self.t1
    ):
      raise DomainError(f"Band interval [{self.t0}, {self.t1}] is empty.")
    self.warp.validate_interval(self.n, self.t0, self.t1)
    grid = grid_helpers.uniform_grid(self.t0, self.t1, self.positivity_samples)
    with np.errstate(invalid="ignore"):
      values = np.asarray(self.warp.f(grid), dtype=float)
    bad = ~(values > 0)
    if np.any(bad):
      offending = float(grid[np.argmax(bad)])
      raise DomainError(
          f"Warp f(t) <= 0 at t={offending:.12g}, the metric degenerates."
      )

  @property
  def width(self) -> float:
    return self.t1 - self.t0

  def check(self, t, what: str = "t") -> np.ndarray:
    return check_in_interval(t, self.t0, self.t1, what)

  def describe(self) -> dict:
    return {
        "n": self.n,
        "interval": [self.t0, self.t1],
        "warp": self.warp.describe(),
    }


def _zero(t):
  return np.zeros_like(np.asarray(t, dtype=float))


def _constant(value: float) -> Callable:
  return lambda t: np.full_like(np.asarray(t, dtype=float), value)


@dataclass(frozen=True)
class ExtrinsicSpec:
  """Class that represents the second fundamental form k of the slice.

  Every mode reduces to k = a(t) dt^2 + b(t) f^2 tau. `shift` holds the
  pure-trace part s(t) g removed by transfer_to_mots, so the effective
  components are a - s and b - s.
  """

  mode: ExtrinsicMode
  lam: float = 0.0
  a: Callable | None = None
  b: Callable | None = None
  da: Callable | None = None
  db: Callable | None = None
  psi: Callable | None = None
  dpsi: Callable | None = None
  shift: Callable | None = None
  dshift: Callable | None = None
  label: dict = field(default_factory=dict, compare=False)

  @classmethod
  def umbilic(cls, lam: float) -> "ExtrinsicSpec":
    return cls(ExtrinsicMode.UMBILIC, lam=float(lam),
               label={"mode": "umbilic", "lambda": float(lam)})

  @classmethod
  def conformal(
      cls, psi: Callable, dpsi: Callable, label: dict | None = None
  ) -> "ExtrinsicSpec":
    return cls(ExtrinsicMode.CONFORMAL, psi=psi, dpsi=dpsi,
               label=label or {"mode": "conformal"})

  @classmethod
  def diagonal(
      cls,
      a: Callable,
      b: Callable,
      da: Callable,
      db: Callable,
      label: dict | None = None,
  ) -> "ExtrinsicSpec":
    return cls(ExtrinsicMode.DIAGONAL, a=a, b=b, da=da, db=db,
               label=label or {"mode": "diagonal"})

  def components(self, t, n: int) -> tuple[np.ndarray, ...]:
    """Returns (a, b, a', b') at t."""
    t = np.asarray(t, dtype=float)
    if self.mode == ExtrinsicMode.UMBILIC:
      a = b = _constant(self.lam / n)(t)
      da = db = _zero(t)
    elif self.mode == ExtrinsicMode.CONFORMAL:
      a = b = np.asarray(self.psi(t), dtype=float) + _zero(t)
      da = db = np.asarray(self.dpsi(t), dtype=float) + _zero(t)
    else:
      a = np.asarray(self.a(t), dtype=float) + _zero(t)
      b = np.asarray(self.b(t), dtype=float) + _zero(t)
      da = np.asarray(self.da(t), dtype=float) + _zero(t)
      db = np.asarray(self.db(t), dtype=float) + _zero(t)
    if self.shift is not None:
      s = np.asarray(self.shift(t), dtype=float)
      ds = np.asarray(self.dshift(t), dtype=float)
      a, b, da, db = a - s, b - s, da - ds, db - ds
    return a, b, da, db

  def trace(self, t, n: int) -> np.ndarray:
    a, b, _, _ = self.components(t, n)
    return a + (n - 1) * b

  def norm_sq(self, t, n: int) -> np.ndarray:
    a, b, _, _ = self.components(t, n)
    return a**2 + (n - 1) * b**2

  def describe(self) -> dict:
    description = dict(self.label)
    if self.shift is not None:
      description["transferred"] = True
    return description


@dataclass(frozen=True)
class ConstraintSample:
  """Class that represents mu and J at a point of the band"""

  t: float
  mu: float
  J_t: float
  absJ: float


@dataclass(frozen=True)
class EtaParams:
  """Class that represents the coefficients of the Riccati comparison ODE
  sigma + n/(n-1) eta^2 - 2 eta lambda + 2 eta' = 0"""

  sigma: float
  lam: float
  n: int
  c: float = 0.0

  def __post_init__(self):
    if int(self.n) != self.n or self.n < 2:
      raise ConfigError(f"n must be an integer >= 2, got {self.n}.")
    for name in ("sigma", "lam", "c"):
      if not np.isfinite(getattr(self, name)):
        raise ConfigError(f"{name} must be finite.")

  @property
  def discriminant(self) -> float:
    return self.sigma - (self.n - 1) * self.lam**2 / self.n

  @property
  def stationary(self) -> float:
    """(n-1) lambda / n, the centre of every closed form."""
    return (self.n - 1) * self.lam / self.n

  @property
  def kappa(self) -> float:
    return self.n / (2 * (self.n - 1))

  def rhs(self, eta):
    """eta' as a function of eta."""
    return -0.5 * (
        self.sigma + self.n / (self.n - 1) * eta**2 - 2 * eta * self.lam
    )

  def to_dict(self) -> dict:
    return {"sigma": self.sigma, "lambda": self.lam, "n": self.n, "c": self.c}


@dataclass(frozen=True)
class DomainBounds:
  """Class that represents the maximal interval of a Tan eta, or the
  unbounded marker"""

  r_minus: float
  r_plus: float
  bounded: bool

  def to_dict(self) -> dict:
    return {
        "r_minus": self.r_minus,
        "r_plus": self.r_plus,
        "bounded": self.bounded,
    }


@dataclass(frozen=True, eq=False)
class EtaSolution:
  """Class that represents a closed-form eta on its open domain"""

  case: EtaCase
  params: EtaParams
  domain: tuple[float, float]
  branch: Branch | None
  value_fn: Callable = field(repr=False)
  derivative_fn: Callable = field(repr=False)

  def contains(self, t) -> bool:
    t = np.asarray(t, dtype=float)
    lo, hi = self.domain
    return bool(np.all((t > lo) & (t < hi)))

  def _check(self, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if not self.contains(t):
      lo, hi = self.domain
      inside = (t > lo) & (t < hi)
      offending = float(np.atleast_1d(t)[~np.atleast_1d(inside)][0])
      raise DomainError(
          f"t={offending!r} is outside the domain ({lo}, {hi}) of the"
          f" {self.case.value} eta."
      )
    return t

  def value(self, t):
    return self.value_fn(self._check(t))

  def derivative(self, t):
    return self.derivative_fn(self._check(t))

  __call__ = value

  def to_dict(self) -> dict:
    return {
        "case": self.case.value,
        "params": self.params.to_dict(),
        "domain": list(self.domain),
        "branch": self.branch.value if self.branch else None,
    }


@dataclass(frozen=True, eq=False)
class PotentialBuild:
  """Class that represents the width function phi and p = eta o phi.

  phi is the piecewise-affine interpolant of (knots_t, knots_phi).
  """

  variant: PotentialVariant
  knots_t: tuple[float, ...]
  knots_phi: tuple[float, ...]
  lip: float
  plateaus: tuple[float, float]
  t_minus: float
  t_plus: float
  eps: float
  eta: EtaSolution = field(repr=False)

  def phi(self, t) -> np.ndarray:
    return np.interp(np.asarray(t, dtype=float), self.knots_t, self.knots_phi)

  def phi_slope(self, t) -> np.ndarray:
    """Slope of phi, taken from the right at the knots."""
    xs = np.asarray(self.knots_t)
    slopes = np.diff(self.knots_phi) / np.diff(xs)
    index = np.clip(
        np.searchsorted(xs, np.asarray(t, dtype=float), side="right") - 1,
        0,
        slopes.size - 1,
    )
    return slopes[index]

  def p(self, t) -> np.ndarray:
    return self.eta.value(self.phi(t))

  def grad_bound(self, t) -> np.ndarray:
    """|grad p| <= |eta' o phi| Lip(phi)."""
    return np.abs(self.eta.derivative(self.phi(t))) * self.lip

  def dp(self, t) -> np.ndarray:
    """Derivative of p away from the knots of phi."""
    return self.eta.derivative(self.phi(t)) * self.phi_slope(t)

  def sample(self, t: np.ndarray) -> dict[str, GridField1D]:
    return {
        "phi": GridField1D.from_grid(t, self.phi(t), "phi"),
        "p": GridField1D.from_grid(t, self.p(t), "p"),
        "grad_bound": GridField1D.from_grid(
            t, self.grad_bound(t), "grad_bound"
        ),
    }

  def to_dict(self) -> dict:
    return {
        "variant": self.variant.value,
        "lip": self.lip,
        "plateaus": list(self.plateaus),
        "t_minus": self.t_minus,
        "t_plus": self.t_plus,
        "eps": self.eps,
    }


@dataclass
class Certificate:
  """Class that represents the margins and verdict of a width check"""

  dec_margin: float
  mod_dec_margin: float
  boundary_minus: float
  boundary_plus: float
  conclusion: float
  verdict: Verdict
  mode: CheckMode
  tol: float
  eta_min: float | None = None
  details: dict = field(default_factory=dict)

  def margins(self) -> dict[str, float]:
    return {
        "dec_margin": self.dec_margin,
        "mod_dec_margin": self.mod_dec_margin,
        "boundary_minus": self.boundary_minus,
        "boundary_plus": self.boundary_plus,
    }

  def to_dict(self) -> dict:
    """Convert to JSON-serializable dictionary."""
    result = {
        **self.margins(),
        "conclusion": self.conclusion,
        "verdict": self.verdict.value,
        "mode": self.mode.value,
        "tol": self.tol,
        "details": self.details,
    }
    if self.eta_min is not None:
      result["eta_min"] = self.eta_min
    return result


@dataclass(frozen=True)
class LevelSetData:
  """Class that represents the geometry of the leaf {t} x T^(n-1) as a
  hypersurface of prescribed null expansion"""

  t: float
  scale: float
  h: float
  chi: float
  chi0_norm_sq: float
  chi_norm_sq: float
  W: float
  div_W: float
  R_sigma: float
  mu: float
  J_nu: float
  Q: float
  theta: float
  p_val: float
  p_normal_deriv: float
  trk: float

  def to_dict(self) -> dict:
    return dict(self.__dict__)


@dataclass(eq=False)
class EigenResult:
  """Class that represents the principal eigenpair of the stability
  operator on a leaf lattice"""

  lambda1: float
  eigenfunction: np.ndarray
  lattice_n: int
  iterations: int
  residual: float

  def to_frame(self) -> pandas.DataFrame:
    """Lattice coordinates (one column per torus axis) and the value."""
    axes = np.indices(self.eigenfunction.shape).reshape(
        self.eigenfunction.ndim, -1
    )
    frame = pandas.DataFrame(
        {f"x{i}": axes[i] / self.lattice_n for i in range(axes.shape[0])}
    )
    frame["value"] = self.eigenfunction.ravel()
    return frame

  def to_dict(self) -> dict:
    return {
        "lambda1": self.lambda1,
        "lattice_n": self.lattice_n,
        "iterations": self.iterations,
        "residual": self.residual,
        "eigenfunction_min": float(self.eigenfunction.min()),
    }


@dataclass(eq=False)
class HarmonicSolution:
  """Class that represents the monotone solution u(t) of the reduced
  spacetime harmonic equation"""

  u: GridField1D
  du: GridField1D
  d2u: GridField1D
  monotone: bool
  residual: float

  def to_frame(self) -> pandas.DataFrame:
    frame = self.u.to_frame()
    frame["du"] = self.du.values
    frame["d2u"] = self.d2u.values
    return frame


@dataclass
class InequalityReport:
  """Class that represents both sides of the integral inequality of the
  spacetime harmonic reduction"""

  boundary_minus: float
  boundary_plus: float
  boundary_minus_closed: float
  boundary_plus_closed: float
  bulk_hessian: float
  bulk_hessian_linear: float
  bulk_energy: float
  gauss_term: float
  slack: float
  route_gap: float
  printed_sign: bool
  bulk_bound: float = 0.0
  hypotheses_hold: bool | None = None
  contradiction: bool = False

  @property
  def boundary_total(self) -> float:
    return self.boundary_minus + self.boundary_plus

  @property
  def bulk_total(self) -> float:
    return self.bulk_hessian + self.bulk_energy - self.gauss_term

  def to_dict(self) -> dict:
    result = dict(self.__dict__)
    result["boundary_total"] = self.boundary_total
    result["bulk_total"] = self.bulk_total
    return result


@dataclass(eq=False)
class CalliasInput:
  """Class that represents the potential of the Callias operator"""

  psi_tilde: GridField1D
  psi: GridField1D
  dpsi_tilde_bound: GridField1D
  re_bound: float
  potential: PotentialBuild
  admissible: bool
  reason: str
  plateau_constants: tuple[float, float] | None
  s_minus: int = -1
  s_plus: int = 1

  def to_dict(self) -> dict:
    return {
        "re_bound": self.re_bound,
        "admissible": self.admissible,
        "reason": self.reason,
        "plateau_constants": (
            list(self.plateau_constants) if self.plateau_constants else None
        ),
        "s_minus": self.s_minus,
        "s_plus": self.s_plus,
        "potential": self.potential.to_dict(),
    }


@dataclass
class CalliasCertificate:
  """Class that represents the scalar content of the Callias estimate"""

  bulk_margin: float
  boundary_margin_plus: float
  boundary_margin_minus: float
  admissible: bool
  admissibility_reason: str
  riccati_defect: float
  verdict: Verdict
  tol: float
  assumptions: tuple[str, ...] = ()

  def to_dict(self) -> dict:
    """Convert to JSON-serializable dictionary."""
    return {
        "bulk_margin": self.bulk_margin,
        "boundary_margin_plus": self.boundary_margin_plus,
        "boundary_margin_minus": self.boundary_margin_minus,
        "admissible": self.admissible,
        "admissibility_reason": self.admissibility_reason,
        "riccati_defect": self.riccati_defect,
        "verdict": self.verdict.value,
        "tol": self.tol,
        "assumptions": list(self.assumptions),
    }


@dataclass(frozen=True, eq=False)
class ReducedCoefficients:
  """Class that represents the coefficients of u'' + H u' + q |u'| = 0"""

  band: WarpedBandSpec
  k: ExtrinsicSpec
  p: Callable = field(repr=False)
  dp: Callable = field(repr=False)
  H: Callable = field(repr=False)
  q: Callable = field(repr=False)
