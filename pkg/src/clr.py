"""Centred log-ratio transforms and the weighting/unweighting maps.

      B2(lambda) --omega--> B2(P) --clr_p--> L2_0(P)
          |                   \                 |
     clr_sqrt_p              clr_u          omega2_inverse
          v                     \               v
   L2_0,sqrtP(lambda) <-----------+-------------+

clr_u is computed as sqrt(p) * clr_p; the other path
(omega_inverse then clr_sqrt_p) gives the same function and is used by the
tests as a cross-check.
"""
import enum
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import ConstraintViolationError, DataError, ReferenceMismatchError
from .grid import Grid, check_same_grid, integrate
from .measure import Density, ReferenceMeasure, density_from_log, reference_lebesgue

logger = logging.getLogger(__name__)

# inputs read back from files may carry rounding
INVERSE_TOLERANCE = 1e-8


class ClrSpace(enum.Enum):
  L2_0_P = "L2_0(P)"
  L2_0_SQRTP_LAMBDA = "L2_0,sqrtP(lambda)"
  L2_0_LAMBDA = "L2_0(lambda)"


class SpaceMismatchError(DataError):
  pass


@dataclass(frozen=True)
class ClrFunction:
  reference: ReferenceMeasure
  space: ClrSpace
  values: np.ndarray = field(repr=False, compare=False)

  @property
  def grid(self) -> Grid:
    return self.reference.grid

  def constraint_weight(self) -> np.ndarray:
    if self.space is ClrSpace.L2_0_P:
      return self.reference.p
    if self.space is ClrSpace.L2_0_SQRTP_LAMBDA:
      return self.reference.sqrt_p
    return np.ones(self.grid.n)

  def constraint_residual(self) -> float:
    """
    |integral of v w.r.t. the tagged measure|, relative to the Cauchy-Schwarz
    bound sqrt(measure total) * ||v||; 0 means the constraint holds exactly.
    """
    g = self.grid
    c = self.constraint_weight()
    wc = g.weights * c
    scale = np.sqrt(np.sum(wc) * np.sum(wc * self.values ** 2))
    if scale == 0:
      return 0.0
    return float(abs(np.dot(wc, self.values)) / scale)

  def check_constraint(self, tol=INVERSE_TOLERANCE):
    residual = self.constraint_residual()
    if residual > tol:
      raise ConstraintViolationError(
        f"Function tagged {self.space.value} violates its zero-integral constraint "
        f"(relative residual {residual:.3e} > {tol:.1e})"
      )
    return self


def make_clr_function(reference: ReferenceMeasure, space: ClrSpace, values) -> ClrFunction:
  values = reference.grid.check_values(values, "clr values")
  if values.ndim != 1:
    raise DataError(f"clr function must be one-dimensional, got shape {values.shape}")
  if not np.all(np.isfinite(values)):
    raise DataError("clr function contains non-finite values")
  values = np.array(values, dtype=float)
  values.setflags(write=False)
  return ClrFunction(reference, space, values)


def _require_space(v: ClrFunction, *spaces: ClrSpace):
  if v.space not in spaces:
    expected = ", ".join(s.value for s in spaces)
    raise SpaceMismatchError(f"Expected a function in {expected}, got {v.space.value}")


def _resolve_reference(v: ClrFunction, reference: Optional[ReferenceMeasure]) -> ReferenceMeasure:
  if reference is None or reference is v.reference:
    return v.reference
  check_same_grid(reference.grid, v.grid)
  if not np.array_equal(reference.p, v.reference.p):
    raise ReferenceMismatchError(
      f"Function is tagged with reference {v.reference.label!r}, not {reference.label!r}"
    )
  return reference


def _require_lambda_density(phi: Density):
  if not phi.reference.is_lebesgue:
    raise ReferenceMismatchError(
      f"Expected a lambda-density, got a density w.r.t. {phi.reference.label!r}"
    )


def clr_p(f: Density) -> ClrFunction:
  ref = f.reference
  log_f = np.log(f.values)
  centred = log_f - integrate(ref.grid, log_f * ref.p) / ref.total
  return make_clr_function(ref, ClrSpace.L2_0_P, centred)


def clr_p_inverse(v: ClrFunction, reference: Optional[ReferenceMeasure] = None) -> Density:
  _require_space(v, ClrSpace.L2_0_P)
  ref = _resolve_reference(v, reference)
  v.check_constraint()
  return density_from_log(ref, v.values)


def omega(phi: Density, reference: ReferenceMeasure) -> Density:
  """
  B2-weighting map: phi -> phi ** (1 / sqrt(p)).

  The power is taken of the representative with zero sqrt(P)-mean log, so the
  result does not depend on the scale of phi.
  """
  _require_lambda_density(phi)
  check_same_grid(phi.grid, reference.grid)
  return density_from_log(reference, clr_sqrt_p(phi, reference).values / reference.sqrt_p)


def omega_inverse(psi: Density) -> Density:
  """
  B2-unweighting map: psi -> psi ** sqrt(p), a lambda-density, taken of the
  representative with zero P-mean log (exp of clr_P).
  """
  ref = psi.reference
  return density_from_log(reference_lebesgue(ref.grid), ref.sqrt_p * clr_p(psi).values)


def omega2(eta: ClrFunction, reference: Optional[ReferenceMeasure] = None) -> ClrFunction:
  """L2-weighting map: eta -> eta / sqrt(p)."""
  ref = _resolve_reference(eta, reference)
  if ref.is_lebesgue:
    _require_space(eta, ClrSpace.L2_0_SQRTP_LAMBDA, ClrSpace.L2_0_LAMBDA)
  else:
    _require_space(eta, ClrSpace.L2_0_SQRTP_LAMBDA)
  return make_clr_function(ref, ClrSpace.L2_0_P, eta.values / ref.sqrt_p)


def omega2_inverse(xi: ClrFunction) -> ClrFunction:
  """L2-unweighting map: xi -> xi * sqrt(p)."""
  _require_space(xi, ClrSpace.L2_0_P)
  ref = xi.reference
  return make_clr_function(ref, ClrSpace.L2_0_SQRTP_LAMBDA, xi.values * ref.sqrt_p)


def clr_u(f: Density) -> ClrFunction:
  ref = f.reference
  return make_clr_function(ref, ClrSpace.L2_0_SQRTP_LAMBDA, ref.sqrt_p * clr_p(f).values)


def clr_sqrt_p(phi: Density, reference: ReferenceMeasure) -> ClrFunction:
  _require_lambda_density(phi)
  check_same_grid(phi.grid, reference.grid)
  sqrt_p = reference.sqrt_p
  log_phi = np.log(phi.values)
  centred = log_phi - integrate(reference.grid, log_phi * sqrt_p) / reference.sqrt_total
  return make_clr_function(reference, ClrSpace.L2_0_SQRTP_LAMBDA, centred)


def clr_sqrt_p_inverse(psi: ClrFunction) -> Density:
  _require_space(psi, ClrSpace.L2_0_SQRTP_LAMBDA)
  psi.check_constraint()
  return density_from_log(reference_lebesgue(psi.grid), psi.values)


def clr_u_inverse(psi: ClrFunction, reference: Optional[ReferenceMeasure] = None, route="omega2") -> Density:
  """
  Inverse of clr_u, either as exp(omega2(psi)) (``route="omega2"``) or as
  omega(exp(psi)) (``route="omega"``); both give the same B-equivalence class.
  """
  ref = _resolve_reference(psi, reference)
  _require_space(psi, ClrSpace.L2_0_SQRTP_LAMBDA)
  psi.check_constraint()

  if route == "omega2":
    return density_from_log(ref, psi.values / ref.sqrt_p)
  if route == "omega":
    return omega(density_from_log(reference_lebesgue(ref.grid), psi.values), ref)
  raise ValueError(f"Unknown clr_u inverse route: {route!r}")
