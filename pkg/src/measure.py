"""Reference measures, densities and change of reference.

A ReferenceMeasure is a strictly positive lambda-density ``p`` on a Grid with its
total mass P(Omega). A Density is a strictly positive function expressed w.r.t.
a reference; it stands for its whole B-equivalence class (all positive
multiples), and is always stored as the canonical representative whose
P-integral equals P(Omega), so the neutral element is the constant 1.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import DataError, ReferenceMismatchError
from .grid import Grid, check_same_grid, integrate

logger = logging.getLogger(__name__)

LEBESGUE = "lebesgue"
UNIFORM = "uniform"
MEAN = "mean"
EXPONENTIAL_PREFIX = "exp:"


class ReferenceSpecError(ValueError):
  pass


@dataclass(frozen=True)
class ReferenceMeasure:
  grid: Grid
  p: np.ndarray = field(repr=False, compare=False)
  total: float
  label: str = "custom"

  @property
  def is_lebesgue(self) -> bool:
    return bool(np.all(self.p == 1.0))

  @property
  def sqrt_p(self) -> np.ndarray:
    return np.sqrt(self.p)

  @property
  def sqrt_total(self) -> float:
    """Total mass of the auxiliary measure with lambda-density sqrt(p)."""
    return integrate(self.grid, self.sqrt_p)


@dataclass(frozen=True)
class Density:
  reference: ReferenceMeasure
  values: np.ndarray = field(repr=False, compare=False)

  @property
  def grid(self) -> Grid:
    return self.reference.grid

  def __mul__(self, c):
    """Scaling by a positive constant stays inside the B-equivalence class."""
    c = float(c)
    if not (c > 0 and math.isfinite(c)):
      raise DataError(f"Densities can only be scaled by positive constants, got {c}")
    return Density(self.reference, _freeze(self.values * c))

  __rmul__ = __mul__


def _freeze(values: np.ndarray) -> np.ndarray:
  values = np.array(values, dtype=float)
  values.setflags(write=False)
  return values


def make_reference(g: Grid, p, label="custom") -> ReferenceMeasure:
  p = g.check_values(p, "reference density")
  if p.ndim != 1:
    raise DataError(f"Reference density must be one-dimensional, got shape {p.shape}")
  if not np.all(np.isfinite(p)):
    raise DataError("Reference density contains non-finite values")
  if np.min(p) <= 0:
    raise DataError(f"Reference density must be strictly positive (min={np.min(p)})")
  total = integrate(g, p)
  if not (math.isfinite(total) and total > 0):
    raise DataError(f"Reference total mass must be positive and finite (total={total})")
  return ReferenceMeasure(grid=g, p=_freeze(p), total=total, label=label)


def make_density(reference: ReferenceMeasure, values, normalize=True) -> Density:
  values = reference.grid.check_values(values, "density")
  if values.ndim != 1:
    raise DataError(f"Density must be one-dimensional, got shape {values.shape}")
  if not np.all(np.isfinite(values)):
    raise DataError("Density contains non-finite values")
  if np.min(values) <= 0:
    raise DataError(f"Density must be strictly positive (min={np.min(values)})")
  f = Density(reference, _freeze(values))
  if normalize:
    return normalize_representative(f)
  return f


def density_from_log(reference: ReferenceMeasure, log_values) -> Density:
  """Exponentiate log-values without overflow and normalize."""
  log_values = reference.grid.check_values(log_values, "log-density")
  if not np.all(np.isfinite(log_values)):
    raise DataError("Log-density contains non-finite values")
  return make_density(reference, np.exp(log_values - np.max(log_values)))


def neutral(reference: ReferenceMeasure) -> Density:
  return Density(reference, _freeze(np.ones(reference.grid.n)))


def reference_lebesgue(g: Grid) -> ReferenceMeasure:
  return make_reference(g, np.ones(g.n), label=LEBESGUE)


def reference_uniform_unit(g: Grid) -> ReferenceMeasure:
  return make_reference(g, np.full(g.n, 1.0 / g.length), label=UNIFORM)


def reference_exponential(g: Grid, delta: float) -> ReferenceMeasure:
  """Exponential reference exp(-delta*t) normalized to unit total mass."""
  if not math.isfinite(delta):
    raise ReferenceSpecError(f"Exponential rate must be finite: {delta}")
  if delta == 0:
    return reference_uniform_unit(g)

  exponent = -delta * g.nodes
  p = np.exp(exponent - np.max(exponent))
  if np.min(p) <= 0:
    raise DataError(
      f"Exponential reference underflows on [{g.a}, {g.b}] for delta={delta}"
    )
  p = p / integrate(g, p)
  return make_reference(g, p, label=f"{EXPONENTIAL_PREFIX}{delta!r}")


def reference_from_mean(sample: Sequence[Density]) -> ReferenceMeasure:
  """
  Reference whose density is the Bayes-space mean of lambda-densities.

  The geometric mean exp((1/N) sum ln f_i) is rescaled to total mass b - a so
  that it sits on the same scale footing as the Lebesgue reference.
  """
  if len(sample) == 0:
    raise DataError("Cannot build a mean reference from an empty sample")
  g = check_same_grid(*[f.grid for f in sample])
  for f in sample:
    if not f.reference.is_lebesgue:
      raise ReferenceMismatchError(
        f"Mean reference needs lambda-densities, got reference {f.reference.label!r}"
      )

  mean_log = np.mean(np.log(np.vstack([f.values for f in sample])), axis=0)
  p = np.exp(mean_log - np.max(mean_log))
  p = p * (g.length / integrate(g, p))
  logger.debug("Mean reference from %d densities", len(sample))
  return make_reference(g, p, label=MEAN)


def check_same_reference(*densities: Density) -> ReferenceMeasure:
  first = densities[0].reference
  check_same_grid(*[f.grid for f in densities])
  for f in densities[1:]:
    other = f.reference
    if other is first:
      continue
    if not np.array_equal(other.p, first.p):
      raise ReferenceMismatchError(
        f"Reference mismatch: {first.label!r} vs {other.label!r}"
      )
  return first


def normalize_representative(f: Density) -> Density:
  ref = f.reference
  mass = integrate(ref.grid, f.values * ref.p)
  return Density(ref, _freeze(f.values * (ref.total / mass)))


def change_reference(f: Density, new: ReferenceMeasure) -> Density:
  """Chain rule: dmu/dQ = dmu/dP * p / q."""
  check_same_grid(f.grid, new.grid)
  values = f.values * f.reference.p / new.p
  return normalize_representative(Density(new, _freeze(values)))


def ratio_spread(f: Density, g: Density) -> float:
  """Relative spread (max - min) / mean of the pointwise ratio f / g."""
  check_same_grid(f.grid, g.grid)
  ratio = f.values / g.values
  return float((np.max(ratio) - np.min(ratio)) / np.mean(ratio))


def is_b_equivalent(f: Density, g: Density, tol=1e-10) -> bool:
  return ratio_spread(f, g) <= tol


_exp_regex = re.compile(r"^exp:(?P<delta>.+)$")


def parse_reference_spec(spec: str, g: Grid, sample: Optional[Sequence[Density]] = None) -> ReferenceMeasure:
  """
  Build a reference from the mini-language ``lebesgue``, ``uniform``,
  ``exp:<delta>`` or ``mean`` (the latter needs the lambda-density sample).
  """
  if spec is None:
    raise ReferenceSpecError("Reference spec is required")
  spec = spec.strip()

  if spec == LEBESGUE:
    return reference_lebesgue(g)
  if spec == UNIFORM:
    return reference_uniform_unit(g)
  if spec == MEAN:
    if not sample:
      raise ReferenceSpecError("The 'mean' reference needs a sample of densities")
    return reference_from_mean(sample)

  m = _exp_regex.match(spec)
  if m is not None:
    try:
      delta = float(m.group("delta"))
    except ValueError:
      raise ReferenceSpecError(f"Invalid exponential rate in reference spec {spec!r}")
    if not math.isfinite(delta):
      raise ReferenceSpecError(f"Exponential rate must be finite in {spec!r}")
    reference = reference_exponential(g, delta)
    # keep the user's spelling of the reference flag for output headers
    return ReferenceMeasure(grid=reference.grid, p=reference.p, total=reference.total, label=spec)

  raise ReferenceSpecError(
    f"Unknown reference spec {spec!r} (expected lebesgue, uniform, exp:<delta> or mean)"
  )
