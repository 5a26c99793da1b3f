"""Uniform grids with trapezoidal quadrature weights.

Every function handled by the package is a vector of values on one shared
Grid; integrals are weighted sums against ``Grid.weights``.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import GridMismatchError

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 2048


@dataclass(frozen=True)
class Grid:
  a: float
  b: float
  n: int
  nodes: np.ndarray = field(repr=False, compare=False)
  weights: np.ndarray = field(repr=False, compare=False)

  @property
  def length(self) -> float:
    return self.b - self.a

  @property
  def step(self) -> float:
    return (self.b - self.a) / (self.n - 1)

  def check_values(self, values, name="values") -> np.ndarray:
    """Return ``values`` as a float array whose last axis matches the grid."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 0 or values.shape[-1] != self.n:
      raise GridMismatchError(
        f"{name} has shape {values.shape}, expected last axis of length {self.n}"
      )
    return values

  def integrate(self, values):
    return integrate(self, values)

  def inner(self, u, v, weight: Optional[np.ndarray] = None) -> float:
    """Quadrature inner product: sum_k w_k c_k u_k v_k (c = weight or 1)."""
    u = self.check_values(u, "u")
    v = self.check_values(v, "v")
    if weight is None:
      return float(np.dot(self.weights * u, v))
    weight = self.check_values(weight, "weight")
    return float(np.dot(self.weights * weight * u, v))


def make_grid(a: float, b: float, n: int = DEFAULT_GRID_SIZE) -> Grid:
  if not (math.isfinite(a) and math.isfinite(b)):
    raise ValueError(f"Grid bounds must be finite: a={a}, b={b}")
  if b <= a:
    raise ValueError(f"Grid upper bound must exceed lower bound: a={a}, b={b}")
  if int(n) != n or n < 3:
    raise ValueError(f"Grid needs at least 3 nodes: n={n}")
  n = int(n)

  h = (b - a) / (n - 1)
  nodes = a + h * np.arange(n, dtype=float)
  # pin the last node to b exactly
  nodes[-1] = b
  weights = np.full(n, h)
  weights[0] = weights[-1] = h / 2.0

  nodes.setflags(write=False)
  weights.setflags(write=False)
  logger.debug("Created grid on [%s, %s] with %d nodes (h=%s)", a, b, n, h)
  return Grid(a=float(a), b=float(b), n=n, nodes=nodes, weights=weights)


def integrate(g: Grid, values):
  """
  Trapezoidal integral of ``values`` over the grid.

  A 2-D array is integrated row by row and an array of integrals is returned.
  """
  values = g.check_values(values)
  if not np.all(np.isfinite(values)):
    raise ValueError("Cannot integrate non-finite values")
  result = values @ g.weights
  if values.ndim == 1:
    return float(result)
  return result


def check_same_grid(*grids: Grid) -> Grid:
  first = grids[0]
  for other in grids[1:]:
    if other is not first and other != first:
      raise GridMismatchError(f"Grid mismatch: {first} vs {other}")
  return first
