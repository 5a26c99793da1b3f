"""Weighted simplicial functional PCA.

The sample is centred in B2(P), mapped to L2_0,sqrtP(lambda) with clr_u and
analysed there with ordinary (unweighted) functional PCA. Because the number
of densities N is much smaller than the number of grid nodes, eigenpairs come
from the N x N Gram matrix (dual route).
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from . import DataError, GridMismatchError, NumericalError
from .bayes_ops import center, perturb, power, sample_mean
from .clr import ClrFunction, ClrSpace, clr_u, clr_u_inverse, make_clr_function
from .eigen import jacobi_eigh
from .grid import Grid
from .measure import Density, ReferenceMeasure, check_same_reference

logger = logging.getLogger(__name__)

DEFAULT_HARMONIC_MULTIPLE = 2.0
ORTHONORMALITY_TOLERANCE = 1e-8
TRACE_TOLERANCE = 1e-8
# eigenvalues below this fraction of the largest carry no variance
RANK_TOLERANCE = 1e-10
DEGENERACY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class FpcaResult:
  reference: ReferenceMeasure
  mean: Density
  eigenvalues: np.ndarray = field(repr=False)
  directions_clr: List[ClrFunction] = field(repr=False)
  directions_density: List[Density] = field(repr=False)
  scores: np.ndarray = field(repr=False)
  explained_ratio: np.ndarray = field(repr=False)
  labels: List[str] = field(default_factory=list)
  degenerate_pairs: List[Tuple[int, int]] = field(default_factory=list)

  @property
  def n_components(self) -> int:
    return len(self.directions_clr)

  @property
  def total_variance(self) -> float:
    return float(np.sum(self.eigenvalues))

  @property
  def cumulative_ratio(self) -> np.ndarray:
    return np.cumsum(self.explained_ratio)


def _clr_u_matrix(sample: Sequence[Density]) -> np.ndarray:
  return np.vstack([clr_u(f).values for f in sample])


def _fix_sign(direction: np.ndarray) -> float:
  """+1 or -1 so that the first non-zero node value is non-negative."""
  nonzero = np.flatnonzero(direction)
  if len(nonzero) == 0:
    return 1.0
  return 1.0 if direction[nonzero[0]] > 0 else -1.0


def covariance_matrix(sample: Sequence[Density], on: Optional[Grid] = None) -> np.ndarray:
  """
  Discretized covariance kernel C(t, u) = (1/N) sum_i Y_i(t) Y_i(u) of the
  centred clr_u data (n x n).

  With ``on``, the centred curves are linearly interpolated to that grid
  first, which must cover the same domain.
  """
  if len(sample) < 2:
    raise DataError("Covariance needs at least two densities")
  y = _clr_u_matrix(center(sample))
  if on is not None:
    g = sample[0].grid
    if (on.a, on.b) != (g.a, g.b):
      raise GridMismatchError(f"Covariance grid [{on.a}, {on.b}] does not cover [{g.a}, {g.b}]")
    y = np.vstack([np.interp(on.nodes, g.nodes, row) for row in y])
  return y.T @ y / len(sample)


def wsfpca(sample: Sequence[Density], k: int, labels: Optional[Sequence[str]] = None) -> FpcaResult:
  n_samples = len(sample)
  if n_samples < 2:
    raise DataError(f"wSFPCA needs at least two densities, got {n_samples}")
  if not (1 <= k <= n_samples - 1):
    raise DataError(f"Number of components must be in [1, {n_samples - 1}], got {k}")
  if labels is None:
    labels = [str(i + 1) for i in range(n_samples)]
  labels = [str(label) for label in labels]
  if len(labels) != n_samples:
    raise DataError(f"Got {len(labels)} labels for {n_samples} densities")

  ref = check_same_reference(*sample)
  g = ref.grid
  for f in sample:
    if not np.all(np.isfinite(f.values)):
      raise DataError("Sample contains non-finite density values")

  mean = sample_mean(sample)
  y = _clr_u_matrix(center(sample))
  weighted = y * g.weights
  gram = weighted @ y.T / n_samples
  logger.debug("Gram matrix %dx%d, trace %.6e", n_samples, n_samples, np.trace(gram))

  values, vectors, sweeps = jacobi_eigh(gram)
  logger.debug("Jacobi eigensolver converged in %d sweeps", sweeps)
  # the centred sample spans at most N - 1 dimensions
  eigenvalues = np.clip(values[: n_samples - 1], 0.0, None)

  largest = eigenvalues[0]
  # second moment of the uncentred data; a spread below rounding level of it is zero
  raw = _clr_u_matrix(sample)
  second_moment = float(np.sum((raw * g.weights) * raw)) / n_samples
  if largest <= RANK_TOLERANCE * second_moment or largest <= 0:
    raise DataError("All densities of the sample are B-equivalent (zero variance)")
  rank = int(np.sum(eigenvalues > RANK_TOLERANCE * largest))
  n_components = min(k, rank)
  if n_components < k:
    logger.warning(
      f"Requested {k} components but the centred sample has numerical rank {rank}; "
      f"returning {n_components}"
    )

  directions = []
  for j in range(n_components):
    combination = vectors[:, j] @ y
    combination = combination / np.sqrt(np.dot(combination * g.weights, combination))
    directions.append(combination * _fix_sign(combination))
  directions = np.vstack(directions)
  scores = weighted @ directions.T

  total = float(np.sum(eigenvalues))
  explained_ratio = eigenvalues[:n_components] / total

  degenerate_pairs = []
  for j in range(n_components - 1):
    if abs(eigenvalues[j] - eigenvalues[j + 1]) < DEGENERACY_TOLERANCE * largest:
      degenerate_pairs.append((j + 1, j + 2))
  if degenerate_pairs:
    logger.warning(f"Degenerate eigenvalues for components {degenerate_pairs}")

  directions_clr = [make_clr_function(ref, ClrSpace.L2_0_SQRTP_LAMBDA, d) for d in directions]
  result = FpcaResult(
    reference=ref,
    mean=mean,
    eigenvalues=eigenvalues,
    directions_clr=directions_clr,
    directions_density=[clr_u_inverse(d) for d in directions_clr],
    scores=scores,
    explained_ratio=explained_ratio,
    labels=labels,
    degenerate_pairs=degenerate_pairs,
  )
  _check_result(result, gram)
  logger.info(
    "wSFPCA on %d densities w.r.t. %s: explained %s",
    n_samples, ref.label, ", ".join(f"{r:.4%}" for r in explained_ratio),
  )
  return result


def _check_result(result: FpcaResult, gram: np.ndarray):
  g = result.reference.grid
  directions = np.vstack([d.values for d in result.directions_clr])
  products = (directions * g.weights) @ directions.T
  deviation = np.max(np.abs(products - np.eye(len(directions))))
  if deviation > ORTHONORMALITY_TOLERANCE:
    raise NumericalError(f"Principal directions are not orthonormal (max deviation {deviation:.3e})")

  trace = float(np.trace(gram))
  if abs(result.total_variance - trace) > TRACE_TOLERANCE * max(trace, np.finfo(float).tiny):
    raise NumericalError(
      f"Eigenvalue sum {result.total_variance:.12e} does not match total variance {trace:.12e}"
    )


def project_scores(result: FpcaResult, f: Density) -> np.ndarray:
  """Scores of f (centred at the sample mean) on every principal direction."""
  check_same_reference(result.mean, f)
  g = result.reference.grid
  centred = clr_u(f).values - clr_u(result.mean).values
  return np.array([np.dot(centred * g.weights, d.values) for d in result.directions_clr])


def project(result: FpcaResult, f: Density, k: int) -> Density:
  """mean (+) sum_{j<=k} score_j (.) xi_j; k = 0 gives the mean."""
  if not (0 <= k <= result.n_components):
    raise DataError(f"Projection order must be in [0, {result.n_components}], got {k}")
  scores = project_scores(result, f)
  projection = result.mean
  for j in range(k):
    projection = perturb(projection, power(scores[j], result.directions_density[j]))
  return projection


def harmonic(result: FpcaResult, j: int, multiple: float = DEFAULT_HARMONIC_MULTIPLE) -> Tuple[Density, Density]:
  """mean (+)/(-) (multiple * sqrt(rho_j)) (.) xi_j for the 1-based component j."""
  if not (1 <= j <= result.n_components):
    raise DataError(f"Component index must be in [1, {result.n_components}], got {j}")
  coefficient = multiple * np.sqrt(result.eigenvalues[j - 1])
  direction = result.directions_density[j - 1]
  plus = perturb(result.mean, power(coefficient, direction))
  minus = perturb(result.mean, power(-coefficient, direction))
  return plus, minus


def scores_table(result: FpcaResult) -> pd.DataFrame:
  columns = [f"PC{j + 1}" for j in range(result.n_components)]
  table = pd.DataFrame(result.scores, index=pd.Index(result.labels, name="id"), columns=columns)
  return table
