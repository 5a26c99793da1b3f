"""Hilbert-space algebra of B2(P): perturbation, powering, inner product,
distance, sample mean and centring."""
import logging
import math
from typing import List, Sequence

import numpy as np

from . import DataError
from .clr import clr_p
from .measure import Density, check_same_reference, make_density, normalize_representative

logger = logging.getLogger(__name__)


def perturb(f: Density, g: Density) -> Density:
  """f (+)_P g: pointwise product of P-densities."""
  ref = check_same_reference(f, g)
  return normalize_representative(Density(ref, f.values * g.values))


def power(alpha: float, f: Density) -> Density:
  """alpha (.)_P f: pointwise power of a P-density."""
  alpha = float(alpha)
  if not math.isfinite(alpha):
    raise DataError(f"Powering scalar must be finite, got {alpha}")
  log_f = alpha * np.log(f.values)
  return make_density(f.reference, np.exp(log_f - np.max(log_f)))


def inverse(f: Density) -> Density:
  """(-)f, the perturbation inverse."""
  return power(-1.0, f)


def subtract(f: Density, g: Density) -> Density:
  """f (-)_P g."""
  return perturb(f, inverse(g))


def inner_product(f: Density, g: Density) -> float:
  """<f, g>_B(P) = sum_k w_k p_k clr_P(f)_k clr_P(g)_k."""
  ref = check_same_reference(f, g)
  return ref.grid.inner(clr_p(f).values, clr_p(g).values, weight=ref.p)


def inner_product_pairwise(f: Density, g: Density) -> float:
  """
  Double-integral form of the inner product,
  1/(2 P(Omega)) sum_t sum_u w_t w_u p_t p_u ln(f_t/f_u) ln(g_t/g_u).

  O(n^2) in memory and time; used as a cross-check of inner_product.
  """
  ref = check_same_reference(f, g)
  wp = ref.grid.weights * ref.p
  log_f = np.log(f.values)
  log_g = np.log(g.values)
  diff_f = log_f[:, None] - log_f[None, :]
  diff_g = log_g[:, None] - log_g[None, :]
  return float(np.sum(wp[:, None] * wp[None, :] * diff_f * diff_g) / (2.0 * ref.total))


def norm(f: Density) -> float:
  return math.sqrt(max(inner_product(f, f), 0.0))


def distance(f: Density, g: Density) -> float:
  return norm(subtract(f, g))


def sample_mean(sample: Sequence[Density]) -> Density:
  """(1/N) (.)_P (+)_i f_i, computed in log space."""
  if len(sample) == 0:
    raise DataError("Cannot average an empty sample")
  ref = check_same_reference(*sample)
  mean_log = np.mean(np.log(np.vstack([f.values for f in sample])), axis=0)
  return make_density(ref, np.exp(mean_log - np.max(mean_log)))


def center(sample: Sequence[Density]) -> List[Density]:
  """f_i (-)_P mean, for every element of the sample."""
  mean = sample_mean(sample)
  mean_inverse = inverse(mean)
  logger.debug("Centring %d densities", len(sample))
  return [perturb(f, mean_inverse) for f in sample]
