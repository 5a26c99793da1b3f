"""Synthetic density families for the simulation study.

The study uses 81 log-normal densities truncated to [1, 10] with
mu_i = 0.6 + 0.25 (i - 1) and sigma_j = 0.5 + 0.07 (j - 1), i, j = 1..9,
labelled kappa = j + 9 (i - 1).
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import stats

from . import DataError
from .clr import ClrFunction, ClrSpace, make_clr_function
from .grid import Grid
from .measure import Density, density_from_log, reference_lebesgue
from .preprocess import Histogram, histogram_from_observations

logger = logging.getLogger(__name__)

STUDY_DOMAIN = (1.0, 10.0)
STUDY_LEVELS = 9
MU_START, MU_STEP = 0.6, 0.25
SIGMA_START, SIGMA_STEP = 0.5, 0.07


@dataclass(frozen=True)
class LogNormalParams:
  mu: float
  sigma: float
  a: float = STUDY_DOMAIN[0]
  b: float = STUDY_DOMAIN[1]

  def __post_init__(self):
    if not (self.sigma > 0 and math.isfinite(self.sigma)):
      raise ValueError(f"sigma must be positive: {self.sigma}")
    if not math.isfinite(self.mu):
      raise ValueError(f"mu must be finite: {self.mu}")
    if not (0 < self.a < self.b):
      raise ValueError(f"Log-normal support needs 0 < a < b, got [{self.a}, {self.b}]")


def _check_support(params: LogNormalParams, g: Grid):
  if g.a <= 0:
    raise DataError(f"Log-normal densities need a positive grid, got [{g.a}, {g.b}]")
  if g.a < params.a or g.b > params.b:
    raise DataError(
      f"Grid [{g.a}, {g.b}] extends beyond the truncation domain [{params.a}, {params.b}]"
    )


def lognormal_density(params: LogNormalParams, g: Grid) -> Density:
  """Truncated log-normal lambda-density, (1/t) exp(-(ln t - mu)^2 / (2 sigma^2))."""
  _check_support(params, g)
  log_t = np.log(g.nodes)
  log_kernel = -log_t - (log_t - params.mu) ** 2 / (2.0 * params.sigma ** 2)
  return density_from_log(reference_lebesgue(g), log_kernel)


def lognormal_clr(params: LogNormalParams, g: Grid) -> ClrFunction:
  """
  Closed-form clr_lambda of the truncated log-normal on [a, b]:

    -(ln^2 t - M2) / (2 sigma^2) + (mu / sigma^2 - 1) (ln t - M1)

  with M1, M2 the exact means of ln t and ln^2 t over [a, b].
  """
  _check_support(params, g)
  a, b = g.a, g.b

  def log_antiderivative(t):
    return t * math.log(t) - t

  def log_squared_antiderivative(t):
    return t * math.log(t) ** 2 - 2.0 * t * math.log(t) + 2.0 * t

  m1 = (log_antiderivative(b) - log_antiderivative(a)) / (b - a)
  m2 = (log_squared_antiderivative(b) - log_squared_antiderivative(a)) / (b - a)
  s2 = params.sigma ** 2
  log_t = np.log(g.nodes)
  values = -(log_t ** 2 - m2) / (2.0 * s2) + (params.mu / s2 - 1.0) * (log_t - m1)
  return make_clr_function(reference_lebesgue(g), ClrSpace.L2_0_LAMBDA, values)


def study_lognormal_params() -> List[Tuple[int, LogNormalParams]]:
  """(kappa, params) for the 81 study densities in kappa order."""
  params = []
  for i in range(1, STUDY_LEVELS + 1):
    for j in range(1, STUDY_LEVELS + 1):
      kappa = j + STUDY_LEVELS * (i - 1)
      mu = MU_START + MU_STEP * (i - 1)
      sigma = SIGMA_START + SIGMA_STEP * (j - 1)
      params.append((kappa, LogNormalParams(mu=mu, sigma=sigma)))
  return params


def paper_lognormal_sample(g: Grid) -> Tuple[List[Density], List[int]]:
  if (g.a, g.b) != STUDY_DOMAIN:
    raise DataError(
      f"The log-normal study is defined on [{STUDY_DOMAIN[0]:g}, {STUDY_DOMAIN[1]:g}], "
      f"got [{g.a}, {g.b}]"
    )
  densities = []
  labels = []
  for kappa, params in study_lognormal_params():
    densities.append(lognormal_density(params, g))
    labels.append(kappa)
  logger.info("Generated %d log-normal densities on %d nodes", len(densities), g.n)
  return densities, labels


def sample_lognormal_observations(params: LogNormalParams, n_obs: int, rng: np.random.Generator) -> np.ndarray:
  """Draws from the log-normal truncated to [a, b] by inverse-CDF sampling."""
  distribution = stats.lognorm(s=params.sigma, scale=math.exp(params.mu))
  lower, upper = distribution.cdf(params.a), distribution.cdf(params.b)
  u = rng.uniform(lower, upper, size=int(n_obs))
  return np.clip(distribution.ppf(u), params.a, params.b)


def sample_lognormal_histograms(params_list, n_obs: int, seed: int = 0) -> List[Histogram]:
  """One Sturges-class histogram on [a, b] per parameter set, reproducible by seed."""
  rng = np.random.default_rng(seed)
  histograms = []
  for label, params in params_list:
    observations = sample_lognormal_observations(params, n_obs, rng)
    histograms.append(histogram_from_observations(observations, label=str(label), lo=params.a, hi=params.b))
  return histograms
