"""ヒストグラムから平滑化 clr 曲線・密度関数を作る前処理モジュール"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import legendre
from scipy import interpolate, linalg

from . import ConstraintViolationError, DataError, NumericalError
from .clr import ClrFunction, ClrSpace, clr_p_inverse, make_clr_function
from .grid import Grid
from .measure import Density, reference_lebesgue

logger = logging.getLogger(__name__)

SPLINE_DEGREE = 3
DEFAULT_KNOT_COUNT = 4
DEFAULT_PENALTY = 1e-3
PSEUDO_COUNT = 0.5
# KKT systems worse than this are treated as singular
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class Histogram:
  class_edges: np.ndarray = field(repr=False)
  counts: np.ndarray = field(repr=False)
  label: str = ""

  def __post_init__(self):
    edges = np.asarray(self.class_edges, dtype=float)
    counts = np.asarray(self.counts, dtype=float)
    if edges.ndim != 1 or len(edges) < 2:
      raise DataError(f"Histogram {self.label!r} needs at least one class")
    if len(counts) != len(edges) - 1:
      raise DataError(
        f"Histogram {self.label!r} has {len(counts)} counts for {len(edges) - 1} classes"
      )
    if not np.all(np.diff(edges) > 0):
      raise DataError(f"Histogram {self.label!r} class edges must be strictly increasing")
    if np.any(counts < 0) or not np.all(np.isfinite(counts)):
      raise DataError(f"Histogram {self.label!r} has negative or non-finite counts")
    if np.sum(counts) <= 0:
      raise DataError(f"Histogram {self.label!r} is empty")
    object.__setattr__(self, "class_edges", edges)
    object.__setattr__(self, "counts", counts)

  @property
  def midpoints(self) -> np.ndarray:
    return (self.class_edges[:-1] + self.class_edges[1:]) / 2.0

  @property
  def proportions(self) -> np.ndarray:
    return self.counts / np.sum(self.counts)


def sturges_classes(n_obs: int, lo: float, hi: float) -> np.ndarray:
  """
  Sturges 則による等間隔の階級境界を返す

  Args:
    n_obs: 観測数
    lo: 下限
    hi: 上限

  Returns:
    np.ndarray: ceil(log2(n_obs)) + 1 個の階級の境界 (長さ m + 1)
  """
  if int(n_obs) != n_obs or n_obs < 1:
    raise ValueError(f"Sturges rule needs a positive observation count: {n_obs}")
  if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
    raise ValueError(f"Invalid class range: [{lo}, {hi}]")
  m = math.ceil(math.log2(int(n_obs))) + 1
  return np.linspace(lo, hi, m + 1)


def histogram_from_observations(observations, label="", lo: Optional[float] = None, hi: Optional[float] = None) -> Histogram:
  """
  生の観測値から Sturges 則の階級でヒストグラムを作る

  範囲外の観測値は除外する (極端な値は補完せずに落とす)。
  """
  observations = np.asarray(observations, dtype=float)
  observations = observations[np.isfinite(observations)]
  if lo is None:
    lo = float(np.min(observations))
  if hi is None:
    hi = float(np.max(observations))
  inside = observations[(observations >= lo) & (observations <= hi)]
  if len(inside) == 0:
    raise DataError(f"No observations of {label!r} inside [{lo}, {hi}]")
  if len(inside) < len(observations):
    logger.debug("Dropped %d observations of %r outside [%s, %s]", len(observations) - len(inside), label, lo, hi)
  edges = sturges_classes(len(inside), lo, hi)
  counts, _ = np.histogram(inside, bins=edges)
  return Histogram(class_edges=edges, counts=counts.astype(float), label=label)


def histogram_to_dclr(h: Histogram, impute=False) -> np.ndarray:
  """
  階級の比率に離散 clr 変換を適用する

  Args:
    h: ヒストグラム
    impute: True の場合、全階級に 0.5 の擬似度数を加える

  Returns:
    np.ndarray: 階級中点ごとの離散 clr 値 (総和 0)

  Raises:
    ConstraintViolationError: 度数 0 の階級があり impute が False の場合
  """
  counts = h.counts
  if np.any(counts == 0):
    if not impute:
      raise ConstraintViolationError(
        f"Histogram {h.label!r} has {int(np.sum(counts == 0))} empty classes; "
        "use imputation to add pseudo-counts"
      )
    logger.warning("Adding pseudo-count %s to every class of histogram %r", PSEUDO_COUNT, h.label)
    counts = counts + PSEUDO_COUNT
  log_q = np.log(counts / np.sum(counts))
  return log_q - np.mean(log_q)


def default_knots(lo: float, hi: float, count: int = DEFAULT_KNOT_COUNT) -> np.ndarray:
  return np.linspace(lo, hi, count)


def _knot_vector(breaks: np.ndarray) -> np.ndarray:
  return np.concatenate([
    np.repeat(breaks[0], SPLINE_DEGREE),
    breaks,
    np.repeat(breaks[-1], SPLINE_DEGREE),
  ])


def _design_matrix(x: np.ndarray, knots: np.ndarray) -> np.ndarray:
  return interpolate.BSpline.design_matrix(x, knots, SPLINE_DEGREE).toarray()


def _roughness_matrix(breaks: np.ndarray, knots: np.ndarray, n_basis: int) -> np.ndarray:
  """R_ij = integral of B_i'' B_j'' (exact: Gauss-Legendre on every knot span)."""
  nodes, weights = legendre.leggauss(SPLINE_DEGREE)
  x = []
  w = []
  for left, right in zip(breaks[:-1], breaks[1:]):
    half = (right - left) / 2.0
    x.append(left + half * (nodes + 1.0))
    w.append(half * weights)
  x = np.concatenate(x)
  w = np.concatenate(w)

  second = np.empty((len(x), n_basis))
  for i in range(n_basis):
    coefficients = np.zeros(n_basis)
    coefficients[i] = 1.0
    second[:, i] = interpolate.BSpline(knots, coefficients, SPLINE_DEGREE).derivative(2)(x)
  return second.T @ (second * w[:, None])


def smooth_dclr(x, y, g: Grid, penalty: float = DEFAULT_PENALTY, knots: Optional[Sequence[float]] = None) -> ClrFunction:
  """
  制約付き平滑化 3 次スプラインで離散 clr 値を平滑化する

  sum_j (s(x_j) - y_j)^2 + penalty * integral s''^2 を
  integral s dlambda = 0 の制約の下で最小化し (Lagrange 乗数 1 つの KKT 系)、
  グリッド上の値を返す。

  Args:
    x: 階級中点
    y: 離散 clr 値
    g: 出力グリッド
    penalty: 粗さペナルティ (0 以上)
    knots: スプラインの節点 (両端を含む)。省略時はグリッド範囲の 4 等間隔点

  Returns:
    ClrFunction: L2_0(lambda) の関数

  Raises:
    NumericalError: 連立方程式が特異な場合
  """
  x = np.asarray(x, dtype=float)
  y = np.asarray(y, dtype=float)
  if x.shape != y.shape or x.ndim != 1:
    raise DataError(f"Mismatched smoothing data: x{x.shape}, y{y.shape}")
  if len(x) < 3:
    raise DataError(f"Smoothing needs at least 3 points, got {len(x)}")
  if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
    raise DataError("Smoothing data contains non-finite values")
  if not (penalty >= 0 and math.isfinite(penalty)):
    raise ValueError(f"Penalty must be a non-negative number: {penalty}")

  breaks = default_knots(g.a, g.b) if knots is None else np.asarray(knots, dtype=float)
  if len(breaks) < 2 or not np.all(np.diff(breaks) > 0):
    raise ValueError(f"Knots must be strictly increasing: {breaks}")
  if not (np.isclose(breaks[0], g.a) and np.isclose(breaks[-1], g.b)):
    raise ValueError(f"Knots must span the grid domain [{g.a}, {g.b}], got [{breaks[0]}, {breaks[-1]}]")
  breaks = breaks.copy()
  breaks[0], breaks[-1] = g.a, g.b
  if np.any(x < g.a) or np.any(x > g.b):
    raise DataError(f"Smoothing abscissae must lie inside [{g.a}, {g.b}]")

  knot_vector = _knot_vector(breaks)
  n_basis = len(knot_vector) - SPLINE_DEGREE - 1
  basis = _design_matrix(x, knot_vector)
  basis_grid = _design_matrix(g.nodes, knot_vector)
  # discrete integrals, so the constraint holds for the grid quadrature exactly
  constraint = g.weights @ basis_grid
  roughness = _roughness_matrix(breaks, knot_vector, n_basis)

  kkt = np.zeros((n_basis + 1, n_basis + 1))
  kkt[:n_basis, :n_basis] = 2.0 * (basis.T @ basis + penalty * roughness)
  kkt[:n_basis, n_basis] = constraint
  kkt[n_basis, :n_basis] = constraint
  rhs = np.concatenate([2.0 * basis.T @ y, [0.0]])

  condition = np.linalg.cond(kkt)
  logger.debug("Smoothing KKT system: %d basis functions, condition %.3e", n_basis, condition)
  if not np.isfinite(condition) or condition > MAX_CONDITION:
    raise NumericalError(
      f"Singular smoothing system ({len(x)} points, {n_basis} basis functions, penalty {penalty})"
    )
  try:
    solution = linalg.solve(kkt, rhs, assume_a="sym")
  except linalg.LinAlgError as e:
    raise NumericalError(f"Singular smoothing system: {e}") from e

  values = basis_grid @ solution[:n_basis]
  return make_clr_function(reference_lebesgue(g), ClrSpace.L2_0_LAMBDA, values)


def clr_to_lambda_density(v: ClrFunction) -> Density:
  """平滑化した clr 曲線を指数変換して lambda 密度にする"""
  lebesgue = v.reference
  return clr_p_inverse(
    make_clr_function(lebesgue, ClrSpace.L2_0_P, v.values),
    lebesgue,
  )


def histogram_to_density(h: Histogram, g: Grid, knots: Optional[Sequence[float]] = None, penalty: float = DEFAULT_PENALTY, impute=False) -> Density:
  dclr = histogram_to_dclr(h, impute=impute)
  smoothed = smooth_dclr(h.midpoints, dclr, g, penalty=penalty, knots=knots)
  return clr_to_lambda_density(smoothed)
