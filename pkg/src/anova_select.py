"""一元配置分散分析の平方和分解による参照測度の選択"""
import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import pandas as pd

from . import DataError
from .measure import Density, change_reference, parse_reference_spec
from .sfpca import wsfpca

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupedScores:
  scores: np.ndarray = field(repr=False)
  groups: np.ndarray = field(repr=False)

  def __post_init__(self):
    scores = np.asarray(self.scores, dtype=float)
    groups = np.asarray(self.groups)
    if scores.ndim != 1 or groups.ndim != 1 or len(scores) != len(groups):
      raise DataError(f"Scores and groups must be equally long vectors: {scores.shape} vs {groups.shape}")
    if not np.all(np.isfinite(scores)):
      raise DataError("Scores contain non-finite values")
    if len(np.unique(groups)) < 2:
      raise DataError("At least two distinct groups are required")
    object.__setattr__(self, "scores", scores)
    object.__setattr__(self, "groups", groups)


class SumOfSquares(NamedTuple):
  ss_b: float
  ss_w: float
  ss_t: float
  ratio: float


def ss_decomposition(gs: GroupedScores) -> SumOfSquares:
  """
  平方和を群間 (SS_B) と群内 (SS_W) に分解する

  Returns:
    SumOfSquares: (ss_b, ss_w, ss_t, ss_b / ss_t)

  Raises:
    DataError: 総平方和が 0 の場合 (比が定義できない)
  """
  x = gs.scores
  _, codes = np.unique(gs.groups, return_inverse=True)
  sizes = np.bincount(codes)
  if np.any(sizes == 0):
    raise DataError("Every group needs at least one member")
  group_means = np.bincount(codes, weights=x) / sizes
  grand_mean = np.mean(x)

  ss_t = float(np.sum((x - grand_mean) ** 2))
  if ss_t <= 0:
    raise DataError("Scores have zero total variance; SS_B/SS_T is undefined")
  ss_b = float(np.sum(sizes * (group_means - grand_mean) ** 2))
  ss_w = ss_t - ss_b
  ratio = min(max(ss_b / ss_t, 0.0), 1.0)
  return SumOfSquares(ss_b=ss_b, ss_w=ss_w, ss_t=ss_t, ratio=ratio)


def select_reference(sample: Sequence[Density], groups: Sequence[str], candidates: Sequence[str]) -> pd.DataFrame:
  """
  候補の参照測度ごとに第 1 主成分スコアの SS_B/SS_T を計算し、降順に並べる

  Args:
    sample: lambda 密度のリスト
    groups: 各密度の群ラベル
    candidates: 参照測度の指定 (``uniform``, ``exp:3e-5`` など)

  Returns:
    pd.DataFrame: reference, ss_b, ss_w, ss_t, ratio, selected の列を持つ表
  """
  if len(candidates) == 0:
    raise DataError("At least one candidate reference is required")
  if len(groups) != len(sample):
    raise DataError(f"Got {len(groups)} group labels for {len(sample)} densities")

  grid = sample[0].grid
  rows = []
  for spec in candidates:
    reference = parse_reference_spec(spec, grid, sample=sample)
    weighted = [change_reference(f, reference) for f in sample]
    result = wsfpca(weighted, k=1)
    decomposition = ss_decomposition(GroupedScores(scores=result.scores[:, 0], groups=np.asarray(groups)))
    logger.info(f"Reference {spec}: SS_B/SS_T = {decomposition.ratio:.6f}")
    rows.append({"reference": spec, **decomposition._asdict()})

  table = pd.DataFrame(rows, columns=["reference", "ss_b", "ss_w", "ss_t", "ratio"])
  # stable sort keeps the supplied order among ties
  table = table.sort_values("ratio", ascending=False, kind="stable").reset_index(drop=True)
  table["selected"] = False
  table.loc[0, "selected"] = True
  return table
