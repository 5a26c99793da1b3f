"""CSV and JSON files exchanged by the command-line tools.

Curve tables are CSV files whose first column ``t`` holds the grid nodes and
every further column one function on that grid. They start with ``#``
metadata lines; ``# domain=a:b`` is mandatory, density tables also carry
``# reference=<spec>``. Numbers are written with 17 significant digits so that
a written table reads back to identical floats.
"""
import csv
import json
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from . import DataError, UsageError, format_number, parse_domain
from .grid import Grid, make_grid
from .measure import LEBESGUE, Density, ReferenceMeasure, make_density
from .preprocess import Histogram

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
NODE_COLUMN = "t"
HISTOGRAM_COLUMNS = ["id", "lower", "upper", "count"]
GROUP_COLUMNS = ["id", "group"]
# externally produced tables may round the node column
NODE_TOLERANCE = 1e-9

_metadata_regex = re.compile(r"^#\s*(?P<key>[A-Za-z_][\w-]*)\s*=\s*(?P<value>.*?)\s*$")


@dataclass(frozen=True)
class CurveTable:
  grid: Grid
  labels: List[str]
  values: np.ndarray = field(repr=False)
  metadata: Dict[str, str] = field(default_factory=dict)

  def column(self, label: str) -> np.ndarray:
    try:
      return self.values[self.labels.index(label)]
    except ValueError:
      raise DataError(f"No column {label!r} in table (columns: {', '.join(self.labels)})")


@dataclass(frozen=True)
class DensityTable(CurveTable):
  @property
  def reference_spec(self) -> str:
    return self.metadata.get("reference", LEBESGUE)

  def densities(self, reference: ReferenceMeasure) -> List[Density]:
    return [make_density(reference, row) for row in self.values]


def format_domain(g: Grid) -> str:
  return f"{format_number(g.a)}:{format_number(g.b)}"


def write_curve_table(path, g: Grid, labels: Sequence[str], values, metadata: Optional[Mapping[str, str]] = None):
  labels = [str(label) for label in labels]
  values = g.check_values(np.atleast_2d(values), "curve table")
  if len(labels) != len(values):
    raise DataError(f"Got {len(labels)} labels for {len(values)} curves")
  if len(set(labels)) != len(labels):
    raise DataError("Curve labels must be unique")
  if NODE_COLUMN in labels:
    raise DataError(f"{NODE_COLUMN!r} is reserved for the node column")
  if not np.all(np.isfinite(values)):
    raise DataError("Curve table contains non-finite values")

  header = {"domain": format_domain(g)}
  header.update(metadata or {})
  table = pd.DataFrame(values.T, columns=labels)
  table.insert(0, NODE_COLUMN, g.nodes)

  with open(path, "w", encoding="utf-8", newline="") as f:
    for key, value in header.items():
      f.write(f"# {key}={value}\n")
    table.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
  logger.debug("Wrote %d curves on %d nodes to %s", len(labels), g.n, path)


def write_density_table(path, densities: Sequence[Density], labels: Sequence[str], reference_spec: str = LEBESGUE, metadata: Optional[Mapping[str, str]] = None):
  if len(densities) == 0:
    raise DataError("No densities to write")
  g = densities[0].grid
  header = {"reference": reference_spec}
  header.update(metadata or {})
  write_curve_table(path, g, labels, np.vstack([f.values for f in densities]), header)


def _read_metadata(path):
  metadata = {}
  skip = 0
  header_line = ""
  with open(path, encoding="utf-8") as f:
    for line in f:
      if not line.startswith("#"):
        header_line = line.rstrip("\r\n")
        break
      skip += 1
      m = _metadata_regex.match(line)
      if m is None:
        logger.debug("Ignoring comment line in %s: %s", path, line.rstrip())
        continue
      metadata[m.group("key")] = m.group("value")
  return metadata, skip, header_line


def read_curve_table(path) -> CurveTable:
  metadata, skip, header_line = _read_metadata(path)
  if "domain" not in metadata:
    raise DataError(f"{path}: missing '# domain=a:b' header line")
  try:
    a, b = parse_domain(metadata["domain"])
  except UsageError as e:
    raise DataError(f"{path}: {e}") from e

  columns = next(csv.reader([header_line]), [])
  if not columns or columns[0] != NODE_COLUMN:
    raise DataError(f"{path}: first column must be {NODE_COLUMN!r}")
  if len(columns) < 2:
    raise DataError(f"{path}: table has no curve columns")
  if len(set(columns)) != len(columns):
    raise DataError(f"{path}: duplicate column labels")

  try:
    table = pd.read_csv(path, skiprows=skip, dtype=float, float_precision="round_trip")
  except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
    raise DataError(f"{path}: cannot parse table: {e}") from e
  if table.isna().to_numpy().any():
    raise DataError(f"{path}: table has missing or non-numeric entries")

  nodes = table.iloc[:, 0].to_numpy()
  try:
    g = make_grid(a, b, len(nodes))
  except ValueError as e:
    raise DataError(f"{path}: {e}") from e
  if np.max(np.abs(nodes - g.nodes)) > NODE_TOLERANCE * g.length:
    raise DataError(f"{path}: node column is not the uniform grid on [{a}, {b}] with {len(nodes)} nodes")

  values = table.iloc[:, 1:].to_numpy().T.copy()
  return CurveTable(grid=g, labels=[str(c) for c in table.columns[1:]], values=values, metadata=metadata)


def read_density_table(path) -> DensityTable:
  table = read_curve_table(path)
  if np.min(table.values) <= 0:
    raise DataError(f"{path}: density values must be strictly positive")
  return DensityTable(grid=table.grid, labels=table.labels, values=table.values, metadata=table.metadata)


def write_histograms(path, histograms: Sequence[Histogram]):
  """Long form: one row per class, ``id,lower,upper,count``."""
  frames = []
  for h in histograms:
    frames.append(pd.DataFrame({
      "id": h.label,
      "lower": h.class_edges[:-1],
      "upper": h.class_edges[1:],
      "count": h.counts,
    }))
  table = pd.concat(frames, ignore_index=True)
  table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
  logger.debug("Wrote %d histograms to %s", len(histograms), path)


def read_histograms(path) -> List[Histogram]:
  try:
    table = pd.read_csv(path, dtype={"id": str}, float_precision="round_trip")
  except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
    raise DataError(f"{path}: cannot parse histogram table: {e}") from e
  missing = [c for c in HISTOGRAM_COLUMNS if c not in table.columns]
  if missing:
    raise DataError(f"{path}: missing columns {missing} (expected {','.join(HISTOGRAM_COLUMNS)})")
  if table[HISTOGRAM_COLUMNS].isna().to_numpy().any():
    raise DataError(f"{path}: histogram table has missing entries")

  histograms = []
  for label, rows in table.groupby("id", sort=False):
    lower = rows["lower"].to_numpy(dtype=float)
    upper = rows["upper"].to_numpy(dtype=float)
    if not np.array_equal(lower[1:], upper[:-1]):
      raise DataError(f"{path}: classes of histogram {label!r} are not contiguous")
    edges = np.append(lower, upper[-1])
    histograms.append(Histogram(class_edges=edges, counts=rows["count"].to_numpy(dtype=float), label=str(label)))
  if not histograms:
    raise DataError(f"{path}: no histograms")
  return histograms


def read_groups(path) -> pd.Series:
  try:
    table = pd.read_csv(path, dtype=str)
  except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
    raise DataError(f"{path}: cannot parse groups table: {e}") from e
  if list(table.columns[:2]) != GROUP_COLUMNS:
    raise DataError(f"{path}: expected columns {','.join(GROUP_COLUMNS)}")
  if table[GROUP_COLUMNS].isna().to_numpy().any():
    raise DataError(f"{path}: groups table has missing entries")
  if table["id"].duplicated().any():
    raise DataError(f"{path}: duplicate ids in groups table")
  return table.set_index("id")["group"]


def align_groups(labels: Sequence[str], groups: pd.Series) -> List[str]:
  """Group of every density label, in label order."""
  missing = [label for label in labels if label not in groups.index]
  if missing:
    raise DataError(f"No group for densities {missing}")
  return [groups[label] for label in labels]


def write_table(path, table: pd.DataFrame, index=True):
  table.to_csv(path, index=index, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_result_document(path, document: Mapping):
  with open(path, "w", encoding="utf-8", newline="\n") as f:
    json.dump(document, f, indent=2, ensure_ascii=False)
    f.write("\n")


def read_result_document(path) -> dict:
  try:
    with open(path, encoding="utf-8") as f:
      return json.load(f)
  except json.JSONDecodeError as e:
    raise DataError(f"{path}: invalid result document: {e}") from e
