"""wSFPCA of a density table w.r.t. a chosen reference.

The input densities are lambda-densities; they are re-expressed w.r.t. the
reference, analysed in B2(P) and the principal directions, harmonics and the
mean are written back both as P-densities and unweighted into B2(lambda).
"""
import logging
import os

import numpy as np

from .. import DataError, UsageError, format_number
from ..clr import omega_inverse
from ..grid import make_grid
from ..measure import LEBESGUE, change_reference, reference_lebesgue
from ..sfpca import DEFAULT_HARMONIC_MULTIPLE, covariance_matrix, harmonic, scores_table, wsfpca
from ..table_io import format_domain, read_density_table, write_curve_table, write_result_document, write_table
from . import reference_from_flag

logger = logging.getLogger(__name__)

RESULT_FILE = "result.json"
SCORES_FILE = "scores.csv"
DIRECTIONS_CLR_FILE = "directions_clr.csv"
DIRECTIONS_DENSITY_FILE = "directions_density.csv"
DIRECTIONS_UNWEIGHTED_FILE = "directions_unweighted.csv"
HARMONICS_UNWEIGHTED_FILE = "harmonics_unweighted.csv"
MEAN_FILE = "mean.csv"
COVARIANCE_FILE = "covariance_clr_u.csv"
DEFAULT_COVARIANCE_NODES = 65


def add_arguments(parser):
  parser.add_argument("--input", required=True, help="density table w.r.t. lebesgue")
  parser.add_argument("--reference", default="uniform", help="lebesgue, uniform, exp:<delta> or mean")
  parser.add_argument("--components", type=int, default=2)
  parser.add_argument("--harmonic-multiple", type=float, default=DEFAULT_HARMONIC_MULTIPLE)
  parser.add_argument(
    "--covariance-nodes", type=int, default=DEFAULT_COVARIANCE_NODES,
    help="nodes per axis of the written covariance surface (0 skips it)",
  )
  parser.add_argument("--out-dir", required=True)


def run(args):
  if args.components < 1:
    raise UsageError(f"--components must be positive: {args.components}")
  if not np.isfinite(args.harmonic_multiple):
    raise UsageError(f"--harmonic-multiple must be finite: {args.harmonic_multiple}")
  if args.covariance_nodes != 0 and args.covariance_nodes < 3:
    raise UsageError(f"--covariance-nodes must be 0 or at least 3: {args.covariance_nodes}")

  table = read_density_table(args.input)
  if table.reference_spec != LEBESGUE:
    raise DataError(f"{args.input}: expected densities w.r.t. {LEBESGUE}, got {table.reference_spec}")
  g = table.grid
  sample = table.densities(reference_lebesgue(g))
  reference = reference_from_flag(args.reference, g, sample=sample)
  weighted = [change_reference(f, reference) for f in sample]

  result = wsfpca(weighted, k=args.components, labels=table.labels)

  os.makedirs(args.out_dir, exist_ok=True)
  def path(name):
    return os.path.join(args.out_dir, name)

  components = [f"PC{j + 1}" for j in range(result.n_components)]
  header = {"reference": args.reference}

  scores = scores_table(result)
  write_table(path(SCORES_FILE), scores)
  write_curve_table(
    path(DIRECTIONS_CLR_FILE), g, components,
    [d.values for d in result.directions_clr],
    {**header, "space": "clr_u"},
  )
  write_curve_table(
    path(DIRECTIONS_DENSITY_FILE), g, components,
    [d.values for d in result.directions_density],
    header,
  )
  write_curve_table(
    path(DIRECTIONS_UNWEIGHTED_FILE), g, components,
    [omega_inverse(d).values for d in result.directions_density],
    {"reference": LEBESGUE, "unweighted-from": args.reference},
  )

  harmonic_labels = []
  harmonic_values = []
  for j in range(1, result.n_components + 1):
    plus, minus = harmonic(result, j, multiple=args.harmonic_multiple)
    harmonic_labels += [f"PC{j}+", f"PC{j}-"]
    harmonic_values += [omega_inverse(plus).values, omega_inverse(minus).values]
  write_curve_table(
    path(HARMONICS_UNWEIGHTED_FILE), g, harmonic_labels, harmonic_values,
    {"reference": LEBESGUE, "unweighted-from": args.reference, "multiple": repr(args.harmonic_multiple)},
  )
  write_curve_table(
    path(MEAN_FILE), g, ["mean", "mean_unweighted"],
    [result.mean.values, omega_inverse(result.mean).values],
    header,
  )

  files = {
    "scores": SCORES_FILE,
    "directions_clr": DIRECTIONS_CLR_FILE,
    "directions_density": DIRECTIONS_DENSITY_FILE,
    "directions_unweighted": DIRECTIONS_UNWEIGHTED_FILE,
    "harmonics_unweighted": HARMONICS_UNWEIGHTED_FILE,
    "mean": MEAN_FILE,
  }
  if args.covariance_nodes:
    # one column per second argument u, labelled by its node
    cg = make_grid(g.a, g.b, args.covariance_nodes)
    write_curve_table(
      path(COVARIANCE_FILE), cg, [format_number(u) for u in cg.nodes],
      covariance_matrix(weighted, on=cg),
      {**header, "space": "clr_u"},
    )
    files["covariance"] = COVARIANCE_FILE

  document = {
    "reference": args.reference,
    "domain": format_domain(g),
    "nodes": g.n,
    "densities": len(sample),
    "components": result.n_components,
    "eigenvalues": result.eigenvalues.tolist(),
    "total_variance": result.total_variance,
    "explained_ratio": result.explained_ratio.tolist(),
    "cumulative_ratio": result.cumulative_ratio.tolist(),
    "degenerate_pairs": [list(pair) for pair in result.degenerate_pairs],
    "harmonic_multiple": args.harmonic_multiple,
    "scores": {
      "index": scores.index.tolist(),
      "columns": scores.columns.tolist(),
      "data": scores.to_numpy().tolist(),
    },
    "files": files,
  }
  write_result_document(path(RESULT_FILE), document)
  logger.info(f"Wrote wSFPCA results for {len(sample)} densities to {args.out_dir}")
