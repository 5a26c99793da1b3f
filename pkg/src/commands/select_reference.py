import logging
import sys

from .. import DataError, UsageError, parse_name_list
from ..anova_select import select_reference
from ..measure import LEBESGUE, reference_lebesgue
from ..table_io import align_groups, read_density_table, read_groups, write_table
from . import reference_from_flag

logger = logging.getLogger(__name__)

DEFAULT_CANDIDATES = "uniform,exp:1.5e-5,exp:3e-5,exp:6e-5,exp:1.2e-4"


def add_arguments(parser):
  parser.add_argument("--input", required=True, help="density table w.r.t. lebesgue")
  parser.add_argument("--groups", required=True, help="CSV with id,group rows")
  parser.add_argument("--candidates", default=DEFAULT_CANDIDATES)
  parser.add_argument("--out", default=None, help="ranked table (stdout when omitted)")


def run(args):
  candidates = parse_name_list(args.candidates)
  if not candidates:
    raise UsageError("--candidates must name at least one reference")

  table = read_density_table(args.input)
  if table.reference_spec != LEBESGUE:
    raise DataError(f"{args.input}: expected densities w.r.t. {LEBESGUE}, got {table.reference_spec}")
  sample = table.densities(reference_lebesgue(table.grid))
  # fail on malformed candidates before any analysis runs
  for spec in candidates:
    reference_from_flag(spec, table.grid, sample=sample)

  groups = align_groups(table.labels, read_groups(args.groups))
  ranking = select_reference(sample, groups, candidates)
  winner = ranking.loc[ranking["selected"], "reference"].iloc[0]
  logger.info(f"Selected reference {winner} out of {len(candidates)} candidates")
  write_table(args.out if args.out is not None else sys.stdout, ranking, index=False)
