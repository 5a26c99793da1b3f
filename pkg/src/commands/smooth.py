import logging

from .. import UsageError, parse_domain, parse_float_list
from ..grid import DEFAULT_GRID_SIZE, make_grid
from ..measure import LEBESGUE
from ..preprocess import DEFAULT_PENALTY, default_knots, histogram_to_density
from ..table_io import read_histograms, write_density_table

logger = logging.getLogger(__name__)


def add_arguments(parser):
  parser.add_argument("--input", required=True, help="histogram CSV (id,lower,upper,count)")
  parser.add_argument("--domain", required=True, help="a:b")
  parser.add_argument("--knots", default=None, help="comma separated knots including both ends")
  parser.add_argument("--penalty", type=float, default=DEFAULT_PENALTY)
  parser.add_argument("--n", type=int, default=DEFAULT_GRID_SIZE)
  parser.add_argument("--impute", action="store_true", help="add a pseudo-count to empty classes")
  parser.add_argument("--out", required=True)


def run(args):
  a, b = parse_domain(args.domain)
  knots = default_knots(a, b) if args.knots is None else parse_float_list(args.knots)
  if not args.penalty >= 0:
    raise UsageError(f"--penalty must be non-negative: {args.penalty}")
  try:
    g = make_grid(a, b, args.n)
  except ValueError as e:
    raise UsageError(str(e)) from e

  histograms = read_histograms(args.input)
  knot_text = ",".join(f"{k:g}" for k in knots)
  logger.info(f"Smoothing {len(histograms)} histograms on [{a:g}, {b:g}] (knots {knot_text}, penalty {args.penalty:g})")
  densities = []
  for h in histograms:
    densities.append(histogram_to_density(h, g, knots=knots, penalty=args.penalty, impute=args.impute))
  write_density_table(args.out, densities, [h.label for h in histograms], reference_spec=LEBESGUE)
  logger.info(f"Wrote {len(densities)} densities to {args.out}")
