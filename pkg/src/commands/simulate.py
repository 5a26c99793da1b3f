import logging

from .. import DataError, UsageError, parse_domain
from ..grid import DEFAULT_GRID_SIZE, make_grid
from ..measure import LEBESGUE
from ..simgen import STUDY_DOMAIN, study_lognormal_params, paper_lognormal_sample, sample_lognormal_histograms
from ..table_io import write_density_table, write_histograms

logger = logging.getLogger(__name__)

FAMILY_DENSITIES = "lognormal-paper"
FAMILY_HISTOGRAMS = "lognormal-paper-histograms"
DEFAULT_OBSERVATIONS = 100000


def add_arguments(parser):
  parser.add_argument("--family", choices=[FAMILY_DENSITIES, FAMILY_HISTOGRAMS], default=FAMILY_DENSITIES)
  parser.add_argument("--domain", default="1:10")
  parser.add_argument("--n", type=int, default=DEFAULT_GRID_SIZE, help="number of grid nodes")
  parser.add_argument("--observations", type=int, default=DEFAULT_OBSERVATIONS, help="draws per histogram")
  parser.add_argument("--seed", type=int, default=0)
  parser.add_argument("--out", required=True)


def run(args):
  a, b = parse_domain(args.domain)
  if (a, b) != STUDY_DOMAIN:
    raise DataError(f"The log-normal study is defined on {STUDY_DOMAIN[0]:g}:{STUDY_DOMAIN[1]:g}, got {args.domain}")

  if args.family == FAMILY_HISTOGRAMS:
    if args.observations < 1:
      raise UsageError(f"--observations must be positive: {args.observations}")
    histograms = sample_lognormal_histograms(study_lognormal_params(), args.observations, seed=args.seed)
    write_histograms(args.out, histograms)
    logger.info(f"Wrote {len(histograms)} histograms of {args.observations} draws to {args.out}")
    return

  try:
    g = make_grid(a, b, args.n)
  except ValueError as e:
    raise UsageError(str(e)) from e
  densities, labels = paper_lognormal_sample(g)
  write_density_table(args.out, densities, labels, reference_spec=LEBESGUE)
  logger.info(f"Wrote {len(densities)} densities on {g.n} nodes to {args.out}")
