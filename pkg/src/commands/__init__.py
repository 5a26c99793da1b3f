"""One module per sub-command; each exposes ``add_arguments(parser)`` and ``run(args)``."""
from .. import UsageError
from ..grid import Grid
from ..measure import ReferenceMeasure, ReferenceSpecError, parse_reference_spec


def reference_from_flag(spec, g: Grid, sample=None) -> ReferenceMeasure:
  """``--reference`` / ``--candidates`` values are flags, so a bad spec is a usage error."""
  try:
    return parse_reference_spec(spec, g, sample=sample)
  except ReferenceSpecError as e:
    raise UsageError(str(e)) from e
