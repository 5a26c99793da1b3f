import math
import re

PROJECT_NAME = "bayes-fpca"


class DataError(ValueError):
  """Invalid numerical data (bad values, inconsistent files, broken invariants)."""


class GridMismatchError(DataError):
  pass


class ReferenceMismatchError(DataError):
  pass


class ConstraintViolationError(DataError):
  pass


class NumericalError(DataError):
  pass


class UsageError(Exception):
  """Bad command-line flags."""


_domain_regex = re.compile(r"^\s*(?P<a>[^:]+):(?P<b>[^:]+)\s*$")


def parse_domain(value):
  """
  Parse a domain flag of the form ``a:b``.

  Returns:
    tuple[float, float]: (a, b) with finite bounds and b > a
  """
  if value is None:
    raise UsageError("Domain is required (expected a:b)")

  m = _domain_regex.match(value)
  if m is None:
    raise UsageError(f"Invalid domain: {value!r} (expected a:b)")

  try:
    a = float(m.group("a"))
    b = float(m.group("b"))
  except ValueError:
    raise UsageError(f"Invalid domain bounds: {value!r}")

  if not (math.isfinite(a) and math.isfinite(b)):
    raise UsageError(f"Domain bounds must be finite: {value!r}")
  if b <= a:
    raise UsageError(f"Domain upper bound must exceed lower bound: {value!r}")

  return a, b


def parse_float_list(value):
  """Parse a comma separated list of floats (``0,30,70,117.22``)."""
  if value is None or not value.strip():
    raise UsageError("Empty list")

  numbers = []
  for item in value.split(","):
    item = item.strip()
    try:
      number = float(item)
    except ValueError:
      raise UsageError(f"Invalid number {item!r} in list {value!r}")
    if not math.isfinite(number):
      raise UsageError(f"Non-finite number {item!r} in list {value!r}")
    numbers.append(number)

  return numbers


def parse_name_list(value):
  """Split a comma separated list of names, dropping blanks."""
  if value is None:
    return []
  return [item.strip() for item in value.split(",") if item.strip()]


def format_number(value):
  """17 significant digits, enough for an exact float round trip."""
  return "%.17g" % value
