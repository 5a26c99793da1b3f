import logging
import os
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

from src.measure import density_from_log, make_reference, reference_exponential, reference_from_mean, reference_lebesgue, reference_uniform_unit


def smooth_log_curve(rng, g, terms=4, scale=1.0):
  """Random smooth log-density: a short cosine series on the grid."""
  u = (g.nodes - g.a) / g.length
  coefficients = rng.normal(scale=scale, size=terms)
  return sum(c * np.cos((k + 1) * np.pi * u) / (k + 1) for k, c in enumerate(coefficients))


def random_density(rng, reference, terms=4, scale=1.0):
  return density_from_log(reference, smooth_log_curve(rng, reference.grid, terms, scale))


def random_lambda_density(rng, g, terms=4, scale=1.0):
  return random_density(rng, reference_lebesgue(g), terms, scale)


def random_reference(rng, g, label="random"):
  p = np.exp(smooth_log_curve(rng, g, terms=3, scale=0.5))
  return make_reference(g, p * rng.uniform(0.2, 5.0), label=label)


def study_references(g, sample):
  """Every reference the study compares, keyed by its spec."""
  return {
    "lebesgue": reference_lebesgue(g),
    "uniform": reference_uniform_unit(g),
    "exp:0.25": reference_exponential(g, 0.25),
    "exp:0.75": reference_exponential(g, 0.75),
    "exp:1.25": reference_exponential(g, 1.25),
    "mean": reference_from_mean(sample),
  }


class CommandTestCase(unittest.TestCase):
  """Runs commands with logs and outputs in a temporary directory."""

  def setUp(self):
    self.root_logger = logging.getLogger()
    self.initial_handlers = list(self.root_logger.handlers)
    self.initial_level = self.root_logger.level
    self.tempdir = tempfile.TemporaryDirectory()
    self.addCleanup(self._cleanup_tempdir)
    self.env = patch.dict(os.environ, {"BAYES_FPCA_LOG_DIR": os.path.join(self.tempdir.name, "logs")})
    self.env.start()
    self.addCleanup(self.env.stop)

  def _cleanup_tempdir(self):
    if self.tempdir is None:
      return
    try:
      self.tempdir.cleanup()
    except OSError:
      # On Windows, cleanup can fail if a handler still holds the file.
      pass
    self.tempdir = None

  def tearDown(self):
    for handler in list(self.root_logger.handlers):
      if handler not in self.initial_handlers:
        self.root_logger.removeHandler(handler)
        handler.close()
    self.root_logger.setLevel(self.initial_level)

  def path(self, *names):
    return os.path.join(self.tempdir.name, *names)

  def run_main(self, *argv):
    from src.__main__ import main
    return main([str(a) for a in argv])
