import unittest

import numpy as np
import pandas as pd

from src.__main__ import EXIT_DATA, EXIT_OK, EXIT_USAGE
from src.table_io import read_density_table
from tests.helpers import CommandTestCase


class TestSmoothCommand(CommandTestCase):
  def _write_histograms(self, counts_by_id):
    rows = []
    for label, counts in counts_by_id.items():
      edges = np.linspace(1.0, 10.0, len(counts) + 1)
      for lower, upper, count in zip(edges[:-1], edges[1:], counts):
        rows.append({"id": label, "lower": lower, "upper": upper, "count": count})
    path = self.path("histograms.csv")
    pd.DataFrame(rows).to_csv(path, index=False, float_format="%.17g")
    return path

  # 正常系: シミュレーションしたヒストグラムを平滑化する
  def test_simulated_histograms(self):
    histograms = self.path("histograms.csv")
    argv = ["simulate", "--family", "lognormal-paper-histograms", "--observations", 2000, "--out", histograms]
    self.assertEqual(self.run_main(*argv), EXIT_OK)
    out = self.path("smoothed.csv")
    self.assertEqual(self.run_main("smooth", "--input", histograms, "--domain", "1:10", "--n", 64, "--impute", "--out", out), EXIT_OK)
    table = read_density_table(out)
    self.assertEqual(table.labels, [str(k) for k in range(1, 82)])
    self.assertEqual(table.reference_spec, "lebesgue")
    np.testing.assert_allclose(table.values @ table.grid.weights, 9.0, rtol=1e-9)

  def test_custom_knots(self):
    path = self._write_histograms({"a": [5, 9, 14, 11, 8, 6, 4, 3], "b": [2, 3, 5, 9, 12, 10, 6, 4]})
    out = self.path("smoothed.csv")
    argv = ["smooth", "--input", path, "--domain", "1:10", "--knots", "1,4,7,10", "--penalty", 0.01, "--n", 33, "--out", out]
    self.assertEqual(self.run_main(*argv), EXIT_OK)
    self.assertEqual(read_density_table(out).labels, ["a", "b"])

  # 異常系: 度数 0 の階級は補完しない限りエラー
  def test_zero_counts(self):
    path = self._write_histograms({"a": [5, 9, 0, 11, 8, 6, 4, 3]})
    out = self.path("smoothed.csv")
    self.assertEqual(self.run_main("smooth", "--input", path, "--domain", "1:10", "--n", 33, "--out", out), EXIT_DATA)
    argv = ["smooth", "--input", path, "--domain", "1:10", "--n", 33, "--impute", "--out", out]
    self.assertEqual(self.run_main(*argv), EXIT_OK)

  def test_invalid_arguments(self):
    path = self._write_histograms({"a": [5, 9, 14, 11, 8, 6, 4, 3]})
    out = self.path("smoothed.csv")
    self.assertEqual(self.run_main("smooth", "--input", path, "--domain", "1:10", "--knots", "1,x", "--out", out), EXIT_USAGE)
    self.assertEqual(self.run_main("smooth", "--input", path, "--domain", "10:1", "--out", out), EXIT_USAGE)
    self.assertEqual(self.run_main("smooth", "--input", path, "--domain", "1:10", "--penalty", -1, "--out", out), EXIT_USAGE)
    self.assertEqual(self.run_main("smooth", "--input", path, "--domain", "1:10", "--knots", "2,5,10", "--out", out), EXIT_DATA)
    self.assertEqual(self.run_main("smooth", "--input", self.path("absent.csv"), "--domain", "1:10", "--out", out), EXIT_DATA)


if __name__ == "__main__":
  unittest.main()
