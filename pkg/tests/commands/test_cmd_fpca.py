import os
import unittest

import numpy as np
import numpy.testing as npt
import pandas as pd

from src.__main__ import EXIT_DATA, EXIT_OK, EXIT_USAGE
from src.table_io import read_curve_table, read_result_document
from tests.helpers import CommandTestCase


class TestFpcaCommand(CommandTestCase):
  def setUp(self):
    super().setUp()
    self.densities = self.path("densities.csv")
    self.assertEqual(self.run_main("simulate", "--n", 128, "--out", self.densities), EXIT_OK)

  def _fpca(self, reference, *extra):
    out_dir = self.path(f"fpca-{reference.replace(':', '_')}")
    code = self.run_main("fpca", "--input", self.densities, "--reference", reference, "--out-dir", out_dir, *extra)
    return code, out_dir

  # 正常系: 対数正規族は 2 次元なので 3 成分の要求は 2 成分に切り詰められる
  def test_writes_every_output(self):
    code, out_dir = self._fpca("uniform", "--components", 3)
    self.assertEqual(code, EXIT_OK)
    document = read_result_document(os.path.join(out_dir, "result.json"))
    for name in document["files"].values():
      self.assertTrue(os.path.exists(os.path.join(out_dir, name)), name)

    self.assertEqual(document["reference"], "uniform")
    self.assertEqual(document["domain"], "1:10")
    self.assertEqual(document["nodes"], 128)
    self.assertEqual(document["densities"], 81)
    self.assertEqual(document["components"], 2)
    self.assertEqual(len(document["eigenvalues"]), 80)
    self.assertLess(document["eigenvalues"][2], 1e-6 * document["total_variance"])
    self.assertEqual(document["scores"]["columns"], ["PC1", "PC2"])
    self.assertEqual(len(document["scores"]["data"]), 81)

    ratios = np.array(document["explained_ratio"])
    self.assertTrue(np.all(np.diff(ratios) <= 0))
    self.assertLessEqual(ratios.sum(), 1.0 + 1e-9)
    npt.assert_allclose(document["cumulative_ratio"], np.cumsum(ratios))
    self.assertAlmostEqual(document["total_variance"], sum(document["eigenvalues"]))

    harmonics = read_curve_table(os.path.join(out_dir, "harmonics_unweighted.csv"))
    self.assertEqual(harmonics.labels, ["PC1+", "PC1-", "PC2+", "PC2-"])
    self.assertEqual(harmonics.metadata["reference"], "lebesgue")
    self.assertEqual(harmonics.metadata["unweighted-from"], "uniform")
    npt.assert_allclose(harmonics.values @ harmonics.grid.weights, 9.0, rtol=1e-9)

    directions = read_curve_table(os.path.join(out_dir, "directions_clr.csv"))
    self.assertEqual(directions.metadata["space"], "clr_u")
    gram = (directions.values * directions.grid.weights) @ directions.values.T
    npt.assert_allclose(gram, np.eye(2), atol=1e-8)

    mean = read_curve_table(os.path.join(out_dir, "mean.csv"))
    self.assertEqual(mean.labels, ["mean", "mean_unweighted"])

    scores = pd.read_csv(os.path.join(out_dir, "scores.csv"), index_col="id")
    self.assertEqual(list(scores.columns), ["PC1", "PC2"])
    npt.assert_allclose(scores.to_numpy(), document["scores"]["data"])

  def test_covariance_surface(self):
    code, out_dir = self._fpca("exp:0.25", "--covariance-nodes", 17)
    self.assertEqual(code, EXIT_OK)
    document = read_result_document(os.path.join(out_dir, "result.json"))
    self.assertEqual(document["files"]["covariance"], "covariance_clr_u.csv")
    surface = read_curve_table(os.path.join(out_dir, "covariance_clr_u.csv"))
    self.assertEqual(surface.grid.n, 17)
    self.assertEqual(surface.labels[0], "1")
    self.assertEqual(surface.labels[-1], "10")
    self.assertEqual(surface.metadata["space"], "clr_u")
    npt.assert_allclose(surface.values, surface.values.T, atol=1e-12 * np.max(np.abs(surface.values)))
    self.assertTrue(np.all(np.diag(surface.values) >= 0))

    code, out_dir = self._fpca("uniform", "--covariance-nodes", 0)
    self.assertEqual(code, EXIT_OK)
    self.assertFalse(os.path.exists(os.path.join(out_dir, "covariance_clr_u.csv")))
    self.assertNotIn("covariance", read_result_document(os.path.join(out_dir, "result.json"))["files"])

  def test_lebesgue_and_uniform_scores_differ_by_three(self):
    _, lebesgue_dir = self._fpca("lebesgue")
    _, uniform_dir = self._fpca("uniform")
    lebesgue = read_result_document(os.path.join(lebesgue_dir, "result.json"))
    uniform = read_result_document(os.path.join(uniform_dir, "result.json"))
    npt.assert_allclose(lebesgue["explained_ratio"], uniform["explained_ratio"], rtol=1e-9)
    npt.assert_allclose(
      np.array(lebesgue["scores"]["data"]), 3.0 * np.array(uniform["scores"]["data"]), atol=1e-9,
    )

  def test_exponential_and_mean_references(self):
    for reference in ["exp:0.75", "mean"]:
      with self.subTest(reference=reference):
        code, out_dir = self._fpca(reference)
        self.assertEqual(code, EXIT_OK)
        document = read_result_document(os.path.join(out_dir, "result.json"))
        self.assertEqual(document["reference"], reference)

  # 異常系
  def test_invalid_arguments(self):
    self.assertEqual(self._fpca("gamma:1")[0], EXIT_USAGE)
    self.assertEqual(self._fpca("uniform", "--components", 0)[0], EXIT_USAGE)
    self.assertEqual(self._fpca("uniform", "--components", 81)[0], EXIT_DATA)

  def test_rejects_weighted_input(self):
    weighted = self.path("weighted.csv")
    with open(self.densities, encoding="utf-8") as f:
      text = f.read()
    with open(weighted, "w", encoding="utf-8", newline="") as f:
      f.write(text.replace("# reference=lebesgue", "# reference=uniform"))
    code = self.run_main("fpca", "--input", weighted, "--out-dir", self.path("out"))
    self.assertEqual(code, EXIT_DATA)


if __name__ == "__main__":
  unittest.main()
