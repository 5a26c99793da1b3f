import unittest

import numpy as np
import numpy.testing as npt

from src import DataError, GridMismatchError, ReferenceMismatchError
from src.grid import integrate, make_grid
from src.measure import (
  ReferenceSpecError, change_reference, check_same_reference, is_b_equivalent, make_density, make_reference,
  neutral, parse_reference_spec, ratio_spread, reference_exponential, reference_from_mean, reference_lebesgue,
  reference_uniform_unit,
)
from tests.helpers import random_lambda_density, random_reference


class TestReferenceMeasure(unittest.TestCase):
  def setUp(self):
    self.g = make_grid(1.0, 10.0, 512)

  def test_lebesgue_and_uniform_totals(self):
    lebesgue = reference_lebesgue(self.g)
    uniform = reference_uniform_unit(self.g)
    self.assertTrue(lebesgue.is_lebesgue)
    self.assertFalse(uniform.is_lebesgue)
    self.assertAlmostEqual(lebesgue.total, 9.0, places=12)
    self.assertAlmostEqual(uniform.total, 1.0, places=12)
    npt.assert_allclose(uniform.p, 1.0 / 9.0)

  # 正常系: 指数参照測度は総質量 1 に正規化される
  def test_exponential_normalized(self):
    for delta in [0.25, 0.75, 1.25, -0.5, 3e-5]:
      with self.subTest(delta=delta):
        ref = reference_exponential(self.g, delta)
        self.assertAlmostEqual(ref.total, 1.0, places=12)
        ratio = ref.p[1:] / ref.p[:-1]
        npt.assert_allclose(ratio, np.exp(-delta * self.g.step), rtol=1e-12)

  def test_exponential_zero_is_uniform(self):
    ref = reference_exponential(self.g, 0.0)
    self.assertEqual(ref.label, "uniform")
    npt.assert_allclose(ref.p, 1.0 / 9.0)

  # 異常系: アンダーフローする指数参照測度
  def test_exponential_underflow(self):
    with self.assertRaises(DataError):
      reference_exponential(self.g, 1e4)

  def test_make_reference_rejects_bad_density(self):
    with self.assertRaises(DataError):
      make_reference(self.g, np.zeros(self.g.n))
    with self.assertRaises(DataError):
      make_reference(self.g, np.full(self.g.n, np.nan))
    with self.assertRaises(GridMismatchError):
      make_reference(self.g, np.ones(self.g.n + 1))

  def test_mean_reference(self):
    rng = np.random.default_rng(3)
    sample = [random_lambda_density(rng, self.g) for _ in range(5)]
    ref = reference_from_mean(sample)
    self.assertEqual(ref.label, "mean")
    self.assertAlmostEqual(ref.total, 9.0, places=10)
    log_mean = np.mean([np.log(f.values) for f in sample], axis=0)
    spread = np.log(ref.p) - log_mean
    self.assertLess(np.ptp(spread), 1e-10)

  def test_mean_reference_needs_lambda_densities(self):
    rng = np.random.default_rng(4)
    uniform = reference_uniform_unit(self.g)
    sample = [change_reference(random_lambda_density(rng, self.g), uniform) for _ in range(3)]
    with self.assertRaises(ReferenceMismatchError):
      reference_from_mean(sample)
    with self.assertRaises(DataError):
      reference_from_mean([])


class TestDensity(unittest.TestCase):
  def setUp(self):
    self.g = make_grid(1.0, 10.0, 256)
    self.rng = np.random.default_rng(11)

  # 正常系: 代表元は P(Omega) に正規化される
  def test_normalized_representative(self):
    ref = random_reference(self.rng, self.g)
    f = make_density(ref, np.exp(self.g.nodes / 3.0))
    self.assertAlmostEqual(integrate(self.g, f.values * ref.p), ref.total, places=10)
    raw = make_density(ref, np.full(self.g.n, 2.0), normalize=False)
    npt.assert_array_equal(raw.values, 2.0)

  def test_make_density_rejects_bad_values(self):
    ref = reference_lebesgue(self.g)
    values = np.ones(self.g.n)
    values[3] = 0.0
    with self.assertRaises(DataError):
      make_density(ref, values)
    values[3] = np.inf
    with self.assertRaises(DataError):
      make_density(ref, values)
    with self.assertRaises(GridMismatchError):
      make_density(ref, np.ones(10))

  def test_neutral(self):
    ref = reference_exponential(self.g, 0.5)
    npt.assert_array_equal(neutral(ref).values, 1.0)

  def test_scaling_stays_in_class(self):
    f = random_lambda_density(self.rng, self.g)
    self.assertTrue(is_b_equivalent(3.0 * f, f))
    self.assertAlmostEqual(ratio_spread(f * 0.5, f), 0.0, places=14)
    with self.assertRaises(DataError):
      f * -1.0
    with self.assertRaises(DataError):
      f * 0.0

  def test_not_equivalent(self):
    f = random_lambda_density(self.rng, self.g)
    g = random_lambda_density(self.rng, self.g)
    self.assertFalse(is_b_equivalent(f, g))
    self.assertGreater(ratio_spread(f, g), 1e-3)

  # 正常系: 参照測度の変更は連鎖律に従い、往復で元に戻る
  def test_change_reference_round_trip(self):
    f = random_lambda_density(self.rng, self.g)
    for ref in [reference_uniform_unit(self.g), reference_exponential(self.g, 1.25), random_reference(self.rng, self.g)]:
      with self.subTest(reference=ref.label):
        f_p = change_reference(f, ref)
        self.assertIs(f_p.reference, ref)
        self.assertAlmostEqual(integrate(self.g, f_p.values * ref.p), ref.total, places=10)
        self.assertLess(ratio_spread(make_density(reference_lebesgue(self.g), f_p.values * ref.p), f), 1e-12)
        back = change_reference(f_p, f.reference)
        npt.assert_allclose(back.values, f.values, rtol=1e-12)

  def test_uniform_reference_density_is_scaled(self):
    f = random_lambda_density(self.rng, self.g)
    f_p = change_reference(f, reference_uniform_unit(self.g))
    # p = 1/9 and totals 9 vs 1 cancel, so the representative is unchanged
    npt.assert_allclose(f_p.values, f.values, rtol=1e-12)

  def test_check_same_reference(self):
    f = random_lambda_density(self.rng, self.g)
    g = random_lambda_density(self.rng, self.g)
    self.assertTrue(check_same_reference(f, g).is_lebesgue)
    h = change_reference(g, reference_uniform_unit(self.g))
    with self.assertRaises(ReferenceMismatchError):
      check_same_reference(f, h)
    other_grid = random_lambda_density(self.rng, make_grid(1.0, 10.0, 128))
    with self.assertRaises(GridMismatchError):
      check_same_reference(f, other_grid)


class TestReferenceSpec(unittest.TestCase):
  def setUp(self):
    self.g = make_grid(1.0, 10.0, 128)

  def test_specs(self):
    self.assertTrue(parse_reference_spec("lebesgue", self.g).is_lebesgue)
    self.assertAlmostEqual(parse_reference_spec(" uniform ", self.g).total, 1.0, places=12)
    ref = parse_reference_spec("exp:0.25", self.g)
    self.assertEqual(ref.label, "exp:0.25")
    npt.assert_allclose(ref.p, reference_exponential(self.g, 0.25).p)
    self.assertEqual(parse_reference_spec("exp:3e-5", self.g).label, "exp:3e-5")

  def test_mean_spec(self):
    rng = np.random.default_rng(5)
    sample = [random_lambda_density(rng, self.g) for _ in range(4)]
    self.assertEqual(parse_reference_spec("mean", self.g, sample=sample).label, "mean")
    with self.assertRaises(ReferenceSpecError):
      parse_reference_spec("mean", self.g)

  # 異常系: 不正な指定
  def test_invalid_specs(self):
    for spec in [None, "", "gauss", "exp:", "exp:abc", "exp:inf", "Uniform"]:
      with self.subTest(spec=spec):
        with self.assertRaises(ReferenceSpecError):
          parse_reference_spec(spec, self.g)


if __name__ == "__main__":
  unittest.main()
