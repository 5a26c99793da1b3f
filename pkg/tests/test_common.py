import unittest

from src import UsageError, format_number, parse_domain, parse_float_list, parse_name_list


class TestCommonFunctions(unittest.TestCase):
  """Flag parsers in src/__init__.py"""

  def test_parse_domain_valid(self):
    self.assertEqual(parse_domain("1:10"), (1.0, 10.0))
    self.assertEqual(parse_domain("0:117.22"), (0.0, 117.22))
    self.assertEqual(parse_domain(" -2.5:1e3 "), (-2.5, 1000.0))

  def test_parse_domain_invalid(self):
    for value in [None, "", "1", "1:", "a:b", "10:1", "1:1", "1:inf", "nan:2", "1:2:3"]:
      with self.subTest(value=value):
        with self.assertRaises(UsageError):
          parse_domain(value)

  def test_parse_float_list(self):
    self.assertEqual(parse_float_list("0,30,70,117.22"), [0.0, 30.0, 70.0, 117.22])
    self.assertEqual(parse_float_list(" 1 , 2.5e-1 "), [1.0, 0.25])

  def test_parse_float_list_invalid(self):
    for value in [None, "", " ", "1,,2", "1,x", "1,inf"]:
      with self.subTest(value=value):
        with self.assertRaises(UsageError):
          parse_float_list(value)

  def test_parse_name_list(self):
    self.assertEqual(parse_name_list("uniform, exp:3e-5,,mean"), ["uniform", "exp:3e-5", "mean"])
    self.assertEqual(parse_name_list(None), [])

  def test_format_number_round_trip(self):
    for value in [0.1, 1.0 / 3.0, 2.0 ** -40, 1e300, -7.25]:
      self.assertEqual(float(format_number(value)), value)
    self.assertEqual(format_number(10.0), "10")


if __name__ == "__main__":
  unittest.main()
