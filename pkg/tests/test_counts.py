import unittest

from liesym.builder.counts import count_from_algebra, heat_symmetry_counts
from liesym.builder.heat import flat_heat_algebra
from liesym.errors import PreconditionError
from liesym.solver import euclidean_catalog

FLAT_COUNTS = {1: 7, 2: 10, 3: 14}


class TestCounts(unittest.TestCase):
    def test_flat(self):
        for n, expected in FLAT_COUNTS.items():
            result = heat_symmetry_counts(f'flat:{n}')
            self.assertEqual(result.count, expected)
            self.assertEqual(result.enumerated, expected)
            self.assertTrue(result.consistent)

    def test_flat_matches_constructed_algebra(self):
        for n in (1, 2):
            self.assertEqual(
                count_from_algebra(euclidean_catalog(n)),
                flat_heat_algebra(n).dimension,
            )

    def test_line(self):
        result = heat_symmetry_counts('1d')
        self.assertEqual(result.count, 7)
        self.assertEqual(result.formula, '7')

    def test_constant_curvature(self):
        for n, expected in ((2, 6), (3, 9)):
            result = heat_symmetry_counts(f'constcurv:{n}')
            self.assertEqual(result.count, expected)
            self.assertEqual(result.enumerated, expected)
            self.assertEqual(result.gradient, 0)
        result = heat_symmetry_counts('constcurv:4')
        self.assertEqual(result.count, 13)
        self.assertIsNone(result.enumerated)
        self.assertTrue(result.consistent)

    def test_enumeration_limit(self):
        result = heat_symmetry_counts('flat:3', enumerate_upto=2)
        self.assertIsNone(result.enumerated)
        self.assertEqual(result.to_json()['count'], 14)

    def test_bad_spaces(self):
        for space in ('sphere:2', 'flat:x', 'flat:0', 'constcurv:1', '1d:2'):
            with self.assertRaises(PreconditionError, msg=space):
                heat_symmetry_counts(space)
