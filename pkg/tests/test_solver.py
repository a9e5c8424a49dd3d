import unittest
from collections import Counter

import sympy as sp

from liesym.errors import PreconditionError, SpecError
from liesym.geometry.collineations import CollineationTag
from liesym.geometry.tensors import lie_derivative_metric
from liesym.solver import (
    Ansatz,
    desitter_catalog,
    euclidean_catalog,
    solve_homothetic,
)
from liesym.solver.linalg import in_span, nullspace, rank, solve_equations, solve_linear
from liesym.symexpr.registry import REGISTRY
from liesym.utils.config import DEFAULT_DEGREE, load_settings
from .validation_utils import assert_all_zero, metric_corpus


class TestLinearAlgebra(unittest.TestCase):
    def setUp(self) -> None:
        self.x, self.y = REGISTRY.symbols(('x', 'y'))

    def test_nullspace(self):
        basis = nullspace(sp.Matrix([[1, 2], [2, 4]]))
        self.assertEqual(len(basis), 1)
        self.assertEqual(list(basis[0]), [-2, 1])
        self.assertEqual(nullspace(sp.eye(3)), [])
        self.assertEqual(rank(sp.Matrix([[1, 2], [2, 4]])), 1)

    def test_symbolic_entries(self):
        x = self.x
        basis = nullspace(sp.Matrix([[x, 1]]))
        self.assertEqual(len(basis), 1)
        self.assertEqual(sp.simplify(basis[0][0] + 1 / x), 0)

    def test_solve_linear(self):
        matrix = sp.Matrix([[1, 1], [1, 1]])
        self.assertIsNone(solve_linear(matrix, sp.Matrix([1, 2])))
        solution = solve_linear(matrix, sp.Matrix([1, 1]))
        self.assertEqual(list(matrix * solution), [1, 1])

    def test_solve_equations(self):
        a, b = REGISTRY.symbols(('a', 'b'))
        solution = solve_equations([a + b - 3, a - b - 1], [a, b])
        self.assertEqual(solution, {a: 2, b: 1})
        self.assertIsNone(solve_equations([a - 1, a - 2], [a]))
        self.assertEqual(solve_equations([], []), {})

    def test_in_span(self):
        x, y = self.x, self.y
        basis = [(1, 0), (0, 1), (-y, x)]
        self.assertEqual(in_span((2 + y, -x), basis, (x, y)), (2, 0, -1))
        self.assertIsNone(in_span((x, 0), basis, (x, y)))
        self.assertEqual(in_span((0, 0), [], (x, y)), ())


class TestAnsatz(unittest.TestCase):
    def test_monomial_order(self):
        x, y = REGISTRY.symbols(('x', 'y'))
        ansatz = Ansatz.polynomial((x, y), 2)
        self.assertEqual(ansatz.monomials[0], 1)
        self.assertEqual(len(ansatz.monomials), 6)
        self.assertEqual(len(ansatz), 12)
        self.assertEqual(len(list(ansatz.basis_fields())), 12)
        with self.assertRaises(PreconditionError):
            Ansatz.polynomial((x, y), -1)


class TestHomothetic(unittest.TestCase):
    def setUp(self) -> None:
        self.x, self.y = REGISTRY.symbols(('x', 'y'))
        self.corpus = metric_corpus()

    def test_euclidean_plane(self):
        algebra = solve_homothetic(self.corpus['euclidean'], 2)
        self.assertEqual(len(algebra.killing_vectors()), 3)
        self.assertEqual(len(algebra.homothetic_vectors()), 1)
        self.assertTrue(algebra.complete)
        self.assertEqual(
            [e.name for e in algebra], ['K1', 'K2', 'K3', 'H']
        )
        self.assertEqual(len(algebra.gradient_elements()), 3)
        self.assertEqual(len(algebra.nongradient_elements()), 1)

    def test_every_vector_is_homothetic(self):
        for name in ('euclidean', 'polar', 'halfplane', 'minkowski'):
            g = self.corpus[name]
            for element in solve_homothetic(g, 2):
                lx = lie_derivative_metric(element.vector, g)
                psi = element.classification.psi
                assert_all_zero(
                    self, list(lx - 2 * psi * g.lower), msg=name
                )

    def test_hyperbolic_plane(self):
        algebra = solve_homothetic(self.corpus['halfplane'], 2)
        self.assertEqual(len(algebra.killing_vectors()), 3)
        self.assertEqual(algebra.homothetic_vectors(), [])
        self.assertIsNone(algebra.complete)
        self.assertEqual(algebra.gradient_elements(), [])

    def test_polynomial_ansatz_misses_logarithmic_homothety(self):
        algebra = solve_homothetic(self.corpus['wave'], 2)
        self.assertEqual(len(algebra.killing_vectors()), 2)
        self.assertEqual(algebra.homothetic_vectors(), [])

    def test_kind_filter(self):
        g = self.corpus['euclidean']
        self.assertEqual(len(solve_homothetic(g, 2, kind='kv')), 3)
        self.assertEqual(
            [e.name for e in solve_homothetic(g, 2, kind='hv')], ['H']
        )
        with self.assertRaises(PreconditionError):
            solve_homothetic(g, 2, kind='ckv')
        with self.assertRaises(PreconditionError):
            solve_homothetic(g, 0)

    def test_higher_degree_adds_nothing(self):
        algebra = solve_homothetic(self.corpus['euclidean'], 3)
        self.assertEqual(len(algebra), 4)
        self.assertEqual(algebra.degree, 3)

    def test_structure_constants(self):
        algebra = solve_homothetic(self.corpus['euclidean'], 2)
        constants = algebra.structure_constants()
        self.assertEqual(len(constants), 6)
        for first, second, coefficients in constants:
            self.assertEqual(len(coefficients), 4)

    def test_report_views(self):
        algebra = solve_homothetic(self.corpus['euclidean'], 2)
        frame = algebra.to_frame()
        self.assertEqual(list(frame['name']), ['K1', 'K2', 'K3', 'H'])
        self.assertEqual(frame.loc[3, 'class'], 'gradient-HV')
        info = algebra.to_json()
        self.assertEqual(info['complete'], True)
        self.assertEqual(info['coordinates'], ['x', 'y'])
        self.assertEqual(len(info['vectors']), 4)
        with self.assertRaises(KeyError):
            algebra['K9']


class TestCatalogs(unittest.TestCase):
    def test_euclidean_line(self):
        algebra = euclidean_catalog(1)
        self.assertEqual([e.name for e in algebra], ['S_1', 'H', 'P_1'])

    def test_euclidean_plane(self):
        algebra = euclidean_catalog(2)
        self.assertEqual(len(algebra), 10)
        tags = Counter(e.classification.tag for e in algebra)
        self.assertEqual(tags[CollineationTag.KV], 3)
        self.assertEqual(tags[CollineationTag.HV], 1)
        self.assertEqual(tags[CollineationTag.AC], 4)
        self.assertEqual(tags[CollineationTag.SPC], 2)
        self.assertEqual(len(algebra.structure_constants()), 45)

    def test_euclidean_space(self):
        self.assertEqual(len(euclidean_catalog(3)), 19)
        with self.assertRaises(PreconditionError):
            euclidean_catalog(0)

    def test_desitter(self):
        algebra = desitter_catalog(1)
        self.assertEqual(len(algebra), 10)
        self.assertEqual(len(algebra.killing_vectors()), 10)
        self.assertEqual(algebra.gradient_elements(), [])
        with self.assertRaises(PreconditionError):
            desitter_catalog(0)


class TestSettings(unittest.TestCase):
    def test_defaults(self):
        settings = load_settings({})
        self.assertEqual(settings.degree, DEFAULT_DEGREE)
        self.assertEqual(settings.log_level, 'INFO')

    def test_overrides(self):
        settings = load_settings({
            'LIESYM_DEGREE_DEFAULT': '3',
            'LIESYM_LOG_LEVEL': 'debug',
        })
        self.assertEqual(settings.degree, 3)
        self.assertEqual(settings.log_level, 'DEBUG')

    def test_invalid_degree(self):
        for raw in ('abc', '0'):
            with self.assertRaises(SpecError):
                load_settings({'LIESYM_DEGREE_DEFAULT': raw})
