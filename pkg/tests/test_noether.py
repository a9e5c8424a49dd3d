import unittest

import sympy as sp

from liesym.builder.noether import (
    CASE_I,
    CASE_II,
    integral_derivative,
    noether_case1,
    noether_case2,
    noether_symmetries,
    time_factors,
)
from liesym.errors import PreconditionError
from liesym.geometry.tensors import MetricField, VectorField
from liesym.solver import solve_homothetic
from liesym.symexpr import is_zero
from liesym.symexpr.registry import REGISTRY


class TestFreeParticle(unittest.TestCase):
    def setUp(self) -> None:
        self.t, self.x, self.y = REGISTRY.symbols(('t', 'x', 'y'))

    def test_line(self):
        g = MetricField.euclidean((self.x,))
        result = noether_symmetries(g, solve_homothetic(g, 2), 0)
        self.assertEqual(result.dimension, 5)
        self.assertEqual(len(result.results), 5)
        cases = [r.case for r in result.admitted()]
        self.assertEqual(cases.count(CASE_I), 2)
        self.assertEqual(cases.count(CASE_II), 2)

    def test_plane(self):
        g = MetricField.euclidean((self.x, self.y))
        result = noether_symmetries(g, solve_homothetic(g, 2), 0)
        self.assertEqual(result.dimension, 8)

    def test_hamiltonian(self):
        x = self.x
        g = MetricField.euclidean((x,))
        result = noether_symmetries(g, solve_homothetic(g, 2), x**2 / 2)
        x_dot = REGISTRY.symbol('x_dot')
        self.assertTrue(is_zero(result.hamiltonian - (x_dot**2 + x**2) / 2))
        info = result.to_json()
        self.assertEqual(info['dimension'], 5)
        self.assertIn('time translation', info['counting'])


class TestOscillator(unittest.TestCase):
    def setUp(self) -> None:
        self.t, self.x = REGISTRY.symbols(('t', 'x'))
        self.g = MetricField.euclidean((self.x,))
        self.V = self.x**2 / 2
        self.result = noether_symmetries(
            self.g, solve_homothetic(self.g, 2), self.V
        )

    def test_dimension(self):
        self.assertEqual(self.result.dimension, 5)

    def test_case_one_is_not_admitted(self):
        for r in self.result.results:
            if r.case == CASE_I:
                self.assertFalse(r.admitted)

    def test_time_factors(self):
        t = self.t
        ms = {r.m for r in self.result.admitted() if r.case == CASE_II}
        self.assertEqual(ms, {-1, -4})
        factors = {r.T for r in self.result.admitted() if r.case == CASE_II}
        self.assertEqual(
            factors,
            {sp.cos(t), sp.sin(t), sp.cos(2 * t), sp.sin(2 * t)},
        )

    def test_integrals_are_conserved(self):
        for r in self.result.admitted():
            self.assertTrue(
                is_zero(integral_derivative(r, self.g, self.V)),
                msg=str(r.generator),
            )

    def test_frame(self):
        frame = self.result.to_frame()
        self.assertEqual(len(frame), len(self.result.results))
        self.assertEqual(int(frame['admitted'].sum()), 5)


class TestCases(unittest.TestCase):
    def setUp(self) -> None:
        self.t, self.x, self.y = REGISTRY.symbols(('t', 'x', 'y'))
        self.line = MetricField.euclidean((self.x,))

    def test_case_one_gauge_constant(self):
        x = self.x
        Y = VectorField.from_components((x,), (1,))
        result = noether_case1(self.line, Y, 3 * x)
        self.assertTrue(result.admitted)
        self.assertEqual(result.p, -3)

    def test_case_one_rejects_conformal_field(self):
        x = self.x
        Y = VectorField.from_components((x,), (x**2,))
        with self.assertRaises(PreconditionError):
            noether_case1(self.line, Y, 0)

    def test_case_two_without_constants(self):
        x = self.x
        results = noether_case2(self.line, x, x**3)
        self.assertEqual(len(results), 1)
        self.assertFalse(results[0].admitted)

    def test_case_two_rejects_non_potential(self):
        x, y = self.x, self.y
        g = MetricField.euclidean((x, y))
        with self.assertRaises(PreconditionError):
            noether_case2(g, x * y, 0)

    def test_time_factors(self):
        t = self.t
        self.assertEqual(time_factors(0, t), [1, t])
        self.assertEqual(time_factors(4, t), [sp.exp(2 * t), sp.exp(-2 * t)])
        with self.assertRaises(PreconditionError):
            time_factors(REGISTRY.symbol('m'), t)
