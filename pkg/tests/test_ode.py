import unittest

import sympy as sp

from liesym.errors import PreconditionError
from liesym.geometry.tensors import MetricField, christoffel
from liesym.prolongation import ForceTensor, GeneratorODE, determining_ode
from liesym.prolongation.ode import (
    closed_form_conditions,
    force_term_condition,
    homogeneous_part,
    symmetry_condition,
)
from liesym.symexpr import declare_function, is_zero
from liesym.symexpr.registry import REGISTRY
from .validation_utils import metric_corpus, random_polynomial, seeded_rng


class TestForceTensor(unittest.TestCase):
    def setUp(self) -> None:
        self.v = REGISTRY.symbols(('x_dot', 'y_dot'))

    def test_isotropic_drag(self):
        k = REGISTRY.symbol('k')
        force = ForceTensor.isotropic(2, k)
        self.assertEqual(force.contract(self.v), (k * self.v[0], k * self.v[1]))
        with self.assertRaises(PreconditionError):
            ForceTensor.isotropic(2, k, order=2)

    def test_symmetric_lower_indices(self):
        force = ForceTensor.from_components(2, {(0, 1, 0): 3})
        self.assertIn((0, 0, 1), force.components)
        contracted = force.contract(self.v)
        self.assertEqual(contracted[0], 6 * self.v[0] * self.v[1])
        self.assertEqual(contracted[1], 0)
        with self.assertRaises(PreconditionError):
            ForceTensor.from_components(2, {(0, 1): 1})

    def test_from_vector(self):
        x = REGISTRY.symbol('x')
        force = ForceTensor.from_vector([x, 1])
        self.assertEqual(force.order, 0)
        self.assertEqual(force.contract(self.v), (x, 1))


class TestDeterminingODE(unittest.TestCase):
    def setUp(self) -> None:
        self.t, self.x = REGISTRY.symbols(('t', 'x'))
        self.flat = christoffel(MetricField.euclidean((self.x,)))

    def generator(self, xi, eta):
        return GeneratorODE.create(self.t, (self.x,), xi, [eta])

    def test_free_particle_generators(self):
        t, x = self.t, self.x
        generators = [
            (1, 0), (0, 1), (t, 0), (0, x), (0, t), (x, 0),
            (t**2, t * x), (t * x, x**2),
        ]
        for xi, eta in generators:
            system = determining_ode(self.flat, [], self.generator(xi, eta))
            self.assertTrue(system.is_satisfied(), msg=f'{xi}, {eta}')

    def test_cubic_velocity_condition(self):
        x = self.x
        system = determining_ode(self.flat, [], self.generator(x**2, 0))
        tags = {eq.tag for eq in system.nonzero()}
        self.assertEqual(tags, {'velocity3'})

    def test_oscillator(self):
        t, x = self.t, self.x
        forces = [ForceTensor.from_vector([x])]
        for xi, eta in ((1, 0), (0, sp.cos(t)), (0, sp.sin(t)), (0, x)):
            system = determining_ode(self.flat, forces,
                                     self.generator(xi, eta))
            self.assertTrue(system.is_satisfied(), msg=f'{xi}, {eta}')
        system = determining_ode(self.flat, forces, self.generator(0, t))
        self.assertFalse(system.is_satisfied())

    def residuals_by_degree(self, forces):
        t, x = self.t, self.x
        X = GeneratorODE.create(
            t, (x,), declare_function('xi', (t, x)),
            [declare_function('eta', (t, x))],
        )
        v = REGISTRY.symbol('x_dot')
        system = determining_ode(self.flat, forces, X)
        residuals = {sp.degree(eq.source, v): eq.residual for eq in system}
        return X.xi, X.eta[0], residuals

    def assert_residuals(self, residuals, expected):
        self.assertEqual(set(residuals), set(expected))
        for degree, value in expected.items():
            self.assertTrue(is_zero(residuals[degree] - value),
                            msg=f'degree {degree}: {residuals[degree]}')

    def test_linear_drag(self):
        # ẍ + kẋ = 0
        t, x = self.t, self.x
        k = REGISTRY.symbol('k')
        xi, eta, residuals = self.residuals_by_degree(
            [ForceTensor.isotropic(1, k)]
        )
        self.assert_residuals(residuals, {
            0: sp.diff(eta, t, 2) + k * sp.diff(eta, t),
            1: 2 * sp.diff(eta, t, x) - sp.diff(xi, t, 2)
            + k * sp.diff(xi, t),
            2: sp.diff(eta, x, 2) - 2 * sp.diff(xi, t, x)
            + 2 * k * sp.diff(xi, x),
            3: -sp.diff(xi, x, 2),
        })

    def test_quadratic_drag(self):
        # ẍ + kẋ² = 0
        t, x = self.t, self.x
        k = REGISTRY.symbol('k')
        xi, eta, residuals = self.residuals_by_degree(
            [ForceTensor.from_components(2, {(0, 0, 0): k})]
        )
        self.assert_residuals(residuals, {
            0: sp.diff(eta, t, 2),
            1: 2 * sp.diff(eta, t, x) - sp.diff(xi, t, 2)
            + 2 * k * sp.diff(eta, t),
            2: sp.diff(eta, x, 2) - 2 * sp.diff(xi, t, x)
            + k * sp.diff(eta, x),
            3: -sp.diff(xi, x, 2) + k * sp.diff(xi, x),
        })

    def test_drag_symmetries(self):
        t, x = self.t, self.x
        k = REGISTRY.symbol('k')
        forces = [ForceTensor.isotropic(1, k)]
        for xi, eta in ((1, 0), (0, 1), (0, x), (0, sp.exp(-k * t))):
            system = determining_ode(self.flat, forces,
                                     self.generator(xi, eta))
            self.assertTrue(system.is_satisfied(), msg=f'{xi}, {eta}')
        system = determining_ode(self.flat, forces, self.generator(t, 0))
        self.assertFalse(system.is_satisfied())

    def test_coordinate_mismatch(self):
        y = REGISTRY.symbol('y')
        X = GeneratorODE.create(self.t, (y,), 1, [0])
        with self.assertRaises(PreconditionError):
            determining_ode(self.flat, [], X)
        with self.assertRaises(PreconditionError):
            GeneratorODE.create(self.t, (self.x,), 1, [0, 0])


class TestClosedFormConditions(unittest.TestCase):
    def setUp(self) -> None:
        self.t, self.x, self.y = REGISTRY.symbols(('t', 'x', 'y'))
        self.connection = christoffel(metric_corpus()['polar'])
        self.rng = seeded_rng(3)

    def random_generator(self):
        variables = (self.t, self.x, self.y)
        return GeneratorODE.create(
            self.t, (self.x, self.y),
            random_polynomial(self.rng, variables),
            [random_polynomial(self.rng, variables) for _ in range(2)],
        )

    def assert_agree(self, X, F):
        forces = [ForceTensor.from_vector(F)]
        space, conditions = symmetry_condition(self.connection, forces, X)
        parts = closed_form_conditions(X, self.connection, F)
        for i, condition in enumerate(conditions):
            for degree in range(4):
                expected = homogeneous_part(
                    condition, space.velocities, degree
                )
                self.assertTrue(
                    is_zero(parts[i][degree] - expected),
                    msg=f'{X}: component {i}, degree {degree}',
                )

    def test_without_forces(self):
        for _ in range(3):
            self.assert_agree(self.random_generator(), [0, 0])

    def test_with_forces(self):
        x, y = self.x, self.y
        for _ in range(3):
            self.assert_agree(self.random_generator(), [x * y, y**2 - x])

    def random_force(self, order):
        components = {}
        for _ in range(2):
            key = tuple(self.rng.randint(0, 1) for _ in range(order + 1))
            components[key] = random_polynomial(
                self.rng, (self.t, self.x, self.y), degree=1, terms=2
            )
        return ForceTensor.from_components(order, components)

    def test_force_terms_of_any_order(self):
        for order in range(1, 5):
            X = self.random_generator()
            forces = [self.random_force(order)]
            space, conditions = symmetry_condition(self.connection, forces, X)
            parts = closed_form_conditions(X, self.connection, forces=forces)
            for i, condition in enumerate(conditions):
                self.assertEqual(len(parts[i]), max(4, order + 2))
                for degree, part in enumerate(parts[i]):
                    expected = homogeneous_part(
                        condition, space.velocities, degree
                    )
                    self.assertTrue(
                        is_zero(part - expected),
                        msg=f'order {order}: component {i}, degree {degree}',
                    )

    def test_mixed_orders(self):
        x, y = self.x, self.y
        X = self.random_generator()
        F = [x - y, x * y]
        forces = [ForceTensor.from_vector(F), self.random_force(1),
                  self.random_force(3)]
        space, conditions = symmetry_condition(self.connection, forces, X)
        parts = closed_form_conditions(X, self.connection, forces=forces)
        for i, condition in enumerate(conditions):
            for degree, part in enumerate(parts[i]):
                expected = homogeneous_part(
                    condition, space.velocities, degree
                )
                self.assertTrue(is_zero(part - expected),
                                msg=f'component {i}, degree {degree}')

    def test_vector_force_through_force_terms(self):
        x, y = self.x, self.y
        X = self.random_generator()
        F = [x * y, y**2 - x]
        direct = closed_form_conditions(X, self.connection, F)
        general = closed_form_conditions(
            X, self.connection, forces=[ForceTensor.from_vector(F)]
        )
        for a, b in zip(direct, general):
            for left, right in zip(a, b):
                self.assertTrue(is_zero(left - right))

    def test_force_term_degrees(self):
        X = self.random_generator()
        self.assertEqual(
            sorted(force_term_condition(X, self.random_force(0))), [0, 1]
        )
        self.assertEqual(
            sorted(force_term_condition(X, self.random_force(3))), [2, 3, 4]
        )
