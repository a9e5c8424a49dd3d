import unittest

import sympy as sp

from liesym.errors import MetricNotInvertibleError, PreconditionError
from liesym.geometry.collineations import (
    CollineationTag,
    classify_collineation,
    contracted_identity_residuals,
    contracted_trace_check,
    potential_factor,
)
from liesym.geometry.tensors import (
    MetricField,
    VectorField,
    christoffel,
    covariant_hessian,
    lie_derivative_connection,
    lie_derivative_metric,
    metric_compatibility,
)
from liesym.symexpr import is_zero
from liesym.symexpr.registry import REGISTRY
from .validation_utils import assert_all_zero, metric_corpus


class TestMetric(unittest.TestCase):
    def setUp(self) -> None:
        self.x, self.y = REGISTRY.symbols(('x', 'y'))
        self.corpus = metric_corpus()

    def test_inverse(self):
        for name, g in self.corpus.items():
            self.assertTrue(g.check(), msg=name)

    def test_from_upper(self):
        x, y = self.x, self.y
        g = MetricField.from_upper((x, y), sp.diag(1, x**-2))
        self.assertEqual(g.lower, self.corpus['polar'].lower)

    def test_invalid_metrics(self):
        x, y = self.x, self.y
        with self.assertRaises(PreconditionError):
            MetricField.from_lower((x, y), [[1, x], [0, 1]])
        with self.assertRaises(PreconditionError):
            MetricField.from_lower((x, y), sp.eye(3))
        with self.assertRaises(MetricNotInvertibleError):
            MetricField.from_lower((x, y), [[1, 1], [1, 1]])

    def test_index_gymnastics(self):
        x, y = self.x, self.y
        g = self.corpus['polar']
        self.assertEqual(g.lower_index((1, 1)), (1, x**2))
        self.assertEqual(g.norm((1, 1)), x**2 + 1)
        self.assertTrue(is_zero(g.gradient(x * y)[1] - 1 / x))


class TestConnection(unittest.TestCase):
    def setUp(self) -> None:
        self.x, self.y = REGISTRY.symbols(('x', 'y'))
        self.corpus = metric_corpus()

    def test_flat(self):
        self.assertTrue(christoffel(self.corpus['euclidean']).is_flat())
        self.assertTrue(christoffel(self.corpus['minkowski']).is_flat())
        self.assertFalse(christoffel(self.corpus['polar']).is_flat())

    def test_polar_symbols(self):
        x = self.x
        c = christoffel(self.corpus['polar'])
        self.assertTrue(is_zero(c[0, 1, 1] + x))
        self.assertTrue(is_zero(c[1, 0, 1] - 1 / x))
        self.assertTrue(is_zero(c[1, 1, 0] - 1 / x))
        self.assertTrue(is_zero(c.contracted[0] + 1 / x))
        self.assertTrue(is_zero(c.contracted[1]))

    def test_metric_compatibility(self):
        for name, g in self.corpus.items():
            residuals = metric_compatibility(g, christoffel(g))
            assert_all_zero(self, residuals, msg=name)


class TestVectorField(unittest.TestCase):
    def setUp(self) -> None:
        self.x, self.y = REGISTRY.symbols(('x', 'y'))
        self.coords = (self.x, self.y)

    def test_bracket(self):
        x, y = self.x, self.y
        dx = VectorField.basis(self.coords, 0)
        H = VectorField.from_components(self.coords, (x, y))
        self.assertEqual(dx.bracket(H), dx)
        rotation = VectorField.from_components(self.coords, (-y, x))
        self.assertTrue(H.bracket(rotation).is_zero())

    def test_apply_and_scale(self):
        x, y = self.x, self.y
        H = VectorField.from_components(self.coords, (x, y))
        self.assertEqual(H.apply(x**2 * y), 3 * x**2 * y)
        self.assertEqual(H.scale(2).components, (2 * x, 2 * y))
        self.assertEqual((H - H.scale(2)).components, (-x, -y))

    def test_length_mismatch(self):
        with self.assertRaises(PreconditionError):
            VectorField.from_components(self.coords, (1,))


class TestClassification(unittest.TestCase):
    def setUp(self) -> None:
        self.x, self.y = REGISTRY.symbols(('x', 'y'))
        self.coords = (self.x, self.y)
        self.corpus = metric_corpus()
        self.euclidean = self.corpus['euclidean']

    def field(self, *components):
        return VectorField.from_components(self.coords, components)

    def test_lie_derivative_of_homothety(self):
        x, y = self.x, self.y
        lx = lie_derivative_metric(self.field(x, y), self.euclidean)
        self.assertEqual(sp.Matrix(lx), 2 * sp.eye(2))

    def test_euclidean_classes(self):
        x, y = self.x, self.y
        cases = [
            (self.field(1, 0), CollineationTag.KV, True),
            (self.field(-y, x), CollineationTag.KV, False),
            (self.field(x, y), CollineationTag.HV, True),
            (self.field(0, x), CollineationTag.AC, False),
            (self.field(x**2, x * y), CollineationTag.SPC, False),
            (self.field(x**2 - y**2, 2 * x * y), CollineationTag.SCKV, False),
        ]
        for X, tag, gradient in cases:
            c = classify_collineation(X, self.euclidean)
            self.assertEqual(c.tag, tag, msg=str(X))
            self.assertEqual(c.gradient, gradient, msg=str(X))

    def test_special_conformal_factor(self):
        x, y = self.x, self.y
        c = classify_collineation(
            self.field(x**2 - y**2, 2 * x * y), self.euclidean
        )
        self.assertTrue(is_zero(c.psi - 2 * x))
        self.assertFalse(c.is_homothetic())

    def test_not_a_collineation(self):
        x, y = self.x, self.y
        self.assertIsNone(
            classify_collineation(self.field(x**2, y**2), self.euclidean)
        )

    def test_gradient_potential(self):
        x, y = self.x, self.y
        c = classify_collineation(self.field(x, y), self.euclidean)
        self.assertTrue(c.potential_representable)
        gradient = self.euclidean.gradient(c.potential)
        assert_all_zero(self, [gradient[0] - x, gradient[1] - y])
        self.assertEqual(c.label, 'gradient-HV')

    def test_nonpolynomial_potential(self):
        x, y = self.x, self.y
        g = self.corpus['wave']
        c = classify_collineation(self.field(x * sp.log(x), y), g)
        self.assertEqual(c.tag, CollineationTag.HV)
        self.assertTrue(c.gradient)
        self.assertFalse(c.potential_representable)

    def test_hyperbolic_killing_vectors(self):
        x, y = self.x, self.y
        g = self.corpus['halfplane']
        for X in (self.field(1, 0), self.field(x, y),
                  self.field(x**2 - y**2, 2 * x * y)):
            c = classify_collineation(X, g)
            self.assertEqual(c.tag, CollineationTag.KV, msg=str(X))
            self.assertFalse(c.gradient)
            lx = lie_derivative_connection(X, christoffel(g))
            assert_all_zero(self, sp.flatten(lx.tolist()))


class TestContractedIdentities(unittest.TestCase):
    def setUp(self) -> None:
        self.x, self.y, self.z = REGISTRY.symbols(('x', 'y', 'z'))
        self.corpus = metric_corpus()

    def test_identity_for_conformal_fields(self):
        x, y = self.x, self.y
        coords = (x, y)
        cases = [
            ('polar', (0, 1), 0),
            ('halfplane', (x, y), 0),
            ('halfplane', (x**2 - y**2, 2 * x * y), 0),
            ('euclidean', (x, y), 2),
            ('euclidean', (x**2 - y**2, 2 * x * y), 4 * x),
            ('wave', (x * sp.log(x), y), 2),
        ]
        for name, components, factor in cases:
            X = VectorField.from_components(coords, components)
            residuals = contracted_identity_residuals(
                X, self.corpus[name], factor
            )
            assert_all_zero(self, residuals, msg=f'{name}: {X}')

    def test_trace_in_two_dimensions(self):
        x, y = self.x, self.y
        g = self.corpus['euclidean']
        X = VectorField.from_components((x, y), (x**2 - y**2, 2 * x * y))
        self.assertTrue(contracted_trace_check(X, g, 4 * x))

    def test_trace_in_three_dimensions(self):
        x, y, z = self.x, self.y, self.z
        coords = (x, y, z)
        g = MetricField.euclidean(coords)
        X = VectorField.from_components(
            coords, (x**2 - y**2 - z**2, 2 * x * y, 2 * x * z)
        )
        self.assertTrue(contracted_trace_check(X, g, 4 * x))
        H = VectorField.from_components(coords, coords)
        self.assertTrue(contracted_trace_check(H, g, 2))

    def test_wrong_factor(self):
        x, y = self.x, self.y
        X = VectorField.from_components((x, y), (x, y))
        with self.assertRaises(PreconditionError):
            contracted_identity_residuals(X, self.corpus['euclidean'], 0)
        with self.assertRaises(PreconditionError):
            contracted_trace_check(X, self.corpus['euclidean'], 1)


class TestPotentialFactor(unittest.TestCase):
    def test_euclidean_potentials(self):
        x, y = REGISTRY.symbols(('x', 'y'))
        g = MetricField.euclidean((x, y))
        self.assertEqual(potential_factor((x**2 + y**2) / 2, g), 1)
        self.assertEqual(potential_factor(3 * x - y, g), 0)
        self.assertIsNone(potential_factor(x * y, g))
        hessian = covariant_hessian(x, christoffel(g))
        assert_all_zero(self, list(hessian))
