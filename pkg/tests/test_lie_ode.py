import unittest

from liesym.builder.lie_ode import admits, lie_ode_from_projective
from liesym.errors import PreconditionError
from liesym.prolongation import ForceTensor, GeneratorODE
from liesym.solver import euclidean_catalog
from liesym.symexpr.registry import REGISTRY


class TestFreeParticle(unittest.TestCase):
    def setUp(self) -> None:
        self.t, self.x = REGISTRY.symbols(('t', 'x'))
        self.algebra = euclidean_catalog(1)

    def test_projective_algebra(self):
        result = lie_ode_from_projective(self.algebra, degree=2)
        self.assertEqual(result.dimension, 8)
        self.assertEqual(result.potentials, ['S_1'])
        self.assertEqual(result.elements, ['S_1', 'H', 'P_1'])

    def test_lower_degree_span(self):
        result = lie_ode_from_projective(self.algebra, degree=1)
        self.assertEqual(result.dimension, 7)

    def test_admits(self):
        t, x = self.t, self.x
        good = GeneratorODE.create(t, (x,), t * x, [x**2])
        self.assertEqual(admits(good, self.algebra), [])
        bad = GeneratorODE.create(t, (x,), x**2, [0])
        self.assertNotEqual(admits(bad, self.algebra), [])

    def test_views(self):
        result = lie_ode_from_projective(self.algebra, degree=1)
        info = result.to_json()
        self.assertEqual(info['dimension'], 7)
        self.assertEqual(info['degree_in_t'], 1)
        self.assertEqual(len(result.to_frame()), 7)


class TestForces(unittest.TestCase):
    def setUp(self) -> None:
        self.x = REGISTRY.symbol('x')
        self.algebra = euclidean_catalog(1)

    def test_oscillator(self):
        forces = [ForceTensor.from_vector([self.x])]
        result = lie_ode_from_projective(self.algebra, forces, degree=2)
        self.assertEqual(result.dimension, 2)

    def test_rejects_velocity_forces(self):
        with self.assertRaises(PreconditionError):
            lie_ode_from_projective(
                self.algebra, [ForceTensor.isotropic(1, 1)]
            )
        with self.assertRaises(PreconditionError):
            lie_ode_from_projective(self.algebra, degree=-1)
