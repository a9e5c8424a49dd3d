import unittest

import sympy as sp

from liesym.errors import (
    NotPolynomialError,
    ParseError,
    PreconditionError,
    UndeclaredSymbolError,
)
from liesym.symexpr import (
    Namespace,
    RationalFunction,
    as_expr,
    canonical,
    collect_monomials,
    independent_coefficients,
    is_zero,
    parse,
    to_text,
    var,
)
from liesym.symexpr.registry import REGISTRY

ROUND_TRIP_TEXTS = [
    'x^2*y - 3/4',
    '(x + 1)/(x - 1)',
    'exp(2*x) + log(y)',
    'x^(1/2)',
    'x + y^(-2)',
    'D[q(t, x, u), x, u]',
    '-(x - y)^3/7',
]


class TestParsing(unittest.TestCase):
    def setUp(self) -> None:
        self.x, self.y = REGISTRY.symbols(('x', 'y'))

    def test_parse_is_canonical(self):
        x, y = self.x, self.y
        self.assertEqual(parse('(x + 1)^2'), x**2 + 2 * x + 1)
        self.assertEqual(parse('x*(y - 1) + x'), x * y)

    def test_round_trip(self):
        for text in ROUND_TRIP_TEXTS:
            e = parse(text)
            self.assertEqual(parse(to_text(e)), e, msg=text)

    def test_formal_derivatives_commute(self):
        namespace = Namespace()
        first = parse('D[q(t, x, u), x, u]', namespace)
        second = parse('D[q, u, x]', namespace)
        self.assertEqual(first, second)

    def test_syntax_error_position(self):
        with self.assertRaises(ParseError) as ctx:
            parse('x $ y')
        self.assertEqual(ctx.exception.line, 1)
        self.assertEqual(ctx.exception.column, 3)
        with self.assertRaises(ParseError) as ctx:
            parse('x + * y')
        self.assertEqual(ctx.exception.line, 1)
        self.assertIsNotNone(ctx.exception.column)

    def test_division_by_zero(self):
        with self.assertRaises(ParseError):
            parse('x/0')

    def test_strict_namespace(self):
        namespace = Namespace(strict=True)
        namespace.declare_variable('x')
        with self.assertRaises(UndeclaredSymbolError):
            parse('x + w', namespace)
        with self.assertRaises(UndeclaredSymbolError):
            parse('f(x)', namespace)

    def test_constants_and_reserved_names(self):
        namespace = Namespace(strict=True)
        namespace.declare_variable('x')
        namespace.declare_constant('k', '1/2')
        self.assertEqual(parse('k*x', namespace), self.x / 2)
        with self.assertRaises(PreconditionError):
            namespace.declare_variable('exp')
        with self.assertRaises(PreconditionError):
            namespace.declare_constant('x')
        with self.assertRaises(PreconditionError):
            namespace.declare_constant('r', 'x')

    def test_opaque_function_arguments(self):
        with self.assertRaises(ParseError):
            parse('f(x^2)')


class TestKernel(unittest.TestCase):
    def setUp(self) -> None:
        self.x, self.y = REGISTRY.symbols(('x', 'y'))
        self.a, self.b, self.c = REGISTRY.symbols(('a', 'b', 'c'))

    def test_floats_are_rejected(self):
        with self.assertRaises(PreconditionError):
            as_expr(0.5)
        self.assertEqual(as_expr('3/4'), sp.Rational(3, 4))

    def test_is_zero(self):
        x, y = self.x, self.y
        self.assertTrue(is_zero(x / (x + 1) - 1 + 1 / (x + 1)))
        self.assertFalse(is_zero(sp.log(x * y) - sp.log(x) - sp.log(y)))
        self.assertFalse(is_zero(sp.log(x**2) - 2 * sp.log(x)))
        p, q = sp.symbols('p q', positive=True)
        self.assertTrue(is_zero(sp.log(p * q) - sp.log(p) - sp.log(q)))
        self.assertTrue(is_zero(sp.exp(x) * sp.exp(y) - sp.exp(x + y)))
        self.assertFalse(is_zero(x - y))

    def test_canonical(self):
        x = self.x
        self.assertEqual(canonical((x**2 - 1) / (x - 1)), x + 1)
        self.assertEqual(canonical((x + 1)**2), x**2 + 2 * x + 1)

    def test_collect_monomials(self):
        x, y, a = self.x, self.y, self.a
        collected = collect_monomials(a * x**2 + x * y + 3, [x, y])
        self.assertEqual(collected, {x**2: a, x * y: 1, sp.Integer(1): 3})
        self.assertEqual(next(iter(collected)), x**2)
        self.assertEqual(collect_monomials(0, [x]), {})
        with self.assertRaises(NotPolynomialError):
            collect_monomials(1 / x, [x])

    def test_independent_coefficients(self):
        x, a, b, c = self.x, self.a, self.b, self.c
        e = a * sp.exp(x) + b * x * sp.exp(x) + c
        self.assertEqual(set(independent_coefficients(e, [x])), {a, b, c})
        e = (a * x + b) / (x**2 + 1) + c * sp.log(x)
        self.assertEqual(set(independent_coefficients(e, [x])), {a, b, c})
        self.assertEqual(independent_coefficients(0, [x]), [])


class TestRationalFunction(unittest.TestCase):
    def test_normal_form(self):
        x, y = REGISTRY.symbols(('x', 'y'))
        r = RationalFunction.from_expr((x**2 - 1) / (1 - x), [x])
        self.assertEqual(r.numerator, -x - 1)
        self.assertEqual(r.denominator, 1)
        self.assertTrue(r.is_polynomial())
        r = RationalFunction.from_expr(x / (-y), [x, y])
        self.assertEqual(r.numerator, -x)
        self.assertEqual(r.denominator, y)
        self.assertFalse(r.is_polynomial())
        self.assertTrue(is_zero(r.diff(y).as_expr() - x / y**2))

    def test_rejects_transcendental(self):
        x = var('x')
        with self.assertRaises(NotPolynomialError):
            RationalFunction.from_expr(sp.exp(x), [x])


class TestRegistry(unittest.TestCase):
    def test_registration_order(self):
        first = REGISTRY.symbol('registry_first')
        second = REGISTRY.symbol('registry_second')
        self.assertIs(var('registry_first'), first)
        self.assertLess(REGISTRY.index(first), REGISTRY.index(second))
        self.assertEqual(REGISTRY.sort([second, first]), [first, second])

    def test_printing_ignores_registration_order(self):
        late = REGISTRY.symbol('printing_z')
        early = REGISTRY.symbol('printing_a')
        self.assertLess(REGISTRY.index(late), REGISTRY.index(early))
        self.assertEqual(to_text(late + early), 'printing_a + printing_z')
