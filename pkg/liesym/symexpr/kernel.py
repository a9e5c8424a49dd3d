"""Exact operations on symbolic expressions.

Expressions are immutable sympy objects built from exact rationals, symbols,
integer powers and opaque functions applied to plain symbols. Formal partial
derivatives of opaque functions are sympy ``Derivative`` objects, which are
symmetric in their variables.
"""
from typing import Dict, Iterable, List, Sequence, Tuple

import sympy as sp

from liesym.errors import NotPolynomialError, PreconditionError
from liesym.utils.logging import get_logger

Expr = sp.Expr
LOG = get_logger(__name__)
TRANSCENDENTAL = (sp.exp, sp.log)


def as_expr(value) -> Expr:
    """Convert python numbers and strings of digits to exact sympy values."""
    if isinstance(value, float):
        raise PreconditionError(
            f'floating point value {value!r} is not allowed, use a rational'
        )
    return sp.sympify(value, rational=True)


def declare_function(name: str, args: Sequence[sp.Symbol]) -> Expr:
    """Opaque function symbol applied to plain variables.

    Args:
        name (str): function name
        args (Sequence[sp.Symbol]): argument variables

    Returns:
        Expr: the applied function f(v1, ..., vk)
    """
    for arg in args:
        if not isinstance(arg, sp.Symbol):
            raise PreconditionError(
                f'argument {arg} of opaque function {name} is not a plain '
                'variable'
            )
    if len(set(args)) != len(args):
        raise PreconditionError(f'repeated argument in {name}{tuple(args)}')
    return sp.Function(name)(*args)


def numerator(e) -> Expr:
    """Expanded numerator of e over a common denominator."""
    e = as_expr(e)
    return sp.expand(sp.numer(sp.together(e)))


def canonical(e) -> Expr:
    """Canonical form: expanded polynomial, or cancelled fraction."""
    e = as_expr(e)
    num, den = sp.fraction(sp.together(e))
    den = sp.expand(den)
    if den == 1:
        return sp.expand(num)
    return sp.cancel(sp.expand(num) / den)


def diff(e, v: sp.Symbol, order: int = 1) -> Expr:
    """Exact partial derivative of e with respect to the variable v."""
    if not isinstance(v, sp.Symbol):
        raise PreconditionError(f'{v} is not a variable')
    return sp.diff(as_expr(e), v, order)


def is_zero(e) -> bool:
    """Decide whether e vanishes identically.

    The expression is brought over a common denominator and the numerator
    is expanded; opaque functions and their formal derivatives behave as
    independent indeterminates. Logarithms of products and powers are only
    split when the factors are declared positive, so log(x*y) - log(x) -
    log(y) is not zero for plain symbols.
    """
    e = as_expr(e)
    if e == 0:
        return True
    num = numerator(e)
    if num == 0:
        return True
    if num.has(*TRANSCENDENTAL):
        return sp.expand(sp.powsimp(sp.expand_log(num))) == 0
    return False


def collect_monomials(
    e,
    gens: Sequence[sp.Symbol],
) -> Dict[Expr, Expr]:
    """Split e by monomials in gens.

    Args:
        e: polynomial in gens; coefficients may contain any other symbols
        gens (Sequence[sp.Symbol]): variables to split over

    Returns:
        Dict[Expr, Expr]: monomial to coefficient, graded lexicographic order
            with the highest monomial first; the zero polynomial maps to {}
    """
    expanded = sp.expand(as_expr(e))
    if not gens:
        return {} if expanded == 0 else {sp.Integer(1): expanded}
    try:
        poly = sp.Poly(expanded, *gens)
    except sp.PolynomialError as err:
        raise NotPolynomialError(
            f'expression is not polynomial in {tuple(gens)}: {err}'
        )
    result = {}
    for exponents, coeff in poly.terms(order='grlex'):
        if coeff == 0:
            continue
        monomial = sp.Mul(*[g**k for g, k in zip(gens, exponents)])
        result[monomial] = coeff
    return result


def independent_coefficients(
    e,
    gens: Sequence[sp.Symbol],
) -> List[Expr]:
    """Coefficients that must vanish separately for e to vanish.

    Denominators are cleared, and exponentials or logarithms depending on
    gens are treated as extra indeterminates, which is sound because distinct
    exponentials and powers of a logarithm are linearly independent over the
    polynomials. Powers with a symbolic exponent such as u**n are handled the
    same way.
    """
    num = numerator(e)
    if num == 0:
        return []
    gen_set = set(gens)
    atoms = [
        atom for atom in num.atoms(*TRANSCENDENTAL)
        if atom.free_symbols & gen_set
    ]
    atoms += [
        atom for atom in num.atoms(sp.Pow)
        if not atom.exp.is_Integer and atom.base.free_symbols & gen_set
    ]
    mapping = {
        atom: sp.Dummy(f'w{idx}')
        for idx, atom in enumerate(sorted(atoms, key=sp.default_sort_key))
    }
    if mapping:
        num = sp.expand(num.xreplace(mapping))
    collected = collect_monomials(num, list(gens) + list(mapping.values()))
    return list(collected.values())


def jacobian_rows(
    equations: Iterable[Expr],
    unknowns: Sequence[sp.Symbol],
) -> Tuple[sp.Matrix, sp.Matrix]:
    """Coefficient matrix and right hand side of a linear system."""
    equations = [sp.expand(eq) for eq in equations]
    equations = [eq for eq in equations if eq != 0]
    if not equations:
        return sp.zeros(0, len(unknowns)), sp.zeros(0, 1)
    return sp.linear_eq_to_matrix(equations, list(unknowns))
