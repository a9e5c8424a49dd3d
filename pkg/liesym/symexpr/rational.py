from dataclasses import dataclass
from typing import Sequence, Tuple

import sympy as sp

from liesym.errors import NotPolynomialError, PreconditionError
from liesym.symexpr.kernel import Expr, as_expr, is_zero


@dataclass(frozen=True)
class RationalFunction:
    """Reduced quotient of two polynomials over declared variables.

    The denominator is never identically zero, numerator and denominator are
    coprime, and the leading denominator coefficient (graded lexicographic
    order) carries a positive sign.
    """
    numerator: Expr
    denominator: Expr
    variables: Tuple[sp.Symbol, ...]

    @classmethod
    def from_expr(
        cls,
        e,
        variables: Sequence[sp.Symbol],
    ) -> 'RationalFunction':
        e = as_expr(e)
        num, den = sp.fraction(sp.cancel(sp.together(e)))
        num, den = sp.expand(num), sp.expand(den)
        if is_zero(den):
            raise PreconditionError('denominator vanishes identically')
        for part in (num, den):
            if variables:
                try:
                    sp.Poly(part, *variables)
                except sp.PolynomialError:
                    raise NotPolynomialError(
                        f'{part} is not polynomial in {tuple(variables)}'
                    )
        if variables:
            lead = sp.Poly(den, *variables).LC(order='grlex')
        else:
            lead = den
        if lead.could_extract_minus_sign():
            num, den = -num, -den
        return cls(num, den, tuple(variables))

    def as_expr(self) -> Expr:
        return self.numerator / self.denominator

    def is_polynomial(self) -> bool:
        return not (self.denominator.free_symbols & set(self.variables))

    def diff(self, v: sp.Symbol) -> 'RationalFunction':
        return RationalFunction.from_expr(
            sp.diff(self.as_expr(), v), self.variables
        )

    def __str__(self) -> str:
        from liesym.symexpr.printer import to_text
        if self.denominator == 1:
            return to_text(self.numerator)
        return f'({to_text(self.numerator)})/({to_text(self.denominator)})'
