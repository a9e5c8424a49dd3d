from sympy.printing.precedence import precedence
from sympy.printing.str import StrPrinter

from liesym.symexpr.kernel import Expr, as_expr


class ExprPrinter(StrPrinter):
    """Prints expressions in the kernel grammar (``^`` powers, ``D[...]``)"""
    def _print_Pow(self, expr, rational=False):
        prec = precedence(expr)
        base = self.parenthesize(expr.base, prec, strict=False)
        if expr.exp == -1:
            return f'1/{base}'
        exponent = expr.exp
        if (exponent.is_Integer and exponent >= 0) or exponent.is_Symbol:
            return f'{base}^{self._print(exponent)}'
        return f'{base}^({self._print(exponent)})'

    def _print_Derivative(self, expr):
        variables = []
        for v, count in expr.variable_count:
            variables.extend([self._print(v)] * int(count))
        return f'D[{self._print(expr.expr)}, {", ".join(variables)}]'

    def _print_Exp1(self, expr):
        return 'E'


def to_text(e) -> str:
    """Print e so that parse(to_text(e)) reproduces e."""
    return ExprPrinter().doprint(as_expr(e))
