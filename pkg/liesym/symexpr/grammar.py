"""Text grammar for kernel expressions.

EBNF::

    expr       := sum
    sum        := product (("+" | "-") product)*
    product    := unary (("*" | "/") unary)*
    unary      := ("-" | "+") unary | power
    power      := atom ("^" unary)?
    atom       := INT | NAME | NAME "(" sum ("," sum)* ")"
                | "D" "[" target ("," NAME)+ "]" | "(" sum ")"
    target     := NAME | NAME "(" NAME ("," NAME)* ")"

``D[q, x, u]`` is the formal derivative q_{,xu} of the opaque function q.
``exp``, ``log`` and the constant ``E`` are built in; ``D`` is reserved.
"""
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import sympy as sp
from lark import Lark, Transformer, v_args
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
    VisitError,
)

from liesym.errors import (
    LiesymError,
    ParseError,
    PreconditionError,
    UndeclaredSymbolError,
)
from liesym.symexpr.kernel import Expr, as_expr, canonical, declare_function
from liesym.symexpr.registry import REGISTRY, VariableRegistry

EXPR_GRAMMAR = r"""
    ?start: sum

    ?sum: product
        | sum "+" product      -> add
        | sum "-" product      -> sub

    ?product: unary
        | product "*" unary    -> mul
        | product "/" unary    -> div

    ?unary: power
        | "-" unary            -> neg
        | "+" unary

    ?power: atom
        | atom "^" unary       -> pow

    ?atom: INT                 -> number
        | NAME                 -> name
        | NAME "(" sum ("," sum)* ")"   -> call
        | "D" "[" target ("," NAME)+ "]" -> derivative
        | "(" sum ")"

    target: NAME
        | NAME "(" NAME ("," NAME)* ")"

    NAME: /[^\W\d]\w*/

    %import common.INT
    %import common.WS
    %ignore WS
"""

BUILTIN_FUNCTIONS = {
    'exp': sp.exp,
    'log': sp.log,
}
BUILTIN_CONSTANTS = {
    'E': sp.E,
}
RESERVED = {'D'} | set(BUILTIN_FUNCTIONS) | set(BUILTIN_CONSTANTS)


class Namespace:
    """Declared names for parsing.

    In a strict namespace every identifier must be declared; otherwise unknown
    identifiers become variables and unknown calls declare opaque functions.
    """
    def __init__(
        self,
        strict: bool = False,
        registry: VariableRegistry = REGISTRY,
    ) -> None:
        self.strict = strict
        self._registry = registry
        self._variables: Dict[str, sp.Symbol] = {}
        self._constants: Dict[str, Expr] = {}
        self._functions: Dict[str, Tuple[sp.Symbol, ...]] = {}

    @property
    def variables(self) -> Dict[str, sp.Symbol]:
        return dict(self._variables)

    @property
    def constants(self) -> Dict[str, Expr]:
        return dict(self._constants)

    @property
    def functions(self) -> Dict[str, Tuple[sp.Symbol, ...]]:
        return dict(self._functions)

    def _check_free(self, name: str) -> None:
        if name in RESERVED:
            raise PreconditionError(f'{name!r} is a reserved name')
        if name in self._functions or name in self._constants:
            raise PreconditionError(f'{name!r} is already declared')

    def declare_variable(self, name: str) -> sp.Symbol:
        if name in self._variables:
            return self._variables[name]
        self._check_free(name)
        sym = self._registry.symbol(name)
        self._variables[name] = sym
        return sym

    def declare_variables(self, names: Iterable[str]) -> Tuple[sp.Symbol, ...]:
        return tuple(self.declare_variable(name) for name in names)

    def declare_constant(self, name: str, value=None) -> Expr:
        """Declare a named constant, symbolic when value is None."""
        if name in self._variables:
            raise PreconditionError(f'{name!r} is already a variable')
        self._check_free(name)
        if value is None:
            const = self._registry.symbol(name)
        else:
            const = as_expr(value)
            if not const.is_Rational:
                raise PreconditionError(
                    f'constant {name} must be rational, got {value!r}'
                )
        self._constants[name] = const
        return const

    def declare_function(
        self,
        name: str,
        args: Sequence[Union[str, sp.Symbol]],
    ) -> Expr:
        self._check_free(name)
        if name in self._variables:
            raise PreconditionError(f'{name!r} is already a variable')
        symbols = tuple(
            self.declare_variable(a) if isinstance(a, str) else a
            for a in args
        )
        applied = declare_function(name, symbols)
        self._functions[name] = symbols
        return applied

    def resolve(self, name: str) -> Expr:
        if name in BUILTIN_CONSTANTS:
            return BUILTIN_CONSTANTS[name]
        if name in self._constants:
            return self._constants[name]
        if name in self._variables:
            return self._variables[name]
        if name in self._functions:
            return sp.Function(name)(*self._functions[name])
        if self.strict:
            raise UndeclaredSymbolError(f'undeclared identifier {name!r}')
        return self.declare_variable(name)

    def apply(self, name: str, args: Sequence[Expr]) -> Expr:
        if name in BUILTIN_FUNCTIONS:
            if len(args) != 1:
                raise ParseError(f'{name} takes exactly one argument')
            return BUILTIN_FUNCTIONS[name](args[0])
        for arg in args:
            if not isinstance(arg, sp.Symbol):
                raise ParseError(
                    f'arguments of opaque function {name} must be plain '
                    f'variables, got {arg}'
                )
        if name not in self._functions:
            if self.strict:
                raise UndeclaredSymbolError(f'undeclared function {name!r}')
            return self.declare_function(name, args)
        return sp.Function(name)(*args)

    def derivative(
        self,
        name: str,
        args: Optional[Sequence[Expr]],
        wrt: Sequence[str],
    ) -> Expr:
        if args is None:
            if name not in self._functions:
                raise UndeclaredSymbolError(
                    f'derivative of undeclared function {name!r}'
                )
            target = sp.Function(name)(*self._functions[name])
        else:
            target = self.apply(name, args)
        variables = [self.resolve(v) for v in wrt]
        for v in variables:
            if not isinstance(v, sp.Symbol):
                raise ParseError(f'cannot differentiate with respect to {v}')
        return sp.diff(target, *variables)


@v_args(inline=True)
class ExprTransformer(Transformer):
    """Builds sympy expressions from the parse tree"""
    def __init__(self, namespace: Namespace) -> None:
        super().__init__()
        self.namespace = namespace

    def number(self, token):
        return sp.Integer(int(token))

    def name(self, token):
        return self.namespace.resolve(str(token))

    def call(self, token, *args):
        return self.namespace.apply(str(token), args)

    def target(self, token, *args):
        if not args:
            return (str(token), None)
        return (str(token), [self.namespace.resolve(str(a)) for a in args])

    def derivative(self, target, *names):
        name, args = target
        return self.namespace.derivative(name, args, [str(n) for n in names])

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise ParseError('division by zero')
        return a / b

    def neg(self, a):
        return -a

    def pow(self, base, exponent):
        return base**exponent


@lru_cache(maxsize=None)
def get_parser() -> Lark:
    return Lark(EXPR_GRAMMAR, start='start', parser='lalr')


def parse_raw(text: str, namespace: Optional[Namespace] = None) -> Expr:
    """Parse text without canonicalisation."""
    if namespace is None:
        namespace = Namespace()
    try:
        tree = get_parser().parse(text)
    except UnexpectedCharacters as err:
        raise ParseError(
            f'unknown token {err.char!r}', text, err.line, err.column
        )
    except UnexpectedToken as err:
        raise ParseError(
            f'unexpected token {str(err.token)!r}', text, err.line, err.column
        )
    except UnexpectedEOF:
        raise ParseError(
            'unexpected end of input', text, 1, len(text) + 1
        )
    except UnexpectedInput as err:
        raise ParseError(
            'syntax error', text,
            getattr(err, 'line', None), getattr(err, 'column', None),
        )
    try:
        return ExprTransformer(namespace).transform(tree)
    except VisitError as err:
        if isinstance(err.orig_exc, LiesymError):
            raise err.orig_exc
        raise


def parse(text: str, namespace: Optional[Namespace] = None) -> Expr:
    """Parse text into a canonical expression.

    Args:
        text (str): expression in the kernel grammar
        namespace (Optional[Namespace], optional): declared names. Defaults
            to a permissive namespace that declares unknown identifiers.

    Returns:
        Expr: canonical expression

    Raises:
        ParseError: syntax error or unknown token, with line and column
    """
    return canonical(parse_raw(text, namespace))
