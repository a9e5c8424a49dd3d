from .kernel import (  # noqa: F401
    Expr,
    as_expr,
    canonical,
    collect_monomials,
    declare_function,
    diff,
    independent_coefficients,
    is_zero,
    numerator,
)
from .grammar import Namespace, parse  # noqa: F401
from .printer import to_text  # noqa: F401
from .rational import RationalFunction  # noqa: F401
from .registry import REGISTRY, var, variables  # noqa: F401
