"""Exact linear algebra over the rationals and rational function fields."""
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp
from sympy.polys.matrices import DomainMatrix

from liesym.symexpr import Expr, canonical, independent_coefficients
from liesym.symexpr.kernel import jacobian_rows
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)


def rref(matrix: sp.Matrix) -> Tuple[sp.Matrix, Tuple[int, ...]]:
    """Reduced row echelon form and pivot columns.

    Elimination is fraction free over the ground ring when the installed
    sympy provides it; the result is normalised to unit pivots either way.
    """
    if matrix.rows == 0:
        return sp.Matrix(matrix), ()
    dm = DomainMatrix.from_Matrix(matrix)
    if hasattr(dm, 'rref_den') and not dm.domain.is_Field:
        reduced, den, pivots = dm.rref_den()
        den = dm.domain.to_sympy(den)
        result = reduced.to_Matrix() / den
    else:
        reduced, pivots = dm.to_field().rref()
        result = reduced.to_Matrix()
    result = result.applyfunc(canonical)
    return result, tuple(pivots)


def nullspace(matrix: sp.Matrix) -> List[sp.Matrix]:
    """Basis of the right kernel, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other
    free columns, which makes the basis unique.
    """
    cols = matrix.cols
    reduced, pivots = rref(matrix)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = sp.zeros(cols, 1)
        v[f] = 1
        for r, p in enumerate(pivots):
            v[p] = canonical(-reduced[r, f])
        basis.append(v)
    return basis


def rank(matrix: sp.Matrix) -> int:
    return len(rref(matrix)[1])


def solve_linear(
    matrix: sp.Matrix,
    rhs: sp.Matrix,
) -> Optional[sp.Matrix]:
    """One solution of matrix·v = rhs with free unknowns set to zero.

    Returns:
        Optional[sp.Matrix]: None when the system is inconsistent
    """
    cols = matrix.cols
    if matrix.rows == 0:
        return sp.zeros(cols, 1)
    augmented = matrix.row_join(rhs)
    reduced, pivots = rref(augmented)
    if cols in pivots:
        return None
    solution = sp.zeros(cols, 1)
    for r, p in enumerate(pivots):
        solution[p] = reduced[r, cols]
    return solution


def solve_equations(
    equations: Sequence[Expr],
    unknowns: Sequence[sp.Symbol],
) -> Optional[Dict[sp.Symbol, Expr]]:
    """Particular solution of equations linear in unknowns, or None."""
    if not unknowns:
        return {} if all(canonical(e) == 0 for e in equations) else None
    matrix, rhs = jacobian_rows(equations, unknowns)
    solution = solve_linear(matrix, rhs)
    if solution is None:
        return None
    return {u: canonical(solution[k]) for k, u in enumerate(unknowns)}


def homogeneous_system(
    residuals: Sequence[Expr],
    unknowns: Sequence[sp.Symbol],
    gens: Sequence[sp.Symbol],
) -> sp.Matrix:
    """Matrix of the conditions that every residual vanish identically in
    gens, the residuals being linear and homogeneous in unknowns."""
    rows = []
    for residual in residuals:
        rows.extend(independent_coefficients(residual, gens))
    matrix, _ = jacobian_rows(rows, unknowns)
    return matrix


def in_span(
    target: Sequence[Expr],
    basis: Sequence[Sequence[Expr]],
    gens: Sequence[sp.Symbol],
) -> Optional[Tuple[Expr, ...]]:
    """Constant coefficients c with Σ c_a basis_a = target, or None.

    Args:
        target (Sequence[Expr]): components of the target field
        basis (Sequence[Sequence[Expr]]): components of the spanning fields
        gens (Sequence[sp.Symbol]): variables the components depend on
    """
    if not basis:
        if all(canonical(v) == 0 for v in target):
            return ()
        return None
    coefficients = [sp.Dummy(f'c{a}') for a in range(len(basis))]
    equations = []
    for k, value in enumerate(target):
        combination = sum(c * b[k] for c, b in zip(coefficients, basis))
        equations.extend(independent_coefficients(combination - value, gens))
    solution = solve_equations(equations, coefficients)
    if solution is None:
        return None
    return tuple(solution[c] for c in coefficients)
