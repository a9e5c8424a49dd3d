"""Dimension of the heat equation symmetry algebra.

With b ∂_u counted once, every nongradient KV or HV contributes one
generator and every gradient one contributes two, besides ∂_t, u ∂_u and
b ∂_u.
"""
from dataclasses import dataclass
from typing import Optional

import sympy as sp

from liesym.errors import PreconditionError
from liesym.geometry.tensors import MetricField
from liesym.solver.catalogs import euclidean_catalog, euclidean_coordinates
from liesym.solver.homothetic import AlgebraBasis, solve_homothetic
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)

SPACES = ('flat', 'constcurv', '1d')


@dataclass(frozen=True)
class SymmetryCount:
    """Heat symmetry count of a family of spaces.

    Attributes:
        space (str): 'flat', 'constcurv' or '1d'.
        n (int): dimension.
        count (int): value of the closed formula.
        formula (str): the closed formula.
        nongradient (int): nongradient KVs and HVs used.
        gradient (int): gradient KVs and HVs used.
        enumerated (Optional[int]): count from a constructed algebra, when
            one was built.
    """
    space: str
    n: int
    count: int
    formula: str
    nongradient: int
    gradient: int
    enumerated: Optional[int] = None

    @property
    def consistent(self) -> bool:
        return self.enumerated is None or self.enumerated == self.count

    def to_json(self) -> dict:
        return {
            'space': self.space,
            'n': self.n,
            'count': self.count,
            'formula': self.formula,
            'nongradient': self.nongradient,
            'gradient': self.gradient,
            'enumerated': self.enumerated,
            'counting': 'b(t, x) D_u counted once',
        }


def count_from_algebra(algebra: AlgebraBasis) -> int:
    """3 + #nongradient + 2·#gradient over the homothetic elements."""
    return (3 + len(algebra.nongradient_elements())
            + 2 * len(algebra.gradient_elements()))


def halfspace_metric(n: int) -> MetricField:
    """δ_ij / x_n², a space of constant negative curvature."""
    xs = euclidean_coordinates(n)
    return MetricField.from_lower(xs, sp.eye(n) / xs[-1]**2)


def _parse_space(space: str):
    kind, _, size = space.partition(':')
    if kind not in SPACES:
        raise PreconditionError(
            f'unknown space {space!r}, expected flat:<n>, constcurv:<n> '
            'or 1d'
        )
    if kind == '1d':
        if size not in ('', '1'):
            raise PreconditionError('1d takes no dimension')
        return kind, 1
    try:
        n = int(size)
    except ValueError:
        raise PreconditionError(f'{space!r} needs an integer dimension')
    if n < 1:
        raise PreconditionError(f'dimension must be >= 1, got {n}')
    if kind == 'constcurv' and n < 2:
        raise PreconditionError('constant curvature needs n >= 2')
    return kind, n


def heat_symmetry_counts(space: str, enumerate_upto: int = 3) -> SymmetryCount:
    """Closed form count for 'flat:<n>', 'constcurv:<n>' or '1d'.

    For dimensions up to enumerate_upto the count is also taken from a
    constructed homothetic algebra: the Euclidean catalog for flat spaces
    and the solved half space model for constant curvature.

    Raises:
        PreconditionError: unknown space
    """
    kind, n = _parse_space(space)
    if kind == 'constcurv':
        nongradient, gradient = n * (n + 1) // 2, 0
        count = (n + 3) + n * (n - 1) // 2
        formula = '(n+3) + n(n-1)/2'
    else:
        nongradient, gradient = n * (n - 1) // 2, n + 1
        count = n * (n + 3) // 2 + 5
        formula = 'n(n+3)/2 + 5' if kind == 'flat' else '7'
    enumerated = None
    if n <= enumerate_upto:
        if kind == 'constcurv':
            algebra = solve_homothetic(halfspace_metric(n), degree=2)
        else:
            algebra = euclidean_catalog(n)
        enumerated = count_from_algebra(algebra)
    result = SymmetryCount(kind, n, count, formula, nongradient, gradient,
                           enumerated)
    if not result.consistent:
        LOG.warning(
            f'{space}: formula gives {count}, constructed algebra '
            f'{enumerated}'
        )
    return result
