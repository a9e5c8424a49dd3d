"""Formal jet variables and total derivatives.

First derivatives u_i and second derivatives u_ij (i <= j) of the dependent
variable are plain kernel variables; u_ij and u_ji are the same symbol.
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

import sympy as sp

from liesym.errors import PreconditionError
from liesym.symexpr import Expr, as_expr
from liesym.symexpr.registry import REGISTRY


def _suffix(names: Sequence[str]) -> str:
    if all(len(n) == 1 for n in names):
        return ''.join(names)
    return '_'.join(names)


@dataclass(frozen=True)
class JetSpace:
    """Second order jet space J²(coordinates, u).

    Attributes:
        coordinates (Tuple[sp.Symbol, ...]): independent variables.
        dependent (sp.Symbol): dependent variable u.
        first (Tuple[sp.Symbol, ...]): u_i in coordinate order.
        second (Tuple[Tuple[int, int, sp.Symbol], ...]): (i, j, u_ij) for
            i <= j.
    """
    coordinates: Tuple[sp.Symbol, ...]
    dependent: sp.Symbol
    first: Tuple[sp.Symbol, ...]
    second: Tuple[Tuple[int, int, sp.Symbol], ...]

    @classmethod
    def create(
        cls,
        coordinates: Sequence[sp.Symbol],
        dependent: str = 'u',
    ) -> 'JetSpace':
        coordinates = tuple(coordinates)
        names = [str(x) for x in coordinates]
        if dependent in names:
            raise PreconditionError(
                f'dependent variable {dependent} is also a coordinate'
            )
        u = REGISTRY.symbol(dependent)
        first = tuple(
            REGISTRY.symbol(f'{dependent}_{name}') for name in names
        )
        second = []
        for i in range(len(names)):
            for j in range(i, len(names)):
                name = f'{dependent}_{_suffix([names[i], names[j]])}'
                second.append((i, j, REGISTRY.symbol(name)))
        return cls(coordinates, u, first, tuple(second))

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def u1(self, i: int) -> sp.Symbol:
        return self.first[i]

    def u2(self, i: int, j: int) -> sp.Symbol:
        if i > j:
            i, j = j, i
        for a, b, sym in self.second:
            if (a, b) == (i, j):
                return sym
        raise IndexError((i, j))

    @property
    def second_symbols(self) -> Tuple[sp.Symbol, ...]:
        return tuple(sym for _, _, sym in self.second)

    @property
    def all_jets(self) -> Tuple[sp.Symbol, ...]:
        return self.first + self.second_symbols

    def index_of(self, sym: sp.Symbol) -> Tuple[int, int]:
        for a, b, s in self.second:
            if s == sym:
                return a, b
        raise KeyError(sym)

    def total_derivative(self, e, i: int) -> Expr:
        """D_i on functions of (x, u, u_k).

        D_i = ∂_i + u_i ∂_u + Σ_k u_ik ∂_{u_k}.
        """
        e = as_expr(e)
        if e.has(*self.second_symbols):
            raise PreconditionError(
                'total derivative of second order jets needs third order '
                'jets'
            )
        result = sp.diff(e, self.coordinates[i])
        result += self.first[i] * sp.diff(e, self.dependent)
        for k in range(self.dimension):
            result += self.u2(i, k) * sp.diff(e, self.first[k])
        return result


@dataclass(frozen=True)
class VelocitySpace:
    """First order jets of curves x^i(t): velocities ẋ^i and
    accelerations ẍ^i."""
    time: sp.Symbol
    coordinates: Tuple[sp.Symbol, ...]
    velocities: Tuple[sp.Symbol, ...]
    accelerations: Tuple[sp.Symbol, ...]

    @classmethod
    def create(
        cls,
        time: sp.Symbol,
        coordinates: Sequence[sp.Symbol],
    ) -> 'VelocitySpace':
        coordinates = tuple(coordinates)
        velocities = tuple(REGISTRY.symbol(f'{x}_dot') for x in coordinates)
        accelerations = tuple(
            REGISTRY.symbol(f'{x}_ddot') for x in coordinates
        )
        return cls(time, coordinates, velocities, accelerations)

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def total_derivative(self, e) -> Expr:
        """D_t = ∂_t + ẋ^k ∂_k + ẍ^k ∂_{ẋ^k}."""
        e = as_expr(e)
        result = sp.diff(e, self.time)
        for x, v, acc in zip(self.coordinates, self.velocities,
                             self.accelerations):
            result += v * sp.diff(e, x) + acc * sp.diff(e, v)
        return result

    def on_shell(self, e, accelerations: Sequence[Expr]) -> Expr:
        """Replace ẍ^i by the given right hand sides."""
        return as_expr(e).xreplace(dict(zip(self.accelerations,
                                            accelerations)))
