"""Metrics, connections and Lie derivatives over named coordinates.

Index convention: ``gamma[i][j][k]`` is Γ^i_{jk} with the upper index first.
"""
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy as sp

from liesym.errors import MetricNotInvertibleError, PreconditionError
from liesym.symexpr import Expr, as_expr, canonical, is_zero, to_text
from liesym.symexpr.registry import REGISTRY
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)


@dataclass(frozen=True)
class Coordinates:
    """Ordered coordinate names with an optional evolution variable.

    Attributes:
        names (Tuple[str, ...]): all coordinate names, distinct.
        time (Optional[str]): evolution variable, excluded from the spatial
            index range.
    """
    names: Tuple[str, ...]
    time: Optional[str] = None

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise PreconditionError(f'repeated coordinate in {self.names}')
        if self.time is not None and self.time not in self.names:
            raise PreconditionError(
                f'evolution variable {self.time} is not a coordinate'
            )

    @property
    def symbols(self) -> Tuple[sp.Symbol, ...]:
        return REGISTRY.symbols(self.names)

    @property
    def spatial(self) -> Tuple[sp.Symbol, ...]:
        return REGISTRY.symbols(n for n in self.names if n != self.time)

    @property
    def t(self) -> Optional[sp.Symbol]:
        if self.time is None:
            return None
        return REGISTRY.symbol(self.time)

    def __len__(self) -> int:
        return len(self.names)


def _canonical_matrix(m: sp.Matrix) -> sp.ImmutableMatrix:
    return sp.ImmutableMatrix(m.rows, m.cols, [canonical(e) for e in m])


def _symmetric(m: sp.Matrix) -> bool:
    return all(
        is_zero(m[i, j] - m[j, i])
        for i in range(m.rows) for j in range(i + 1, m.cols)
    )


def invert_symmetric(m: sp.Matrix) -> sp.ImmutableMatrix:
    """Exact inverse through the adjugate.

    Raises:
        MetricNotInvertibleError: the determinant vanishes identically
    """
    m = sp.Matrix(m)
    det = canonical(m.det(method='berkowitz'))
    if is_zero(det):
        raise MetricNotInvertibleError(
            'metric determinant vanishes identically'
        )
    adj = m.adjugate(method='berkowitz')
    return _canonical_matrix(adj / det)


@dataclass(frozen=True)
class MetricField:
    """Symmetric metric with both index positions.

    Attributes:
        coordinates (Tuple[sp.Symbol, ...]): coordinates the components
            depend on.
        lower (sp.ImmutableMatrix): covariant components g_ij.
        upper (sp.ImmutableMatrix): contravariant components g^ij.
    """
    coordinates: Tuple[sp.Symbol, ...]
    lower: sp.ImmutableMatrix
    upper: sp.ImmutableMatrix

    @classmethod
    def from_lower(
        cls,
        coordinates: Sequence[sp.Symbol],
        components,
    ) -> 'MetricField':
        lower = _canonical_matrix(sp.Matrix(components).applyfunc(as_expr))
        cls._check_shape(coordinates, lower)
        return cls(tuple(coordinates), lower, invert_symmetric(lower))

    @classmethod
    def from_upper(
        cls,
        coordinates: Sequence[sp.Symbol],
        components,
    ) -> 'MetricField':
        upper = _canonical_matrix(sp.Matrix(components).applyfunc(as_expr))
        cls._check_shape(coordinates, upper)
        return cls(tuple(coordinates), invert_symmetric(upper), upper)

    @classmethod
    def euclidean(cls, coordinates: Sequence[sp.Symbol]) -> 'MetricField':
        return cls.from_lower(coordinates, sp.eye(len(coordinates)))

    @staticmethod
    def _check_shape(coordinates, m: sp.Matrix) -> None:
        n = len(coordinates)
        if m.shape != (n, n):
            raise PreconditionError(
                f'metric shape {m.shape} does not match {n} coordinates'
            )
        if not _symmetric(m):
            raise PreconditionError('metric components are not symmetric')

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def check(self) -> bool:
        """g_ik g^kj = δ_i^j and n = g^jk g_kj, identically."""
        product = self.lower * self.upper
        identity = all(
            is_zero(product[i, j] - (1 if i == j else 0))
            for i in range(self.dimension) for j in range(self.dimension)
        )
        trace = sum(
            self.upper[j, k] * self.lower[k, j]
            for j in range(self.dimension) for k in range(self.dimension)
        )
        return identity and is_zero(trace - self.dimension)

    def lower_index(self, components: Sequence[Expr]) -> Tuple[Expr, ...]:
        n = self.dimension
        return tuple(
            canonical(sum(self.lower[i, j] * components[j] for j in range(n)))
            for i in range(n)
        )

    def raise_index(self, components: Sequence[Expr]) -> Tuple[Expr, ...]:
        n = self.dimension
        return tuple(
            canonical(sum(self.upper[i, j] * components[j] for j in range(n)))
            for i in range(n)
        )

    def gradient(self, f) -> Tuple[Expr, ...]:
        """Contravariant gradient f^{,i} = g^ij f_,j."""
        f = as_expr(f)
        return self.raise_index([sp.diff(f, x) for x in self.coordinates])

    def norm(self, components: Sequence[Expr]) -> Expr:
        """g_ij v^i v^j."""
        n = self.dimension
        return canonical(sum(
            self.lower[i, j] * components[i] * components[j]
            for i in range(n) for j in range(n)
        ))

    def to_json(self) -> dict:
        return {
            'coordinates': [str(x) for x in self.coordinates],
            'g_lower': [[to_text(e) for e in row] for row in
                        self.lower.tolist()],
            'A_upper': [[to_text(e) for e in row] for row in
                        self.upper.tolist()],
        }


@dataclass(frozen=True)
class Connection:
    """Symmetric connection Γ^i_{jk} and its contraction Γ^i = g^jk Γ^i_jk."""
    coordinates: Tuple[sp.Symbol, ...]
    gamma: sp.ImmutableDenseNDimArray
    contracted: Tuple[Expr, ...]

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def __getitem__(self, index: Tuple[int, int, int]) -> Expr:
        i, j, k = index
        return self.gamma[i, j, k]

    def is_flat(self) -> bool:
        return all(is_zero(e) for e in sp.flatten(self.gamma.tolist()))


@dataclass(frozen=True)
class VectorField:
    """Vector field X = X^i ∂_i over the given coordinates."""
    coordinates: Tuple[sp.Symbol, ...]
    components: Tuple[Expr, ...]

    def __post_init__(self) -> None:
        if len(self.components) != len(self.coordinates):
            raise PreconditionError(
                f'{len(self.components)} components for '
                f'{len(self.coordinates)} coordinates'
            )

    @classmethod
    def from_components(
        cls,
        coordinates: Sequence[sp.Symbol],
        components: Iterable,
    ) -> 'VectorField':
        return cls(
            tuple(coordinates),
            tuple(canonical(as_expr(c)) for c in components),
        )

    @classmethod
    def basis(cls, coordinates: Sequence[sp.Symbol], index: int):
        """Coordinate vector ∂_index."""
        return cls.from_components(
            coordinates,
            [1 if k == index else 0 for k in range(len(coordinates))],
        )

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def __getitem__(self, index: int) -> Expr:
        return self.components[index]

    def __add__(self, other: 'VectorField') -> 'VectorField':
        self._check_compatible(other)
        return VectorField.from_components(
            self.coordinates,
            [a + b for a, b in zip(self.components, other.components)],
        )

    def __sub__(self, other: 'VectorField') -> 'VectorField':
        return self + other.scale(-1)

    def scale(self, factor) -> 'VectorField':
        factor = as_expr(factor)
        return VectorField.from_components(
            self.coordinates, [factor * c for c in self.components]
        )

    def apply(self, f) -> Expr:
        """Directional derivative X(f) = X^k f_,k."""
        f = as_expr(f)
        return canonical(sum(
            c * sp.diff(f, x) for c, x in zip(self.components, self.coordinates)
        ))

    def bracket(self, other: 'VectorField') -> 'VectorField':
        """Lie bracket [X, Y]^i = X(Y^i) − Y(X^i)."""
        self._check_compatible(other)
        return VectorField.from_components(
            self.coordinates,
            [
                self.apply(b) - other.apply(a)
                for a, b in zip(self.components, other.components)
            ],
        )

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.components)

    def _check_compatible(self, other: 'VectorField') -> None:
        if self.coordinates != other.coordinates:
            raise PreconditionError(
                'vector fields live on different coordinates'
            )

    def __str__(self) -> str:
        terms = []
        for c, x in zip(self.components, self.coordinates):
            if c == 0:
                continue
            if c == 1:
                terms.append(f'D_{x}')
            else:
                terms.append(f'({to_text(c)})*D_{x}')
        return ' + '.join(terms) if terms else '0'

    def to_json(self) -> dict:
        return {str(x): to_text(c)
                for x, c in zip(self.coordinates, self.components)}


def christoffel(g: MetricField) -> Connection:
    """Levi-Civita connection of g.

    Γ^i_{jk} = ½ g^{ir}(g_{rj,k} + g_{rk,j} − g_{jk,r}); the contraction
    Γ^i = g^{jk}Γ^i_{jk} is filled as well.
    """
    n = g.dimension
    xs = g.coordinates
    dg = [[[sp.diff(g.lower[a, b], xs[c]) for c in range(n)]
           for b in range(n)] for a in range(n)]
    gamma: List = []
    for i in range(n):
        block = []
        for j in range(n):
            row = []
            for k in range(n):
                value = sum(
                    g.upper[i, r] * (dg[r][j][k] + dg[r][k][j] - dg[j][k][r])
                    for r in range(n)
                ) / 2
                row.append(canonical(value))
            block.append(row)
        gamma.append(block)
    contracted = tuple(
        canonical(sum(
            g.upper[j, k] * gamma[i][j][k]
            for j in range(n) for k in range(n)
        ))
        for i in range(n)
    )
    return Connection(
        tuple(xs), sp.ImmutableDenseNDimArray(gamma), contracted
    )


def lie_derivative_scalar(X: VectorField, f) -> Expr:
    return X.apply(f)


def lie_derivative_metric(X: VectorField, g: MetricField) -> sp.ImmutableMatrix:
    """(L_X g)_ij = X^k g_ij,k + g_kj X^k_,i + g_ik X^k_,j."""
    n = g.dimension
    xs = g.coordinates
    if X.coordinates != xs:
        raise PreconditionError('vector field and metric coordinates differ')
    dX = [[sp.diff(X[k], xs[i]) for i in range(n)] for k in range(n)]
    entries = []
    for i in range(n):
        for j in range(n):
            value = X.apply(g.lower[i, j]) + sum(
                g.lower[k, j] * dX[k][i] + g.lower[i, k] * dX[k][j]
                for k in range(n)
            )
            entries.append(canonical(value))
    return sp.ImmutableMatrix(n, n, entries)


def lie_derivative_upper(
    X: VectorField,
    g: MetricField,
) -> sp.ImmutableMatrix:
    """(L_X g)^ij = X^k g^ij_,k − g^kj X^i_,k − g^ik X^j_,k."""
    n = g.dimension
    xs = g.coordinates
    entries = []
    for i in range(n):
        for j in range(n):
            value = X.apply(g.upper[i, j]) - sum(
                g.upper[k, j] * sp.diff(X[i], xs[k])
                + g.upper[i, k] * sp.diff(X[j], xs[k])
                for k in range(n)
            )
            entries.append(canonical(value))
    return sp.ImmutableMatrix(n, n, entries)


def lie_derivative_connection(
    X: VectorField,
    c: Connection,
) -> sp.ImmutableDenseNDimArray:
    """L_X Γ^i_jk.

    L_XΓ^i_jk = Γ^i_jk,l X^l + X^i_,jk − X^i_,l Γ^l_jk + X^l_,j Γ^i_lk
    + X^l_,k Γ^i_jl, symmetric in jk.
    """
    n = c.dimension
    xs = c.coordinates
    if X.coordinates != xs:
        raise PreconditionError(
            'vector field and connection coordinates differ'
        )
    dX = [[sp.diff(X[a], xs[b]) for b in range(n)] for a in range(n)]
    result = []
    for i in range(n):
        block = []
        for j in range(n):
            row = []
            for k in range(n):
                value = (
                    X.apply(c[i, j, k])
                    + sp.diff(X[i], xs[j], xs[k])
                    + sum(
                        -dX[i][l] * c[l, j, k]
                        + dX[l][j] * c[i, l, k]
                        + dX[l][k] * c[i, j, l]
                        for l in range(n)
                    )
                )
                row.append(canonical(value))
            block.append(row)
        result.append(block)
    return sp.ImmutableDenseNDimArray(result)


def covariant_hessian(f, c: Connection) -> sp.ImmutableMatrix:
    """f_;ij = f_,ij − Γ^k_ij f_,k."""
    f = as_expr(f)
    grad = [sp.diff(f, x) for x in c.coordinates]
    return covector_derivative(grad, c)


def covector_derivative(
    w: Sequence[Expr],
    c: Connection,
) -> sp.ImmutableMatrix:
    """w_{i;j} = w_i,j − Γ^k_ij w_k, as a matrix indexed [i, j]."""
    xs = c.coordinates
    n = c.dimension
    entries = []
    for i in range(n):
        for j in range(n):
            value = sp.diff(w[i], xs[j]) - sum(
                c[k, i, j] * w[k] for k in range(n)
            )
            entries.append(canonical(value))
    return sp.ImmutableMatrix(n, n, entries)


def metric_compatibility(g: MetricField, c: Connection) -> List[Expr]:
    """Components of g_ij;k, all of which vanish for the Levi-Civita
    connection."""
    n = g.dimension
    xs = g.coordinates
    residuals = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                value = sp.diff(g.lower[i, j], xs[k]) - sum(
                    c[l, k, i] * g.lower[l, j] + c[l, k, j] * g.lower[i, l]
                    for l in range(n)
                )
                residuals.append(canonical(value))
    return residuals


def contracted_lie_connection(
    X: VectorField,
    g: MetricField,
    c: Connection,
) -> Tuple[Expr, ...]:
    """g^jk L_X Γ^i_jk."""
    lx = lie_derivative_connection(X, c)
    n = g.dimension
    return tuple(
        canonical(sum(
            g.upper[j, k] * lx[i, j, k] for j in range(n) for k in range(n)
        ))
        for i in range(n)
    )
