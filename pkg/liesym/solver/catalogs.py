"""Verified collineation catalogs of Euclidean space and de Sitter spacetime."""
from typing import Optional, Sequence, Tuple, Union

import sympy as sp

from liesym.errors import InvariantViolation, PreconditionError
from liesym.geometry.collineations import (
    CollineationTag,
    classify_collineation,
)
from liesym.geometry.tensors import MetricField, VectorField, christoffel
from liesym.solver.homothetic import AlgebraBasis, AlgebraElement
from liesym.symexpr import as_expr, is_zero
from liesym.symexpr.registry import REGISTRY
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)

DESITTER_COORDINATES = ('tau', 'x', 'y', 'z')


def euclidean_coordinates(n: int) -> Tuple[sp.Symbol, ...]:
    if n < 1:
        raise PreconditionError(f'dimension must be >= 1, got {n}')
    if n <= 3:
        return REGISTRY.symbols(('x', 'y', 'z')[:n])
    return REGISTRY.symbols(f'x{i}' for i in range(1, n + 1))


def _element(
    name: str,
    X: VectorField,
    g: MetricField,
    connection,
    expected: CollineationTag,
    gradient: Optional[bool] = None,
) -> AlgebraElement:
    classification = classify_collineation(X, g, connection)
    if classification is None or classification.tag is not expected:
        found = None if classification is None else classification.label
        raise InvariantViolation(
            f'{name} = {X} classified as {found}, expected {expected}'
        )
    if gradient is not None and classification.gradient != gradient:
        raise InvariantViolation(
            f'{name} = {X} gradient flag is {classification.gradient}'
        )
    LOG.debug(f'{name}: {classification.label}')
    return AlgebraElement(name, X, classification)


def euclidean_catalog(
    n: int,
    coordinates: Optional[Sequence[sp.Symbol]] = None,
) -> AlgebraBasis:
    """Collineations of Euclidean space E^n.

    Translations S_I, rotations X_IJ, the homothety H = x^i ∂_i, the affine
    collineations A_IJ = x_J ∂_I and the special projective collineations
    P_I = x_I H. Every vector is classified and checked against its
    expected class; for n = 1 the affine collineation coincides with H and
    is dropped.
    """
    if coordinates is None:
        coordinates = euclidean_coordinates(n)
    coordinates = tuple(coordinates)
    if len(coordinates) != n:
        raise PreconditionError(f'{len(coordinates)} coordinates for n = {n}')
    g = MetricField.euclidean(coordinates)
    connection = christoffel(g)
    elements = []

    def field(components):
        return VectorField.from_components(coordinates, components)

    for i in range(n):
        elements.append(_element(
            f'S_{i + 1}', VectorField.basis(coordinates, i), g, connection,
            CollineationTag.KV, gradient=True,
        ))
    for i in range(n):
        for j in range(i + 1, n):
            components = [0] * n
            components[i] = -coordinates[j]
            components[j] = coordinates[i]
            elements.append(_element(
                f'X_{i + 1}{j + 1}', field(components), g, connection,
                CollineationTag.KV, gradient=False,
            ))
    elements.append(_element(
        'H', field(coordinates), g, connection,
        CollineationTag.HV, gradient=True,
    ))
    if n > 1:
        for i in range(n):
            for j in range(n):
                components = [0] * n
                components[i] = coordinates[j]
                elements.append(_element(
                    f'A_{i + 1}{j + 1}', field(components), g, connection,
                    CollineationTag.AC,
                ))
    for i in range(n):
        elements.append(_element(
            f'P_{i + 1}', field([coordinates[i] * x for x in coordinates]),
            g, connection, CollineationTag.SPC,
        ))
    LOG.info(f'Euclidean catalog for n = {n}: {len(elements)} vectors')
    return AlgebraBasis(
        metric=g,
        elements=elements,
        degree=2,
        complete=True,
        description=f'Collineations of Euclidean space E^{n}',
    )


def desitter_metric(
    K: Union[int, str, sp.Expr] = 'K',
) -> Tuple[MetricField, sp.Expr]:
    """Conformally flat de Sitter metric.

    g = diag(−1, 1, 1, 1) / (1 + K/4 (−τ² + x² + y² + z²))² over the
    coordinates (tau, x, y, z).
    """
    if isinstance(K, str):
        K = REGISTRY.symbol(K)
    K = as_expr(K)
    if is_zero(K):
        raise PreconditionError('de Sitter curvature K must be nonzero')
    tau, x, y, z = REGISTRY.symbols(DESITTER_COORDINATES)
    conformal = (1 + K / 4 * (-tau**2 + x**2 + y**2 + z**2))**2
    lower = sp.diag(-1, 1, 1, 1) / conformal
    return MetricField.from_lower((tau, x, y, z), lower), K


def desitter_vectors(K: sp.Expr) -> Tuple[Tuple[sp.Expr, ...], ...]:
    tau, x, y, z = REGISTRY.symbols(DESITTER_COORDINATES)
    half = sp.Rational(1, 2)
    c = 2 / K
    return (
        (-x * tau, half * (-tau**2 - x**2 + y**2 + z**2) - c, -y * x, -z * x),
        (y * tau, y * x, half * (tau**2 - x**2 + y**2 - z**2) + c, y * z),
        (z * tau, z * x, z * y, half * (tau**2 - x**2 - y**2 + z**2) + c),
        (half * (tau**2 + x**2 + y**2 + z**2) - c, tau * x, tau * y, tau * z),
        (x, tau, 0, 0),
        (y, 0, tau, 0),
        (z, 0, 0, tau),
        (0, y, -x, 0),
        (0, z, 0, -x),
        (0, 0, z, -y),
    )


def desitter_catalog(K: Union[int, str, sp.Expr] = 'K') -> AlgebraBasis:
    """The ten Killing vectors X1..X10 of de Sitter spacetime.

    Args:
        K (Union[int, str, sp.Expr], optional): nonzero curvature, a
            rational value or a symbol name. Defaults to the symbol K.

    Raises:
        PreconditionError: K = 0
    """
    g, K = desitter_metric(K)
    connection = christoffel(g)
    elements = []
    for index, components in enumerate(desitter_vectors(K), start=1):
        X = VectorField.from_components(g.coordinates, components)
        elements.append(_element(
            f'X{index}', X, g, connection, CollineationTag.KV, gradient=False,
        ))
    LOG.info('de Sitter catalog verified: 10 nongradient KVs')
    return AlgebraBasis(
        metric=g,
        elements=elements,
        degree=2,
        complete=True,
        description='Killing vectors of de Sitter spacetime',
    )
