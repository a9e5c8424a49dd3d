"""Collineation predicates.

A vector field X is a conformal Killing vector when L_X g = 2ψ g and a
projective collineation when L_X Γ^i_jk = φ_,j δ^i_k + φ_,k δ^i_j.
"""
import enum
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Sequence, Tuple

import sympy as sp

from liesym.errors import PreconditionError
from liesym.geometry.tensors import (
    Connection,
    MetricField,
    VectorField,
    christoffel,
    contracted_lie_connection,
    covariant_hessian,
    covector_derivative,
    lie_derivative_connection,
    lie_derivative_metric,
)
from liesym.symexpr import Expr, as_expr, canonical, is_zero, to_text
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)


@enum.unique
class CollineationTag(enum.Enum):
    """Collineation classes of a metric and its connection"""
    KV = 'KV'
    HV = 'HV'
    SCKV = 'SCKV'
    CKV = 'proper-CKV'
    AC = 'AC'
    SPC = 'SPC'
    PC = 'PC'

    def __str__(self) -> str:
        return str(self.value)


PRIORITY = (
    CollineationTag.KV,
    CollineationTag.HV,
    CollineationTag.AC,
    CollineationTag.SPC,
    CollineationTag.SCKV,
    CollineationTag.PC,
    CollineationTag.CKV,
)


@dataclass(frozen=True)
class GradientTest:
    """Outcome of the closedness test for X_i = g_ij X^j.

    Attributes:
        closed (bool): X_i,j = X_j,i identically.
        potential (Optional[Expr]): S with S_,i = X_i when found.
        representable (bool): S is a rational function of the coordinates.
    """
    closed: bool
    potential: Optional[Expr] = None
    representable: bool = False


@dataclass(frozen=True)
class CollineationClass:
    """Classification of a vector field.

    Attributes:
        tag (CollineationTag): most specific class.
        tags (FrozenSet[CollineationTag]): every class the field belongs to.
        gradient (bool): the lowered field is closed.
        psi (Optional[Expr]): conformal factor, L_X g = 2ψ g.
        phi_gradient (Optional[Tuple[Expr, ...]]): φ_,k of the projective
            condition.
        phi (Optional[Expr]): projective function when integrable.
        potential (Optional[Expr]): gradient potential S.
        potential_representable (bool): S is rational.
    """
    tag: CollineationTag
    tags: FrozenSet[CollineationTag] = field(default_factory=frozenset)
    gradient: bool = False
    psi: Optional[Expr] = None
    phi_gradient: Optional[Tuple[Expr, ...]] = None
    phi: Optional[Expr] = None
    potential: Optional[Expr] = None
    potential_representable: bool = False

    @property
    def label(self) -> str:
        if self.gradient and self.tag in (CollineationTag.KV,
                                          CollineationTag.HV):
            if self.potential_representable:
                return f'gradient-{self.tag}'
            return f'gradient-{self.tag} (potential not representable)'
        return str(self.tag)

    def is_homothetic(self) -> bool:
        return self.tag in (CollineationTag.KV, CollineationTag.HV)

    def __str__(self) -> str:
        return self.label

    def to_json(self) -> dict:
        return {
            'class': self.label,
            'tags': sorted(str(t) for t in self.tags),
            'gradient': self.gradient,
            'psi': None if self.psi is None else to_text(self.psi),
            'phi': None if self.phi is None else to_text(self.phi),
            'potential': (
                None if self.potential is None or
                not self.potential_representable
                else to_text(self.potential)
            ),
        }


def _is_constant(e: Expr, coordinates: Sequence[sp.Symbol]) -> bool:
    return all(is_zero(sp.diff(e, x)) for x in coordinates)


def integrate_gradient(
    components: Sequence[Expr],
    coordinates: Sequence[sp.Symbol],
) -> GradientTest:
    """Find S with S_,i = components[i] by successive antiderivatives.

    The one-form must be closed; S is integrated along the coordinate axes
    one variable at a time, removing what the previous steps already
    account for.
    """
    n = len(coordinates)
    for i in range(n):
        for j in range(i + 1, n):
            curl = (sp.diff(components[i], coordinates[j])
                    - sp.diff(components[j], coordinates[i]))
            if not is_zero(curl):
                return GradientTest(closed=False)
    potential = sp.Integer(0)
    for k, x in enumerate(coordinates):
        remainder = canonical(components[k] - sp.diff(potential, x))
        if is_zero(remainder):
            continue
        antiderivative = sp.integrate(remainder, x)
        if antiderivative.has(sp.Integral):
            return GradientTest(closed=True)
        potential = potential + antiderivative
    potential = canonical(sp.expand_log(potential, force=True))
    representable = bool(potential.is_rational_function(*coordinates))
    return GradientTest(True, potential, representable)


def gradient_test(X: VectorField, g: MetricField) -> GradientTest:
    """Closedness of X_i = g_ij X^j and its potential."""
    return integrate_gradient(g.lower_index(X.components), g.coordinates)


def conformal_factor(X: VectorField, g: MetricField) -> Optional[Expr]:
    """ψ with L_X g = 2ψ g, or None when X is not conformal."""
    lx = lie_derivative_metric(X, g)
    n = g.dimension
    psi = None
    for i in range(n):
        for j in range(i, n):
            if not is_zero(g.lower[i, j]):
                psi = canonical(lx[i, j] / (2 * g.lower[i, j]))
                break
        if psi is not None:
            break
    if psi is None:
        return None
    for i in range(n):
        for j in range(i, n):
            if not is_zero(lx[i, j] - 2 * psi * g.lower[i, j]):
                return None
    return psi


def projective_gradient(
    X: VectorField,
    c: Connection,
) -> Optional[Tuple[Expr, ...]]:
    """φ_,k with L_XΓ^i_jk = φ_,j δ^i_k + φ_,k δ^i_j, or None."""
    lx = lie_derivative_connection(X, c)
    n = c.dimension
    phi_k = tuple(
        canonical(sum(lx[i, i, k] for i in range(n)) / (n + 1))
        for k in range(n)
    )
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                expected = (
                    (phi_k[j] if i == k else 0) + (phi_k[k] if i == j else 0)
                )
                if not is_zero(lx[i, j, k] - expected):
                    return None
    return phi_k


def classify_collineation(
    X: VectorField,
    g: MetricField,
    connection: Optional[Connection] = None,
) -> Optional[CollineationClass]:
    """Classify X against the metric g and its Levi-Civita connection.

    Args:
        X (VectorField): candidate vector field
        g (MetricField): metric
        connection (Optional[Connection], optional): precomputed
            connection of g

    Returns:
        Optional[CollineationClass]: None when X is neither conformal nor
            projective
    """
    if connection is None:
        connection = christoffel(g)
    xs = g.coordinates
    tags = set()
    psi = conformal_factor(X, g)
    if psi is not None:
        if is_zero(psi):
            tags.add(CollineationTag.KV)
        elif _is_constant(psi, xs):
            tags.add(CollineationTag.HV)
        elif all(is_zero(e) for e in covariant_hessian(psi, connection)):
            tags.add(CollineationTag.SCKV)
        else:
            tags.add(CollineationTag.CKV)
    phi_k = projective_gradient(X, connection)
    phi = None
    if phi_k is not None:
        if all(is_zero(e) for e in phi_k):
            tags.add(CollineationTag.AC)
            phi = sp.Integer(0)
        else:
            hessian = covector_derivative(phi_k, connection)
            if all(is_zero(e) for e in hessian):
                tags.add(CollineationTag.SPC)
            else:
                tags.add(CollineationTag.PC)
            phi = integrate_gradient(phi_k, xs).potential
    if not tags:
        LOG.debug(f'{X} is not a collineation')
        return None
    primary = next(t for t in PRIORITY if t in tags)
    grad = gradient_test(X, g)
    result = CollineationClass(
        tag=primary,
        tags=frozenset(tags),
        gradient=grad.closed,
        psi=psi,
        phi_gradient=phi_k,
        phi=phi,
        potential=grad.potential,
        potential_representable=grad.representable,
    )
    LOG.debug(f'{X}: {result.label}')
    return result


def contracted_identity_residuals(
    X: VectorField,
    g: MetricField,
    factor,
    connection: Optional[Connection] = None,
) -> Tuple[Expr, ...]:
    """Residuals of the contracted Lie derivative identity.

    For L_X g = factor·g,
    g^jk L_XΓ^i_jk = g^jk X^i_,jk + Γ^i_,l X^l − X^i_,l Γ^l + factor·Γ^i.
    """
    if connection is None:
        connection = christoffel(g)
    factor = as_expr(factor)
    _check_factor(X, g, factor)
    xs = g.coordinates
    n = g.dimension
    lhs = contracted_lie_connection(X, g, connection)
    gam = connection.contracted
    residuals = []
    for i in range(n):
        rhs = (
            sum(g.upper[j, k] * sp.diff(X[i], xs[j], xs[k])
                for j in range(n) for k in range(n))
            + X.apply(gam[i])
            - sum(sp.diff(X[i], xs[l]) * gam[l] for l in range(n))
            + factor * gam[i]
        )
        residuals.append(canonical(lhs[i] - rhs))
    return tuple(residuals)


def _check_factor(X: VectorField, g: MetricField, factor: Expr) -> None:
    lx = lie_derivative_metric(X, g)
    n = g.dimension
    for i in range(n):
        for j in range(n):
            if not is_zero(lx[i, j] - factor * g.lower[i, j]):
                raise PreconditionError(
                    f'L_X g is not {to_text(factor)} times the metric'
                )


def contracted_trace_check(
    X: VectorField,
    g: MetricField,
    factor,
    connection: Optional[Connection] = None,
) -> bool:
    """g^jk L_XΓ^i_jk = ((2 − n)/2) factor^{,i} for L_X g = factor·g.

    Raises:
        PreconditionError: L_X g is not factor times g
    """
    if connection is None:
        connection = christoffel(g)
    factor = as_expr(factor)
    _check_factor(X, g, factor)
    n = g.dimension
    lhs = contracted_lie_connection(X, g, connection)
    grad = g.gradient(factor)
    return all(
        is_zero(lhs[i] - sp.Rational(2 - n, 2) * grad[i]) for i in range(n)
    )


def potential_factor(
    S,
    g: MetricField,
    connection: Optional[Connection] = None,
) -> Optional[Expr]:
    """Constant ψ with S_;ij = ψ g_ij, or None.

    S^{,i} is then a gradient KV (ψ = 0) or HV of g.
    """
    if connection is None:
        connection = christoffel(g)
    hessian = covariant_hessian(as_expr(S), connection)
    n = g.dimension
    psi = None
    for i in range(n):
        if not is_zero(g.lower[i, i]):
            psi = canonical(hessian[i, i] / g.lower[i, i])
            break
    if psi is None or not _is_constant(psi, g.coordinates):
        return None
    for i in range(n):
        for j in range(n):
            if not is_zero(hessian[i, j] - psi * g.lower[i, j]):
                return None
    return psi
