"""Lie symmetry conditions of second order ODE systems

    ẍ^i + Γ^i_jk ẋ^j ẋ^k + Σ_m P^i_{j1..jm} ẋ^j1..ẋ^jm = 0.

Forces sit on the left hand side, so a potential enters as F^i = V^{,i}.
"""
from dataclasses import dataclass, field
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from liesym.errors import PreconditionError
from liesym.geometry.tensors import (
    Connection,
    VectorField,
    lie_derivative_connection,
)
from liesym.prolongation.jet import VelocitySpace
from liesym.prolongation.system import DeterminingSystem
from liesym.symexpr import Expr, as_expr, canonical, collect_monomials, to_text
from liesym.symexpr.registry import REGISTRY
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)


@dataclass(frozen=True)
class GeneratorODE:
    """X = ξ(t, x) ∂_t + η^i(t, x) ∂_i."""
    time: sp.Symbol
    coordinates: Tuple[sp.Symbol, ...]
    xi: Expr
    eta: Tuple[Expr, ...]
    constants: Tuple[sp.Symbol, ...] = ()

    def __post_init__(self) -> None:
        if len(self.eta) != len(self.coordinates):
            raise PreconditionError(
                f'{len(self.eta)} components of eta for '
                f'{len(self.coordinates)} coordinates'
            )

    @classmethod
    def create(
        cls,
        time: sp.Symbol,
        coordinates: Sequence[sp.Symbol],
        xi,
        eta: Sequence,
        constants: Sequence[str] = (),
    ) -> 'GeneratorODE':
        return cls(
            time,
            tuple(coordinates),
            canonical(as_expr(xi)),
            tuple(canonical(as_expr(e)) for e in eta),
            REGISTRY.symbols(constants),
        )

    def spatial(self) -> VectorField:
        """η as a t dependent vector field on the configuration space."""
        return VectorField(self.coordinates, self.eta)

    def __str__(self) -> str:
        terms = []
        if self.xi != 0:
            terms.append(f'({to_text(self.xi)})*D_{self.time}')
        for c, x in zip(self.eta, self.coordinates):
            if c != 0:
                terms.append(f'({to_text(c)})*D_{x}')
        return ' + '.join(terms) if terms else '0'

    def to_json(self) -> dict:
        result = {str(self.time): to_text(self.xi)}
        result.update({
            str(x): to_text(c) for x, c in zip(self.coordinates, self.eta)
        })
        return result


@dataclass(frozen=True)
class ForceTensor:
    """P^i_{j1..jm}, symmetric in the lower indices.

    Attributes:
        order (int): number of lower indices m.
        components (Dict[Tuple[int, ...], Expr]): keys (i, j1, .., jm) with
            j1 <= .. <= jm; missing keys are zero.
    """
    order: int
    components: Dict[Tuple[int, ...], Expr] = field(default_factory=dict)

    @classmethod
    def from_vector(cls, F: Sequence) -> 'ForceTensor':
        """m = 0 force F^i."""
        return cls(0, {(i,): canonical(as_expr(c)) for i, c in enumerate(F)})

    @classmethod
    def isotropic(cls, n: int, k, order: int = 1) -> 'ForceTensor':
        """P^i_j = k δ^i_j, a linear drag for order 1."""
        if order != 1:
            raise PreconditionError('isotropic forces have order 1')
        k = as_expr(k)
        return cls(1, {(i, i): k for i in range(n)})

    @classmethod
    def from_components(cls, order: int, components: Dict) -> 'ForceTensor':
        normalised = {}
        for key, value in components.items():
            key = tuple(key)
            if len(key) != order + 1:
                raise PreconditionError(
                    f'force component {key} needs {order + 1} indices'
                )
            lower = tuple(sorted(key[1:]))
            normalised[(key[0],) + lower] = canonical(as_expr(value))
        return cls(order, normalised)

    def contract(self, velocities: Sequence[sp.Symbol]) -> Tuple[Expr, ...]:
        """Σ_J P^i_J ẋ^J per component i, summing over all index orders."""
        n = len(velocities)
        result = [sp.Integer(0)] * n
        for key, value in self.components.items():
            i, lower = key[0], key[1:]
            counts = [lower.count(j) for j in set(lower)]
            orderings = factorial(len(lower))
            for c in counts:
                orderings //= factorial(c)
            monomial = sp.Mul(*[velocities[j] for j in lower])
            result[i] += orderings * value * monomial
        return tuple(result)


def _forces_vector(
    forces: Sequence[ForceTensor],
    velocities: Sequence[sp.Symbol],
) -> Tuple[Expr, ...]:
    n = len(velocities)
    total = [sp.Integer(0)] * n
    for force in forces:
        for i, value in enumerate(force.contract(velocities)):
            total[i] += value
    return tuple(total)


def ode_rhs(
    connection: Connection,
    forces: Sequence[ForceTensor],
    velocities: Sequence[sp.Symbol],
) -> Tuple[Expr, ...]:
    """W^i with ẍ^i + W^i = 0."""
    n = connection.dimension
    extra = _forces_vector(forces, velocities)
    return tuple(
        sum(connection[i, j, k] * velocities[j] * velocities[k]
            for j in range(n) for k in range(n)) + extra[i]
        for i in range(n)
    )


def _degree_tag(degree: int) -> str:
    return f'velocity{degree}'


def symmetry_condition(
    connection: Connection,
    forces: Sequence[ForceTensor],
    X: GeneratorODE,
) -> Tuple[VelocitySpace, Tuple[Expr, ...]]:
    """C^i = η^i[2] + X^[1](W^i) on ẍ = −W, as polynomials in ẋ."""
    if X.coordinates != connection.coordinates:
        raise PreconditionError('generator and connection coordinates differ')
    space = VelocitySpace.create(X.time, X.coordinates)
    n = space.dimension
    v = space.velocities
    W = ode_rhs(connection, forces, v)
    Dxi = space.total_derivative(X.xi)
    eta1 = [
        space.total_derivative(X.eta[i]) - v[i] * Dxi for i in range(n)
    ]
    eta2 = [
        space.total_derivative(eta1[i]) - space.accelerations[i] * Dxi
        for i in range(n)
    ]
    shell = [-w for w in W]
    conditions = []
    for i in range(n):
        action = X.xi * sp.diff(W[i], X.time)
        action += sum(X.eta[k] * sp.diff(W[i], X.coordinates[k])
                      for k in range(n))
        action += sum(eta1[k] * sp.diff(W[i], v[k]) for k in range(n))
        condition = space.on_shell(eta2[i], shell) + action
        conditions.append(sp.expand(space.on_shell(condition, shell)))
    return space, tuple(conditions)


def determining_ode(
    connection: Connection,
    forces: Sequence[ForceTensor],
    X: GeneratorODE,
) -> DeterminingSystem:
    """Split the Lie symmetry condition of the ODE system by velocity
    monomials.

    Args:
        connection (Connection): symmetric connection Γ^i_jk
        forces (Sequence[ForceTensor]): terms P^i_{j1..jm} of any order m
        X (GeneratorODE): generator

    Returns:
        DeterminingSystem: coefficient of each velocity monomial per
            component i, tagged velocity0, velocity1, ... by total degree
    """
    space, conditions = symmetry_condition(connection, forces, X)
    system = DeterminingSystem(unknowns=(X.xi,) + X.eta)
    for i, condition in enumerate(conditions):
        collected = collect_monomials(condition, space.velocities)
        for monomial, value in sorted(
            collected.items(),
            key=lambda item: (sp.Poly(item[0], *space.velocities)
                              .total_degree(), sp.default_sort_key(item[0])),
        ):
            degree = sp.Poly(monomial, *space.velocities).total_degree()
            system.add(_degree_tag(degree), value, monomial, (i,))
    LOG.info(f'ODE determining system: {len(system)} equations')
    return system


def homogeneous_part(
    condition: Expr,
    velocities: Sequence[sp.Symbol],
    degree: int,
) -> Expr:
    """Sum of the terms of the given total degree in the velocities."""
    collected = collect_monomials(condition, velocities)
    return sp.expand(sum(
        m * c for m, c in collected.items()
        if sp.Poly(m, *velocities).total_degree() == degree
    ))


def force_condition(X: GeneratorODE, F: Sequence[Expr]) -> Tuple[Expr, ...]:
    """η^i_,tt + L_ηF^i + 2ξ_,t F^i + ξ F^i_,t."""
    t, xs, n = X.time, X.coordinates, len(X.coordinates)
    result = []
    for i in range(n):
        lie = sum(
            X.eta[k] * sp.diff(F[i], xs[k]) - F[k] * sp.diff(X.eta[i], xs[k])
            for k in range(n)
        )
        result.append(canonical(
            sp.diff(X.eta[i], t, 2) + lie
            + 2 * sp.diff(X.xi, t) * F[i] + X.xi * sp.diff(F[i], t)
        ))
    return tuple(result)


def velocity_condition(
    X: GeneratorODE,
    F: Sequence[Expr],
    connection: Connection,
) -> Tuple[Tuple[Expr, ...], ...]:
    """Coefficient of ẋ^j in component i.

    −δ^i_j ξ_,tt + (ξ_,k δ^i_j + 2ξ_,j δ^i_k) F^k + 2η^i_,tj
    + 2Γ^i_jk η^k_,t.
    """
    t, xs, n = X.time, X.coordinates, len(X.coordinates)
    result = []
    for i in range(n):
        row = []
        for j in range(n):
            delta = 1 if i == j else 0
            value = (
                -delta * sp.diff(X.xi, t, 2)
                + delta * sum(sp.diff(X.xi, xs[k]) * F[k] for k in range(n))
                + 2 * sp.diff(X.xi, xs[j]) * F[i]
                + 2 * sp.diff(X.eta[i], t, xs[j])
                + 2 * sum(connection[i, j, k] * sp.diff(X.eta[k], t)
                          for k in range(n))
            )
            row.append(canonical(value))
        result.append(tuple(row))
    return tuple(result)


def projective_condition(X: GeneratorODE, connection: Connection) -> sp.ImmutableDenseNDimArray:
    """L_ηΓ^i_ab − (ξ_,ta δ^i_b + ξ_,tb δ^i_a)."""
    t, xs, n = X.time, X.coordinates, len(X.coordinates)
    lie = lie_derivative_connection(X.spatial(), connection)
    entries = []
    for i in range(n):
        block = []
        for a in range(n):
            row = []
            for b in range(n):
                value = lie[i, a, b]
                if i == b:
                    value -= sp.diff(X.xi, t, xs[a])
                if i == a:
                    value -= sp.diff(X.xi, t, xs[b])
                row.append(canonical(value))
            block.append(row)
        entries.append(block)
    return sp.ImmutableDenseNDimArray(entries)


def gradient_condition(X: GeneratorODE, connection: Connection) -> sp.ImmutableMatrix:
    """ξ_;ab, the cubic condition being −ẋ^i ξ_;ab ẋ^a ẋ^b."""
    xs, n = X.coordinates, len(X.coordinates)
    entries = []
    for a in range(n):
        for b in range(n):
            value = sp.diff(X.xi, xs[a], xs[b]) - sum(
                connection[k, a, b] * sp.diff(X.xi, xs[k]) for k in range(n)
            )
            entries.append(canonical(value))
    return sp.ImmutableMatrix(n, n, entries)


def force_term_condition(
    X: GeneratorODE,
    force: ForceTensor,
) -> Dict[int, Tuple[Expr, ...]]:
    """Contribution of one force term Q^i = P^i_J ẋ^J of order m to the
    condition, by velocity degree.

    degree m:     ξ P^i_J,t + (L_ηP)^i_J + (2 − m) ξ_,t P^i_J
    degree m + 1: (2 − m) ξ_,l ẋ^l Q^i + ẋ^i ξ_,k Q^k
    degree m − 1: m η^k_,t P^i_{kJ'}

    (L_ηP)^i_J carries one η^k_,j term per lower index, and every entry is
    contracted with the velocities.

    Args:
        X (GeneratorODE): generator
        force (ForceTensor): P^i_{j1..jm}

    Returns:
        Dict[int, Tuple[Expr, ...]]: velocity degree to one polynomial per
            component i
    """
    t, xs, n = X.time, X.coordinates, len(X.coordinates)
    m = force.order
    v = VelocitySpace.create(t, xs).velocities
    Q = force.contract(v)
    xi_t = sp.diff(X.xi, t)
    xi_v = sum(sp.diff(X.xi, xs[l]) * v[l] for l in range(n))
    xi_Q = sum(sp.diff(X.xi, xs[k]) * Q[k] for k in range(n))
    same, above, below = [], [], []
    for i in range(n):
        lie = sum(
            X.eta[k] * sp.diff(Q[i], xs[k]) - Q[k] * sp.diff(X.eta[i], xs[k])
            + sum(sp.diff(X.eta[k], xs[l]) * v[l] for l in range(n))
            * sp.diff(Q[i], v[k])
            for k in range(n)
        )
        same.append(sp.expand(
            X.xi * sp.diff(Q[i], t) + lie + (2 - m) * xi_t * Q[i]
        ))
        above.append(sp.expand((2 - m) * xi_v * Q[i] + v[i] * xi_Q))
        below.append(sp.expand(sum(
            sp.diff(X.eta[k], t) * sp.diff(Q[i], v[k]) for k in range(n)
        )))
    result = {m: tuple(same), m + 1: tuple(above)}
    if m > 0:
        result[m - 1] = tuple(below)
    return result


def closed_form_conditions(
    X: GeneratorODE,
    connection: Connection,
    F: Optional[Sequence[Expr]] = None,
    forces: Sequence[ForceTensor] = (),
) -> List[Tuple[Expr, ...]]:
    """Homogeneous velocity parts of the condition, assembled from the
    closed form conditions.

    Degrees 0 to 3 come from the four conditions for a force F^i(t, x);
    each term of ``forces`` adds its own parts, so the tuples run up to
    degree max(3, m + 1).
    """
    n = len(X.coordinates)
    if F is None:
        F = (sp.Integer(0),) * n
    space = VelocitySpace.create(X.time, X.coordinates)
    v = space.velocities
    c0 = force_condition(X, F)
    c1 = velocity_condition(X, F, connection)
    c2 = projective_condition(X, connection)
    c3 = gradient_condition(X, connection)
    top = max([3] + [force.order + 1 for force in forces])
    parts = []
    for i in range(n):
        parts.append([
            c0[i],
            sp.expand(sum(c1[i][j] * v[j] for j in range(n))),
            sp.expand(sum(c2[i, a, b] * v[a] * v[b]
                          for a in range(n) for b in range(n))),
            sp.expand(-v[i] * sum(c3[a, b] * v[a] * v[b]
                                  for a in range(n) for b in range(n))),
        ] + [sp.Integer(0)] * (top - 3))
    for force in forces:
        for degree, terms in force_term_condition(X, force).items():
            for i in range(n):
                parts[i][degree] = sp.expand(parts[i][degree] + terms[i])
    return [tuple(p) for p in parts]
