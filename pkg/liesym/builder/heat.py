"""Lie point symmetries of the heat equation with flux

    g^ij u_ij − Γ^i u_i − u_t = q(t, x, u)

built from the homothetic algebra of g.

A nongradient KV or HV Y gives

    X = (2c₂ψt + c₁) ∂_t + c₂ Y^i ∂_i + (a(t) u + b(t, x)) ∂_u

and a gradient KV or HV with potential S gives

    X = (2ψ ∫T dt + c₁) ∂_t + T S^{,i} ∂_i + ((−½ T_,t S + F(t)) u + b) ∂_u.

Each builder returns the generator together with the single residual that
must still vanish; the other determining equations hold by construction.
HVs are rescaled to ψ = 1 on the way in.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Sequence, Tuple

import pandas as pd
import sympy as sp

from liesym.errors import InvariantViolation, PreconditionError
from liesym.geometry.collineations import (
    conformal_factor,
    gradient_test,
    potential_factor,
)
from liesym.geometry.tensors import MetricField, VectorField, christoffel
from liesym.prolongation.pde import GeneratorPDE, PDEProblem, verify_symmetry
from liesym.solver.homothetic import AlgebraBasis, AlgebraElement
from liesym.solver.linalg import homogeneous_system, nullspace
from liesym.symexpr import Expr, as_expr, canonical, is_zero, to_text
from liesym.symexpr.kernel import declare_function
from liesym.symexpr.registry import REGISTRY
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)

CASE_NONGRADIENT = 'nongradient'
CASE_GRADIENT = 'gradient'

QU_ROWS = ('linear', 'power', 'ulogu', 'exp')


@dataclass(frozen=True)
class HeatSymmetry:
    """A heat equation generator with its remaining constraint.

    Attributes:
        case (str): construction used, e.g. 'nongradient' or 'gradient'.
        source (str): algebra element the generator comes from.
        generator (GeneratorPDE): X on (t, x, u).
        residual (Expr): constraint that must vanish for X to be admitted.
        functions (Tuple[Expr, ...]): opaque functions left free in X.
        side_conditions (Tuple[Expr, ...]): conditions on free functions
            that are not part of the residual, e.g. H(b) = 0.
        psi (Expr): ψ of the element after rescaling.
        original_psi (Expr): ψ of the element as supplied.
    """
    case: str
    source: str
    generator: GeneratorPDE
    residual: Expr
    functions: Tuple[Expr, ...] = ()
    side_conditions: Tuple[Expr, ...] = ()
    psi: Expr = sp.Integer(0)
    original_psi: Expr = sp.Integer(0)

    @property
    def admitted(self) -> bool:
        return is_zero(self.residual)

    def apply(self, mapping: Dict) -> 'HeatSymmetry':
        """Substitute concrete choices for free functions and constants."""
        return replace(
            self,
            generator=self.generator.substitute(mapping),
            residual=canonical(self.residual.subs(mapping).doit()),
            functions=tuple(f for f in self.functions if f not in mapping),
            side_conditions=tuple(
                canonical(c.subs(mapping).doit())
                for c in self.side_conditions
            ),
        )

    def to_json(self) -> dict:
        return {
            'case': self.case,
            'source': self.source,
            'generator': self.generator.to_json(),
            'residual': to_text(self.residual),
            'functions': [to_text(f) for f in self.functions],
            'side_conditions': [to_text(c) for c in self.side_conditions],
            'psi': to_text(self.psi),
            'original_psi': to_text(self.original_psi),
            'admitted': self.admitted,
        }


@dataclass
class HeatAlgebra:
    """Named generators of a heat equation.

    A generator b(t, x) ∂_u with H(b) = q_u b stands for the infinite
    family of solution symmetries and is counted once.
    """
    problem: PDEProblem
    symmetries: List[Tuple[str, HeatSymmetry]] = field(default_factory=list)
    description: str = ''

    @property
    def dimension(self) -> int:
        return len(self.symmetries)

    def generators(self) -> List[GeneratorPDE]:
        return [s.generator for _, s in self.symmetries]

    def __getitem__(self, name: str) -> HeatSymmetry:
        for key, symmetry in self.symmetries:
            if key == name:
                return symmetry
        raise KeyError(name)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    'name': name,
                    'case': s.case,
                    'source': s.source,
                    'generator': str(s.generator),
                    'side_conditions': '; '.join(
                        f'{to_text(c)} = 0' for c in s.side_conditions
                    ),
                }
                for name, s in self.symmetries
            ],
            columns=['name', 'case', 'source', 'generator',
                     'side_conditions'],
        )

    def to_json(self) -> dict:
        return {
            'description': self.description,
            'problem': self.problem.to_json(),
            'dimension': self.dimension,
            'symmetries': [
                dict(name=name, **s.to_json())
                for name, s in self.symmetries
            ],
        }


def heat_operator(metric: MetricField, f, time: sp.Symbol) -> Expr:
    """H(f) = g^ij f_,ij − Γ^i f_,i − f_,t for f(t, x)."""
    f = as_expr(f)
    xs = metric.coordinates
    n = metric.dimension
    gam = christoffel(metric).contracted
    return (
        sum(metric.upper[i, j] * sp.diff(f, xs[i], xs[j])
            for i in range(n) for j in range(n))
        - sum(gam[i] * sp.diff(f, xs[i]) for i in range(n))
        - sp.diff(f, time)
    )


def heat_residual(
    metric: MetricField,
    q,
    xi_t,
    xi: Sequence,
    a,
    b,
    time: sp.Symbol,
    u: sp.Symbol,
) -> Expr:
    """Constraint left for X = ξ^t ∂_t + ξ^i ∂_i + (a u + b) ∂_u.

    H(a) u + H(b) + (a − ξ^t_,t) q − ξ^t q_,t − ξ^i q_,i − (a u + b) q_,u
    """
    q, xi_t, a, b = (as_expr(e) for e in (q, xi_t, a, b))
    xs = metric.coordinates
    residual = (
        heat_operator(metric, a, time) * u
        + heat_operator(metric, b, time)
        + (a - sp.diff(xi_t, time)) * q
        - xi_t * sp.diff(q, time)
        - sum(as_expr(c) * sp.diff(q, x) for c, x in zip(xi, xs))
        - (a * u + b) * sp.diff(q, u)
    )
    return canonical(residual.doit())


def heat_problem(metric: MetricField, q=None, time: str = 't',
                 dependent: str = 'u') -> PDEProblem:
    return PDEProblem.heat(metric, q, time, dependent)


def _default_q(metric: MetricField, q, t: sp.Symbol, u: sp.Symbol) -> Expr:
    if q is None:
        return declare_function('q', (t,) + metric.coordinates + (u,))
    return as_expr(q)


def _homothetic_psi(Y: VectorField, g: MetricField) -> Expr:
    psi = conformal_factor(Y, g)
    if psi is None or any(not is_zero(sp.diff(psi, x))
                          for x in g.coordinates):
        raise PreconditionError(f'{Y} is not a KV or HV of the metric')
    return psi


def heat_symmetry_nongradient(
    metric: MetricField,
    Y: VectorField,
    q=None,
    source: str = 'Y',
    time: str = 't',
    dependent: str = 'u',
) -> HeatSymmetry:
    """Generator built from a nongradient KV or HV Y.

    Raises:
        PreconditionError: Y is not a KV or HV, or Y is a gradient
    """
    original = _homothetic_psi(Y, metric)
    if gradient_test(Y, metric).closed:
        raise PreconditionError(
            f'{source} is a gradient; use the gradient construction'
        )
    psi = original
    if not is_zero(psi):
        Y, psi = Y.scale(1 / psi), sp.Integer(1)
    t, u = REGISTRY.symbol(time), REGISTRY.symbol(dependent)
    q = _default_q(metric, q, t, u)
    c1, c2 = REGISTRY.symbols(('c1', 'c2'))
    a = declare_function('a', (t,))
    b = declare_function('b', (t,) + metric.coordinates)
    xi_t = 2 * c2 * psi * t + c1
    xi = [c2 * c for c in Y.components]
    X = GeneratorPDE.create(
        (t,) + metric.coordinates, [xi_t] + xi, a * u + b,
        dependent=dependent, constants=('c1', 'c2'),
    )
    residual = heat_residual(metric, q, xi_t, xi, a, b, t, u)
    return HeatSymmetry(
        CASE_NONGRADIENT, source, X, residual, (a, b), (), psi, original
    )


def heat_symmetry_gradient(
    metric: MetricField,
    S,
    q=None,
    source: str = 'S',
    time: str = 't',
    dependent: str = 'u',
) -> HeatSymmetry:
    """Generator built from a gradient KV or HV with potential S.

    T(t), F(t) and b(t, x) are left opaque; apply() substitutes choices.

    Raises:
        PreconditionError: S_;ij is not a constant multiple of g_ij
    """
    S = as_expr(S)
    original = potential_factor(S, metric)
    if original is None:
        raise PreconditionError(
            f'{to_text(S)} is not the potential of a gradient KV or HV'
        )
    psi = original
    if not is_zero(psi):
        S, psi = canonical(S / psi), sp.Integer(1)
    t, u = REGISTRY.symbol(time), REGISTRY.symbol(dependent)
    q = _default_q(metric, q, t, u)
    c1 = REGISTRY.symbol('c1')
    T = declare_function('T', (t,))
    F = declare_function('F', (t,))
    b = declare_function('b', (t,) + metric.coordinates)
    xi_t = 2 * psi * sp.Integral(T, t) + c1
    xi = [T * c for c in metric.gradient(S)]
    a = -sp.diff(T, t) * S / 2 + F
    X = GeneratorPDE.create(
        (t,) + metric.coordinates, [xi_t] + xi, a * u + b,
        dependent=dependent, constants=('c1',),
    )
    residual = heat_residual(metric, q, xi_t, xi, a, b, t, u)
    return HeatSymmetry(
        CASE_GRADIENT, source, X, residual, (T, F, b), (), psi, original
    )


def _normalized(element: AlgebraElement) -> Tuple[VectorField, Expr, Expr]:
    """Vector and potential with ψ = 1 for HVs, and the original ψ."""
    c = element.classification
    psi = c.psi if c.psi is not None else sp.Integer(0)
    vector, potential = element.vector, c.potential
    if not is_zero(psi):
        vector = vector.scale(1 / psi)
        if potential is not None:
            potential = canonical(potential / psi)
    return vector, potential, psi


def _concrete(
    case: str,
    source: str,
    metric: MetricField,
    q: Expr,
    xi_t,
    xi: Sequence,
    a,
    b,
    t: sp.Symbol,
    u: sp.Symbol,
    psi=sp.Integer(0),
    original=sp.Integer(0),
) -> HeatSymmetry:
    X = GeneratorPDE.create((t,) + metric.coordinates, [xi_t] + list(xi),
                            as_expr(a) * u + as_expr(b), dependent=str(u))
    residual = heat_residual(metric, q, xi_t, xi, a, b, t, u)
    return HeatSymmetry(case, source, X, residual, psi=psi,
                        original_psi=original)


def _solution_symmetry(metric: MetricField, q: Expr, t: sp.Symbol,
                       u: sp.Symbol) -> HeatSymmetry:
    """b(t, x) ∂_u with H(b) = q_,u b, q linear in u."""
    b = declare_function('b', (t,) + metric.coordinates)
    condition = canonical(heat_operator(metric, b, t) - sp.diff(q, u) * b)
    X = GeneratorPDE.create((t,) + metric.coordinates,
                            [0] * (metric.dimension + 1), b,
                            dependent=str(u))
    return HeatSymmetry('solution', 'b', X, sp.Integer(0), (b,),
                        (condition,))


def _check_admitted(algebra: HeatAlgebra) -> HeatAlgebra:
    for name, symmetry in algebra.symmetries:
        if not symmetry.admitted:
            raise InvariantViolation(
                f'{name} = {symmetry.generator} leaves residual '
                f'{to_text(symmetry.residual)}'
            )
    return algebra


def linear_heat_algebra(
    algebra: AlgebraBasis,
    time: str = 't',
    dependent: str = 'u',
) -> HeatAlgebra:
    """Generators of g^ij u_ij − Γ^i u_i − u_t = 0.

    ∂_t, u ∂_u and b ∂_u, one generator per nongradient element, and two
    per gradient element from T = 1 and T = t.
    """
    g = algebra.metric
    t, u = REGISTRY.symbol(time), REGISTRY.symbol(dependent)
    n = g.dimension
    q = sp.Integer(0)
    zero = [sp.Integer(0)] * n
    symmetries = [
        ('D_t', _concrete('time', 'D_t', g, q, 1, zero, 0, 0, t, u)),
        ('U', _concrete('scaling', 'U', g, q, 0, zero, 1, 0, t, u)),
    ]
    for element in algebra.nongradient_elements():
        Y, _, original = _normalized(element)
        psi = sp.Integer(0) if is_zero(original) else sp.Integer(1)
        symmetries.append((element.name, _concrete(
            CASE_NONGRADIENT, element.name, g, q, 2 * psi * t,
            Y.components, 0, 0, t, u, psi, original,
        )))
    for element in algebra.gradient_elements():
        Y, S, original = _normalized(element)
        psi = sp.Integer(0) if is_zero(original) else sp.Integer(1)
        symmetries.append((element.name, _concrete(
            CASE_GRADIENT, element.name, g, q, 2 * psi * t,
            Y.components, 0, 0, t, u, psi, original,
        )))
        a = -S / 2 - sp.Rational(n, 2) * psi * t
        symmetries.append((f'{element.name}t', _concrete(
            CASE_GRADIENT, element.name, g, q, psi * t**2,
            [t * c for c in Y.components], a, 0, t, u, psi, original,
        )))
    symmetries.append(('B', _solution_symmetry(g, q, t, u)))
    result = HeatAlgebra(
        heat_problem(g, q, time, dependent), symmetries,
        f'heat equation without flux on {algebra.description or "metric"}',
    )
    LOG.info(f'linear heat algebra of dimension {result.dimension}')
    return _check_admitted(result)


def flat_heat_algebra(n: int, time: str = 't') -> HeatAlgebra:
    """δ^ij u_ij − u_t = 0, of dimension ½n(n + 3) + 5 counting b ∂_u
    once."""
    from liesym.solver.catalogs import euclidean_catalog

    return linear_heat_algebra(euclidean_catalog(n), time)


def qu_table(
    algebra: AlgebraBasis,
    row: str,
    q0='q0',
    power='n',
    time: str = 't',
    dependent: str = 'u',
) -> HeatAlgebra:
    """Closed form generators for q(u) in {q₀u, q₀uⁿ, u ln u, eᵘ}.

    Args:
        algebra (AlgebraBasis): homothetic algebra of the metric
        row (str): 'linear', 'power', 'ulogu' or 'exp'
        q0: coefficient of the linear and power rows
        power: exponent of the power row, not 0 or 1

    Raises:
        PreconditionError: unknown row or excluded exponent
        InvariantViolation: a generator leaves a nonzero residual
    """
    if row not in QU_ROWS:
        raise PreconditionError(
            f'unknown q(u) row {row!r}, expected one of {QU_ROWS}'
        )
    g = algebra.metric
    n = g.dimension
    t, u = REGISTRY.symbol(time), REGISTRY.symbol(dependent)
    q0 = REGISTRY.symbol(q0) if isinstance(q0, str) else as_expr(q0)
    zero = [sp.Integer(0)] * n
    if row == 'linear':
        q = q0 * u
    elif row == 'power':
        power = (REGISTRY.symbol(power) if isinstance(power, str)
                 else as_expr(power))
        if power in (0, 1):
            raise PreconditionError('the power row excludes n = 0 and n = 1')
        q = q0 * u**power
    elif row == 'ulogu':
        q = u * sp.log(u)
    else:
        q = sp.exp(u)
    symmetries = [('D_t', _concrete('time', 'D_t', g, q, 1, zero, 0, 0, t, u))]
    elements = algebra.homothetic_algebra()
    gradients = {e.name for e in algebra.gradient_elements()}

    for element in elements:
        Y, S, original = _normalized(element)
        psi = sp.Integer(0) if is_zero(original) else sp.Integer(1)
        name = element.name
        if row == 'linear':
            symmetries.append((name, _concrete(
                row, name, g, q, 2 * psi * t, Y.components,
                -2 * psi * q0 * t, 0, t, u, psi, original,
            )))
            if name in gradients:
                a = -S / 2 - psi * q0 * t**2 - sp.Rational(n, 2) * psi * t
                symmetries.append((f'{name}t', _concrete(
                    row, name, g, q, psi * t**2,
                    [t * c for c in Y.components], a, 0, t, u, psi, original,
                )))
        elif row == 'power':
            symmetries.append((name, _concrete(
                row, name, g, q, 2 * psi * t, Y.components,
                2 * psi / (1 - power), 0, t, u, psi, original,
            )))
        elif row == 'ulogu':
            if psi != 0:
                LOG.debug(f'{name} is an HV, not admitted for u ln u')
                continue
            symmetries.append((name, _concrete(
                row, name, g, q, 0, Y.components, 0, 0, t, u, psi, original,
            )))
            if name in gradients:
                symmetries.append((f'{name}e', _concrete(
                    row, name, g, q, 0,
                    [sp.exp(-t) * c for c in Y.components],
                    S * sp.exp(-t) / 2, 0, t, u, psi, original,
                )))
        else:
            symmetries.append((name, _concrete(
                row, name, g, q, 2 * psi * t, Y.components, 0, -2 * psi,
                t, u, psi, original,
            )))
    if row == 'linear':
        symmetries.append(
            ('U', _concrete(row, 'U', g, q, 0, zero, 1, 0, t, u))
        )
        symmetries.append(('B', _solution_symmetry(g, q, t, u)))
    elif row == 'ulogu':
        symmetries.append(('U', _concrete(
            row, 'U', g, q, 0, zero, sp.exp(-t), 0, t, u,
        )))
    result = HeatAlgebra(
        heat_problem(g, q, time, dependent), symmetries,
        f'heat equation with q = {to_text(q)}',
    )
    return _check_admitted(result)


def _time_basis(ansatz: str, t: sp.Symbol) -> List[Expr]:
    """Functions of t spanning T(t) and a(t); the first one is 1."""
    if ansatz == 'exp':
        return [sp.Integer(1), sp.exp(t), sp.exp(-t)]
    if ansatz.startswith('poly:'):
        try:
            degree = int(ansatz.split(':', 1)[1])
        except ValueError:
            raise PreconditionError(f'bad ansatz {ansatz!r}')
        if degree < 0:
            raise PreconditionError(f'bad ansatz {ansatz!r}')
        return [t**k for k in range(degree + 1)]
    raise PreconditionError(
        f'unknown ansatz {ansatz!r}, expected poly:<d> or exp'
    )


def solve_heat_ansatz(
    algebra: AlgebraBasis,
    q,
    ansatz: str = 'poly:2',
    time: str = 't',
    dependent: str = 'u',
    check: bool = True,
) -> HeatAlgebra:
    """Generators for a concrete q with T(t) and a(t) in a finite span.

    The unknowns are c₁, a constant b, one constant c per KV or HV,
    the coefficients of a(t), and for each gradient element the
    coefficients of a nonconstant T(t). The residual is split over
    (t, x, u) and the nullspace of the resulting system gives the basis.

    Raises:
        InvariantViolation: check is set and an emitted generator fails
            the full determining system
    """
    g = algebra.metric
    n = g.dimension
    xs = g.coordinates
    t, u = REGISTRY.symbol(time), REGISTRY.symbol(dependent)
    q = as_expr(q)
    basis = _time_basis(ansatz, t)
    unknowns = []

    def unknown(name):
        symbol = sp.Dummy(name)
        unknowns.append(symbol)
        return symbol

    xi_t = unknown('c1')
    b = unknown('b')
    xi = [sp.Integer(0)] * n
    a = sp.Integer(0)
    for k, phi in enumerate(basis):
        a += unknown(f'a{k}') * phi
    for element in algebra.homothetic_algebra():
        Y, _, original = _normalized(element)
        psi = sp.Integer(0) if is_zero(original) else sp.Integer(1)
        c = unknown(f'c_{element.name}')
        xi_t += 2 * c * psi * t
        xi = [x + c * y for x, y in zip(xi, Y.components)]
    for element in algebra.gradient_elements():
        Y, S, original = _normalized(element)
        psi = sp.Integer(0) if is_zero(original) else sp.Integer(1)
        T = sp.Integer(0)
        for k, phi in enumerate(basis[1:], start=1):
            T += unknown(f'T{k}_{element.name}') * phi
        xi_t += 2 * psi * sp.integrate(T, t)
        xi = [x + T * y for x, y in zip(xi, Y.components)]
        a += -sp.diff(T, t) * S / 2
    residual = heat_residual(g, q, xi_t, xi, a, b, t, u)
    matrix = homogeneous_system([residual], unknowns, (t,) + xs + (u,))
    vectors = nullspace(matrix)
    LOG.info(
        f'heat ansatz {ansatz}: {len(unknowns)} unknowns, '
        f'{len(vectors)} generators'
    )
    problem = heat_problem(g, q, time, dependent)
    symmetries = []
    for k, vector in enumerate(vectors):
        values = dict(zip(unknowns, vector))

        def sub(e, values=values):
            return canonical(as_expr(e).xreplace(values))

        symmetry = _concrete(
            f'ansatz:{ansatz}', 'solved', g, q, sub(xi_t),
            [sub(x) for x in xi], sub(a), sub(b), t, u,
        )
        if check and not verify_symmetry(problem, symmetry.generator) \
                .is_symmetry:
            raise InvariantViolation(
                f'{symmetry.generator} is not a symmetry of the heat equation'
            )
        symmetries.append((f'G{k + 1}', symmetry))
    return HeatAlgebra(problem, symmetries,
                       f'heat equation with q = {to_text(q)}, ansatz {ansatz}')


def heat_symmetries(
    algebra: AlgebraBasis,
    q=None,
    time: str = 't',
    dependent: str = 'u',
) -> List[HeatSymmetry]:
    """Symbolic generator of each homothetic element for a general q."""
    g = algebra.metric
    result = []
    for element in algebra.nongradient_elements():
        result.append(heat_symmetry_nongradient(
            g, element.vector, q, element.name, time, dependent
        ))
    for element in algebra.gradient_elements():
        result.append(heat_symmetry_gradient(
            g, element.classification.potential, q, element.name, time,
            dependent,
        ))
    return result
