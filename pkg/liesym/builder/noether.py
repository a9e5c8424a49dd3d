"""Noether point symmetries of L = ½ g_ij ẋ^i ẋ^j − V(x) from the homothetic
algebra of g.

Case I uses any KV or HV Y: X = 2ψ t ∂_t + Y with gauge G = p t. Case II
uses a gradient KV or HV with potential S: X = 2ψ ∫T dt ∂_t + T S^{,i} ∂_i
with T_,tt = m T and gauge G = T_,t S + p ∫T dt.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import pandas as pd
import sympy as sp

from liesym.errors import InvariantViolation, PreconditionError
from liesym.geometry.collineations import conformal_factor, potential_factor
from liesym.geometry.tensors import MetricField, VectorField, christoffel
from liesym.prolongation.jet import VelocitySpace
from liesym.prolongation.ode import GeneratorODE
from liesym.solver.homothetic import AlgebraBasis
from liesym.solver.linalg import solve_equations
from liesym.symexpr import (
    Expr,
    as_expr,
    canonical,
    independent_coefficients,
    is_zero,
    to_text,
)
from liesym.symexpr.registry import REGISTRY
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)

CASE_TIME = 'time'
CASE_I = 'I'
CASE_II = 'II'


@dataclass
class NoetherResult:
    """Noether symmetry candidate with its gauge function and integral.

    Attributes:
        case (str): 'time', 'I' or 'II'.
        source (str): name of the algebra element used.
        generator (GeneratorODE): X = ξ ∂_t + η^i ∂_i.
        gauge (Expr): G(t, x).
        residual (Expr): constraint that must vanish.
        integral (Expr): first integral I(t, x, ẋ).
        m (Optional[Expr]): T_,tt = m T in Case II.
        T (Optional[Expr]): time factor in Case II.
        p (Expr): gauge constant.
    """
    case: str
    source: str
    generator: GeneratorODE
    gauge: Expr
    residual: Expr
    integral: Expr
    m: Optional[Expr] = None
    T: Optional[Expr] = None
    p: Expr = sp.Integer(0)

    @property
    def admitted(self) -> bool:
        return is_zero(self.residual)

    def to_json(self) -> dict:
        return {
            'case': self.case,
            'source': self.source,
            'generator': self.generator.to_json(),
            'gauge': to_text(self.gauge),
            'residual': to_text(self.residual),
            'integral': to_text(self.integral),
            'm': None if self.m is None else to_text(self.m),
            'T': None if self.T is None else to_text(self.T),
            'admitted': self.admitted,
        }


@dataclass
class NoetherAlgebra:
    """Noether symmetries generated by a homothetic algebra.

    The dimension counts every admitted generator, ∂_t included; the
    Hamiltonian E is the integral of ∂_t.
    """
    results: List[NoetherResult] = field(default_factory=list)
    hamiltonian: Optional[Expr] = None

    def admitted(self) -> List[NoetherResult]:
        return [r for r in self.results if r.admitted]

    @property
    def dimension(self) -> int:
        return len(self.admitted())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    'case': r.case,
                    'source': r.source,
                    'generator': str(r.generator),
                    'gauge': to_text(r.gauge),
                    'integral': to_text(r.integral),
                    'admitted': r.admitted,
                }
                for r in self.results
            ],
            columns=['case', 'source', 'generator', 'gauge', 'integral',
                     'admitted'],
        )

    def to_json(self) -> dict:
        return {
            'dimension': self.dimension,
            'counting': 'the dimension includes the time translation',
            'hamiltonian': (None if self.hamiltonian is None
                            else to_text(self.hamiltonian)),
            'results': [r.to_json() for r in self.results],
        }


def _time(name: str = 't') -> sp.Symbol:
    return REGISTRY.symbol(name)


def energy(g: MetricField, V, space: VelocitySpace) -> Expr:
    """E = ½ g_ij ẋ^i ẋ^j + V."""
    return canonical(g.norm(space.velocities) / 2 + as_expr(V))


def momentum(g: MetricField, Y: Sequence[Expr], space: VelocitySpace) -> Expr:
    """g_ij Y^i ẋ^j."""
    lowered = g.lower_index(Y)
    return canonical(sum(c * v for c, v in zip(lowered, space.velocities)))


def _homothetic_factor(Y: VectorField, g: MetricField) -> Expr:
    psi = conformal_factor(Y, g)
    if psi is None or any(not is_zero(sp.diff(psi, x))
                          for x in g.coordinates):
        raise PreconditionError(f'{Y} is not in the homothetic algebra')
    return psi


def noether_time(g: MetricField, V, time: str = 't') -> NoetherResult:
    """∂_t with the Hamiltonian as integral."""
    t = _time(time)
    space = VelocitySpace.create(t, g.coordinates)
    X = GeneratorODE.create(t, g.coordinates, 1, [0] * g.dimension)
    return NoetherResult(
        CASE_TIME, 'D_t', X, sp.Integer(0), sp.Integer(0),
        energy(g, V, space),
    )


def noether_case1(
    g: MetricField,
    Y: VectorField,
    V,
    psi=None,
    source: str = 'Y',
    time: str = 't',
) -> NoetherResult:
    """Case I generator 2ψ t ∂_t + Y^i ∂_i with G = p t.

    The residual L_Y V + 2ψ V + p fixes p = −(L_Y V + 2ψ V) when that is
    constant; otherwise p stays a symbol and the residual is returned.

    Raises:
        PreconditionError: Y is not a KV or HV of g
    """
    found = _homothetic_factor(Y, g)
    if psi is not None and not is_zero(as_expr(psi) - found):
        raise PreconditionError(f'psi of {source} is {to_text(found)}')
    psi = found
    V = as_expr(V)
    t = _time(time)
    space = VelocitySpace.create(t, g.coordinates)
    base = canonical(Y.apply(V) + 2 * psi * V)
    if all(is_zero(sp.diff(base, x)) for x in g.coordinates):
        p = canonical(-base)
        residual = sp.Integer(0)
    else:
        p = REGISTRY.symbol('p')
        residual = canonical(base + p)
    X = GeneratorODE.create(t, g.coordinates, 2 * psi * t, Y.components)
    integral = canonical(
        2 * psi * t * energy(g, V, space)
        - momentum(g, Y.components, space) + p * t
    )
    return NoetherResult(
        CASE_I, source, X, canonical(p * t), residual, integral, p=p
    )


def time_factors(m: Expr, t: sp.Symbol) -> List[Expr]:
    """Basis of solutions of T_,tt = m T."""
    m = as_expr(m)
    if is_zero(m):
        return [sp.Integer(1), t]
    if m.is_positive:
        root = sp.sqrt(m)
        return [sp.exp(root * t), sp.exp(-root * t)]
    if m.is_negative:
        root = sp.sqrt(-m)
        return [sp.cos(root * t), sp.sin(root * t)]
    raise PreconditionError(f'sign of m = {to_text(m)} is undetermined')


def noether_case2(
    g: MetricField,
    S,
    V,
    psi=None,
    source: str = 'S',
    time: str = 't',
) -> List[NoetherResult]:
    """Case II generators from a gradient KV or HV with potential S.

    L_H V + 2ψ V + m S + p = 0 is solved exactly for the constants m and p,
    H^i = S^{,i}. One result is returned for each basis solution T of
    T_,tt = m T; when no (m, p) exists a single result carries the symbolic
    residual.

    Raises:
        PreconditionError: S_;ij is not a constant multiple of g_ij
    """
    S = as_expr(S)
    V = as_expr(V)
    t = _time(time)
    xs = g.coordinates
    ratio = potential_factor(S, g)
    if ratio is None:
        raise PreconditionError(
            f'{to_text(S)} is not the potential of a gradient KV or HV'
        )
    if psi is not None and not is_zero(as_expr(psi) - ratio):
        raise PreconditionError(f'psi of {source} is {to_text(ratio)}')
    psi = ratio
    H = VectorField.from_components(xs, g.gradient(S))
    space = VelocitySpace.create(t, xs)
    m_sym, p_sym = sp.Dummy('m'), sp.Dummy('p')
    base = canonical(H.apply(V) + 2 * psi * V)
    equations = independent_coefficients(base + m_sym * S + p_sym, xs)
    solution = solve_equations(equations, [m_sym, p_sym])
    if solution is None:
        m, p = REGISTRY.symbol('m'), REGISTRY.symbol('p')
        T = sp.Function('T')(t)
        residual = canonical(base + m * S + p)
        X = GeneratorODE.create(
            t, xs, 2 * psi * sp.Integral(T, t), [T * h for h in H.components]
        )
        LOG.debug(f'Case II from {source}: no constant m, p')
        return [NoetherResult(
            CASE_II, source, X, sp.diff(T, t) * S + p * sp.Integral(T, t),
            residual, sp.Integer(0), m=m, T=T, p=p,
        )]
    m, p = solution[m_sym], solution[p_sym]
    results = []
    for T in time_factors(m, t):
        integral_T = sp.integrate(T, t)
        X = GeneratorODE.create(
            t, xs, 2 * psi * integral_T, [T * h for h in H.components]
        )
        gauge = canonical(sp.diff(T, t) * S + p * integral_T)
        integral = canonical(
            2 * psi * integral_T * energy(g, V, space)
            - T * momentum(g, H.components, space)
            + gauge
        )
        results.append(NoetherResult(
            CASE_II, source, X, gauge, sp.Integer(0), integral,
            m=m, T=T, p=p,
        ))
    return results


def integral_derivative(
    result: NoetherResult,
    g: MetricField,
    V,
) -> Expr:
    """dI/dt along ẍ^i = −Γ^i_jk ẋ^j ẋ^k − V^{,i}."""
    t = result.generator.time
    space = VelocitySpace.create(t, g.coordinates)
    connection = christoffel(g)
    grad = g.gradient(V)
    v = space.velocities
    n = g.dimension
    shell = [
        -sum(connection[i, j, k] * v[j] * v[k]
             for j in range(n) for k in range(n)) - grad[i]
        for i in range(n)
    ]
    derivative = space.total_derivative(result.integral)
    return sp.expand(space.on_shell(derivative, shell))


def noether_symmetries(
    g: MetricField,
    algebra: AlgebraBasis,
    V,
    time: str = 't',
    check: bool = True,
) -> NoetherAlgebra:
    """∂_t, Case I for every KV/HV and Case II for every gradient element.

    Case II solutions with T = 1 coincide with Case I and are dropped.

    Raises:
        InvariantViolation: check is set and an admitted integral is not
            conserved
    """
    V = as_expr(V)
    results = [noether_time(g, V, time)]
    for element in algebra.homothetic_algebra():
        results.append(noether_case1(
            g, element.vector, V, source=element.name, time=time
        ))
    for element in algebra.gradient_elements():
        for result in noether_case2(
            g, element.classification.potential, V,
            source=element.name, time=time,
        ):
            if result.T is not None and result.T == 1:
                continue
            results.append(result)
    noether = NoetherAlgebra(results, energy(
        g, V, VelocitySpace.create(_time(time), g.coordinates)
    ))
    if check:
        for result in noether.admitted():
            if not is_zero(integral_derivative(result, g, V)):
                raise InvariantViolation(
                    f'integral of {result.generator} is not conserved'
                )
    LOG.info(f'Noether algebra of dimension {noether.dimension}')
    return noether
