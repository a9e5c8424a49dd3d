"""Lie point symmetries of the wave equation c(x)² u_xx − u_yy = 0.

The principal symbol A = diag(c², −1) is the inverse of the metric
g = diag(c⁻², −1). Candidates are X = Y + (c₁ u + b) ∂_u for Y in the
homothetic algebra of g, with multiplier λ = c₁ − 2ψ_Y; every candidate is
checked against the full determining system.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import pandas as pd
import sympy as sp

from liesym.errors import PreconditionError
from liesym.geometry.collineations import classify_collineation
from liesym.geometry.tensors import (
    Coordinates,
    MetricField,
    VectorField,
    christoffel,
    lie_derivative_connection,
)
from liesym.prolongation.pde import (
    Deduction,
    GeneratorPDE,
    PDEProblem,
    SymmetryCheck,
    deduce_constant_a,
    determining_linear,
    verify_symmetry,
)
from liesym.prolongation.system import DeterminingSystem
from liesym.solver.homothetic import (
    AlgebraBasis,
    AlgebraElement,
    solve_homothetic,
)
from liesym.symexpr import Expr, as_expr, canonical, is_zero, to_text
from liesym.symexpr.kernel import declare_function
from liesym.symexpr.registry import REGISTRY
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)


@dataclass(frozen=True)
class WaveSymmetry:
    name: str
    source: str
    generator: GeneratorPDE
    psi: Expr
    check: SymmetryCheck

    @property
    def admitted(self) -> bool:
        return self.check.is_symmetry

    def to_json(self) -> dict:
        return {
            'name': self.name,
            'source': self.source,
            'generator': self.generator.to_json(),
            'psi': to_text(self.psi),
            'admitted': self.admitted,
            'check': self.check.to_json(),
        }


@dataclass
class WaveResult:
    """Wave equation symmetries and the trace of the conformal reduction.

    Attributes:
        c (Expr): wave speed.
        problem (PDEProblem): c² u_xx − u_yy = 0.
        algebra (AlgebraBasis): homothetic algebra of g = diag(c⁻², −1).
        symmetries (List[WaveSymmetry]): every candidate with its check;
            rejected ones keep their nonvanishing residuals.
        trace (DeterminingSystem): determining system of the generic linear
            generator with the steps of the reduction, see wave_trace.
        solution_condition (Expr): A^ij b_,ij, which must vanish for
            b ∂_u.
        constant_a (Deduction): whether the trace forces a_,i = 0.
    """
    c: Expr
    problem: PDEProblem
    algebra: AlgebraBasis
    symmetries: List[WaveSymmetry] = field(default_factory=list)
    trace: Optional[DeterminingSystem] = None
    solution_condition: Expr = sp.Integer(0)
    constant_a: Optional[Deduction] = None

    def admitted(self) -> List[WaveSymmetry]:
        return [s for s in self.symmetries if s.admitted]

    def rejected(self) -> List[WaveSymmetry]:
        return [s for s in self.symmetries if not s.admitted]

    @property
    def dimension(self) -> int:
        """Admitted generators, b ∂_u counted once."""
        return len(self.admitted()) + 1

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                'name': s.name,
                'source': s.source,
                'generator': str(s.generator),
                'lambda': to_text(s.check.multiplier),
                'admitted': s.admitted,
            }
            for s in self.symmetries
        ]
        rows.append({
            'name': 'B',
            'source': 'solution',
            'generator': f'({to_text(self._b())})*D_u',
            'lambda': '0',
            'admitted': True,
        })
        return pd.DataFrame(
            rows, columns=['name', 'source', 'generator', 'lambda',
                           'admitted'],
        )

    def _b(self) -> Expr:
        return declare_function('b', self.problem.symbols)

    def to_json(self) -> dict:
        return {
            'c': to_text(self.c),
            'problem': self.problem.to_json(),
            'algebra': self.algebra.to_json(),
            'dimension': self.dimension,
            'symmetries': [s.to_json() for s in self.symmetries],
            'solution_condition': f'{to_text(self.solution_condition)} = 0',
            'trace': None if self.trace is None else self.trace.to_json(),
            'constant_a': None if self.constant_a is None else {
                'holds': self.constant_a.holds,
                'rank': self.constant_a.rank,
                'required': self.constant_a.required,
                'not_forced': [to_text(e) for e in self.constant_a.residuals],
            },
        }


def wave_metric(c, coordinates: Sequence[str] = ('x', 'y')) -> MetricField:
    """g = diag(c⁻², −1)."""
    c = as_expr(c)
    if is_zero(c):
        raise PreconditionError('wave speed c must not vanish')
    xs = REGISTRY.symbols(coordinates)
    return MetricField.from_lower(xs, sp.diag(1 / c**2, -1))


def wave_problem(c, coordinates: Sequence[str] = ('x', 'y'),
                 dependent: str = 'u') -> PDEProblem:
    c = as_expr(c)
    metric = wave_metric(c, coordinates)
    return PDEProblem.linear(
        Coordinates(tuple(coordinates)), sp.diag(c**2, -1), (0, 0), 0,
        dependent, metric=metric,
        description=f'wave equation with c = {to_text(c)}',
    )


def wave_trace(
    problem: PDEProblem,
    X: Optional[GeneratorPDE] = None,
) -> DeterminingSystem:
    """Determining system of ξ^i(x) ∂_i + (a u + b) ∂_u with the steps of
    the reduction to the homothetic algebra appended.

    'contracted_projective' (k) is
    A^ij L_ξΓ^k_ij − 2A^ik a_,i − Γ^k_,l ξ^l + ξ^k_,l Γ^l + (λ − a) Γ^k,
    which equals first_order_k − conformal_ij Γ^k_ij; 'projective' (k, i, j)
    is L_ξΓ^k_ij − δ^k_i a_,j − δ^k_j a_,i, 'homothetic' (i) is (λ − a)_,i
    and 'constant_a' (i) is a_,i. The last three are the candidate steps;
    deduce_constant_a decides whether the system forces them.

    Raises:
        PreconditionError: the problem carries no metric
    """
    if problem.metric is None:
        raise PreconditionError('the wave trace needs the metric of A')
    xs, n, A = problem.symbols, len(problem.symbols), problem.A
    if X is None:
        X = GeneratorPDE.linear_generic(xs, str(problem.u))
    system = determining_linear(problem, X)
    lam = system.multiplier
    a = canonical(sp.diff(X.eta, problem.u))
    connection = christoffel(problem.metric)
    gamma = connection.contracted
    lie = lie_derivative_connection(VectorField(xs, tuple(X.xi)), connection)
    for k in range(n):
        system.add('contracted_projective', (
            sum(A[i, j] * lie[k, i, j] for i in range(n) for j in range(n))
            - 2 * sum(A[i, k] * sp.diff(a, xs[i]) for i in range(n))
            - sum(sp.diff(gamma[k], xs[l]) * X.xi[l] for l in range(n))
            + sum(sp.diff(X.xi[k], xs[l]) * gamma[l] for l in range(n))
            + (lam - a) * gamma[k]
        ), index=(k,))
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                value = lie[k, i, j]
                if k == i:
                    value -= sp.diff(a, xs[j])
                if k == j:
                    value -= sp.diff(a, xs[i])
                system.add('projective', value, index=(k, i, j))
    for i in range(n):
        system.add('homothetic', sp.diff(lam - a, xs[i]), index=(i,))
    for i in range(n):
        system.add('constant_a', sp.diff(a, xs[i]), index=(i,))
    return system


def _extra_elements(
    metric: MetricField,
    vectors: Sequence[Tuple[str, Sequence]],
) -> List[AlgebraElement]:
    """User supplied KVs or HVs, e.g. nonpolynomial ones."""
    connection = christoffel(metric)
    result = []
    for name, components in vectors:
        X = VectorField.from_components(metric.coordinates, components)
        classification = classify_collineation(X, metric, connection)
        if classification is None or not classification.is_homothetic():
            raise PreconditionError(f'{name} = {X} is not a KV or HV')
        result.append(AlgebraElement(name, X, classification))
    return result


def wave_symmetries(
    c,
    coordinates: Sequence[str] = ('x', 'y'),
    degree: Optional[int] = None,
    extra: Sequence[Tuple[str, Sequence]] = (),
    dependent: str = 'u',
    trace: bool = True,
) -> WaveResult:
    """Symmetries of c² u_xx − u_yy = 0 from the homothetic algebra of g.

    Args:
        c: wave speed, a rational function of the coordinates
        coordinates (Sequence[str]): names of x and y
        degree (Optional[int]): polynomial ansatz degree of the solver
        extra (Sequence[Tuple[str, Sequence]]): named vectors added to the
            solved algebra after verification
        trace (bool): also build the generic determining system
    """
    c = as_expr(c)
    problem = wave_problem(c, coordinates, dependent)
    metric = problem.metric
    algebra = solve_homothetic(metric, degree)
    algebra.elements.extend(_extra_elements(metric, extra))
    xs = problem.symbols
    u = problem.u
    symmetries = []
    for element in algebra.homothetic_algebra():
        X = GeneratorPDE.create(xs, element.vector.components, 0,
                                dependent=dependent)
        check = verify_symmetry(problem, X)
        psi = element.classification.psi
        if check.is_symmetry and not is_zero(check.multiplier + 2 * psi):
            LOG.warning(
                f'{element.name}: multiplier {to_text(check.multiplier)} '
                f'differs from -2*psi'
            )
        symmetries.append(
            WaveSymmetry(element.name, element.name, X, psi, check)
        )
    U = GeneratorPDE.create(xs, (0, 0), u, dependent=dependent)
    symmetries.append(
        WaveSymmetry('U', 'U', U, sp.Integer(0), verify_symmetry(problem, U))
    )
    b = declare_function('b', xs)
    condition = canonical(sum(
        problem.A[i, j] * sp.diff(b, xs[i], xs[j])
        for i in range(2) for j in range(2)
    ))
    steps, constant_a = None, None
    if trace:
        X = GeneratorPDE.linear_generic(xs, dependent)
        steps = wave_trace(problem, X)
        constant_a = deduce_constant_a(steps, problem, X)
        LOG.info(f'a = const forced: {constant_a.holds}')
    result = WaveResult(
        c, problem, algebra, symmetries, steps, condition, constant_a,
    )
    LOG.info(
        f'wave equation c = {to_text(c)}: {len(result.admitted())} '
        f'admitted, {len(result.rejected())} rejected'
    )
    return result
