"""Second prolongation and determining systems of A^ij u_ij − F = 0."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp
from sympy.core.function import AppliedUndef

from liesym.errors import NotPolynomialError, PreconditionError
from liesym.geometry.tensors import (
    Coordinates,
    MetricField,
    VectorField,
    christoffel,
)
from liesym.prolongation.jet import JetSpace
from liesym.prolongation.system import DeterminingEquation, DeterminingSystem
from liesym.solver.linalg import rank
from liesym.symexpr import (
    Expr,
    as_expr,
    canonical,
    collect_monomials,
    declare_function,
    is_zero,
    numerator,
    to_text,
)
from liesym.symexpr.kernel import jacobian_rows
from liesym.symexpr.registry import REGISTRY
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)


@dataclass(frozen=True)
class GeneratorPDE:
    """Point symmetry candidate X = ξ^i ∂_i + η ∂_u.

    Attributes:
        coordinates (Tuple[sp.Symbol, ...]): independent variables.
        dependent (sp.Symbol): dependent variable u.
        xi (Tuple[Expr, ...]): ξ^i(x, u).
        eta (Expr): η(x, u).
        constants (Tuple[sp.Symbol, ...]): free symbolic constants.
    """
    coordinates: Tuple[sp.Symbol, ...]
    dependent: sp.Symbol
    xi: Tuple[Expr, ...]
    eta: Expr
    constants: Tuple[sp.Symbol, ...] = ()

    def __post_init__(self) -> None:
        if len(self.xi) != len(self.coordinates):
            raise PreconditionError(
                f'{len(self.xi)} components of xi for '
                f'{len(self.coordinates)} coordinates'
            )

    @classmethod
    def create(
        cls,
        coordinates: Sequence[sp.Symbol],
        xi: Sequence,
        eta,
        dependent: str = 'u',
        constants: Sequence[str] = (),
    ) -> 'GeneratorPDE':
        return cls(
            tuple(coordinates),
            REGISTRY.symbol(dependent),
            tuple(canonical(as_expr(c)) for c in xi),
            canonical(as_expr(eta)),
            REGISTRY.symbols(constants),
        )

    @classmethod
    def generic(
        cls,
        coordinates: Sequence[sp.Symbol],
        dependent: str = 'u',
        depends_on_u: bool = True,
    ) -> 'GeneratorPDE':
        """Generator with opaque components ξ^i(x, u) and η(x, u)."""
        coordinates = tuple(coordinates)
        u = REGISTRY.symbol(dependent)
        args = coordinates + (u,) if depends_on_u else coordinates
        xi = tuple(declare_function(f'xi_{x}', args) for x in coordinates)
        eta = declare_function('eta', coordinates + (u,))
        return cls(coordinates, u, xi, eta)

    @classmethod
    def linear_generic(
        cls,
        coordinates: Sequence[sp.Symbol],
        dependent: str = 'u',
    ) -> 'GeneratorPDE':
        """ξ^i(x) ∂_i + (a(x) u + b(x)) ∂_u with opaque ξ, a, b."""
        coordinates = tuple(coordinates)
        u = REGISTRY.symbol(dependent)
        xi = tuple(declare_function(f'xi_{x}', coordinates)
                   for x in coordinates)
        a = declare_function('a', coordinates)
        b = declare_function('b', coordinates)
        return cls(coordinates, u, xi, a * u + b)

    def vector_field(self) -> VectorField:
        """ξ as a vector field on the base coordinates.

        Raises:
            PreconditionError: some ξ^i depends on u
        """
        if any(not is_zero(sp.diff(c, self.dependent)) for c in self.xi):
            raise PreconditionError('xi depends on the dependent variable')
        return VectorField.from_components(self.coordinates, self.xi)

    def __add__(self, other: 'GeneratorPDE') -> 'GeneratorPDE':
        if self.coordinates != other.coordinates:
            raise PreconditionError('generators on different coordinates')
        return GeneratorPDE(
            self.coordinates,
            self.dependent,
            tuple(canonical(a + b) for a, b in zip(self.xi, other.xi)),
            canonical(self.eta + other.eta),
            tuple(dict.fromkeys(self.constants + other.constants)),
        )

    def scale(self, factor) -> 'GeneratorPDE':
        factor = as_expr(factor)
        return GeneratorPDE(
            self.coordinates,
            self.dependent,
            tuple(canonical(factor * c) for c in self.xi),
            canonical(factor * self.eta),
            self.constants,
        )

    def substitute(self, mapping) -> 'GeneratorPDE':
        return GeneratorPDE(
            self.coordinates,
            self.dependent,
            tuple(canonical(sp.sympify(c).subs(mapping).doit())
                  for c in self.xi),
            canonical(sp.sympify(self.eta).subs(mapping).doit()),
            tuple(c for c in self.constants if c not in mapping),
        )

    def __str__(self) -> str:
        terms = []
        for c, x in zip(self.xi, self.coordinates):
            if c != 0:
                terms.append(f'({to_text(c)})*D_{x}')
        if self.eta != 0:
            terms.append(f'({to_text(self.eta)})*D_{self.dependent}')
        return ' + '.join(terms) if terms else '0'

    def to_json(self) -> dict:
        return {
            'xi': {str(x): to_text(c)
                   for x, c in zip(self.coordinates, self.xi)},
            'eta': to_text(self.eta),
            'constants': [str(c) for c in self.constants],
        }


@dataclass(frozen=True)
class PDEProblem:
    """A^ij u_ij − F(x, u, u_k) = 0.

    The right hand side is either a general F or the linear form
    F = B^k u_k + f.

    Attributes:
        coordinates (Coordinates): independent variables, optional
            evolution variable.
        jet (JetSpace): jet variables.
        A (sp.ImmutableMatrix): symmetric principal coefficients.
        F (Optional[Expr]): general right hand side.
        B (Optional[Tuple[Expr, ...]]): first order coefficients of the
            linear form.
        f (Optional[Expr]): source term of the linear form.
        metric (Optional[MetricField]): spatial metric for heat problems.
        description (str): free text.
    """
    coordinates: Coordinates
    jet: JetSpace
    A: sp.ImmutableMatrix
    F: Optional[Expr] = None
    B: Optional[Tuple[Expr, ...]] = None
    f: Optional[Expr] = None
    metric: Optional[MetricField] = None
    description: str = ''

    def __post_init__(self) -> None:
        n = len(self.coordinates)
        if self.A.shape != (n, n):
            raise PreconditionError(
                f'A has shape {self.A.shape}, expected {(n, n)}'
            )
        for i in range(n):
            for j in range(i + 1, n):
                if not is_zero(self.A[i, j] - self.A[j, i]):
                    raise PreconditionError('A is not symmetric')
        if all(is_zero(e) for e in self.A):
            raise PreconditionError(
                'all A^ij vanish, the equation is not of second order'
            )
        if (self.F is None) == (self.B is None):
            raise PreconditionError(
                'exactly one of a general F or a linear form (B, f) is needed'
            )
        if self.B is not None and len(self.B) != n:
            raise PreconditionError(f'B needs {n} components')

    @classmethod
    def general(
        cls,
        coordinates: Coordinates,
        A,
        F=None,
        dependent: str = 'u',
        description: str = '',
    ) -> 'PDEProblem':
        """General problem; F defaults to an opaque F(x, u, u_k)."""
        jet = JetSpace.create(coordinates.symbols, dependent)
        if F is None:
            F = declare_function(
                'F', jet.coordinates + (jet.dependent,) + jet.first
            )
        return cls(
            coordinates, jet, _matrix(A), F=canonical(as_expr(F)),
            description=description,
        )

    @classmethod
    def linear(
        cls,
        coordinates: Coordinates,
        A,
        B: Sequence,
        f=0,
        dependent: str = 'u',
        metric: Optional[MetricField] = None,
        description: str = '',
    ) -> 'PDEProblem':
        jet = JetSpace.create(coordinates.symbols, dependent)
        return cls(
            coordinates, jet, _matrix(A),
            B=tuple(canonical(as_expr(b)) for b in B),
            f=canonical(as_expr(f)),
            metric=metric,
            description=description,
        )

    @classmethod
    def heat(
        cls,
        metric: MetricField,
        q=None,
        time: str = 't',
        dependent: str = 'u',
    ) -> 'PDEProblem':
        """Heat equation with flux g^ij u_ij − Γ^i u_i − u_t = q(t, x, u).

        q defaults to the opaque function q(t, x, u).
        """
        names = (time,) + tuple(str(x) for x in metric.coordinates)
        coordinates = Coordinates(names, time)
        t = coordinates.t
        u = REGISTRY.symbol(dependent)
        if q is None:
            q = declare_function('q', (t,) + metric.coordinates + (u,))
        n = metric.dimension
        A = sp.zeros(n + 1, n + 1)
        A[1:, 1:] = metric.upper
        connection = christoffel(metric)
        B = (sp.Integer(1),) + connection.contracted
        return cls.linear(
            coordinates, A, B, q, dependent, metric=metric,
            description='heat equation with flux',
        )

    @property
    def kind(self) -> str:
        return 'linear' if self.B is not None else 'general'

    @property
    def symbols(self) -> Tuple[sp.Symbol, ...]:
        return self.jet.coordinates

    @property
    def u(self) -> sp.Symbol:
        return self.jet.dependent

    def rhs(self) -> Expr:
        """F, or B^k u_k + f for the linear form."""
        if self.F is not None:
            return self.F
        return sum(
            b * uk for b, uk in zip(self.B, self.jet.first)
        ) + self.f

    def principal(self) -> Expr:
        """A^ij u_ij written with u_ij = u_ji."""
        return sum(
            (1 if i == j else 2) * self.A[i, j] * s
            for i, j, s in self.jet.second
        )

    def lhs(self) -> Expr:
        return self.principal() - self.rhs()

    def has_time_split(self) -> bool:
        """A^tt = A^ti = 0 with a nondegenerate spatial block."""
        t = self.coordinates.t
        if t is None:
            return False
        k = self.symbols.index(t)
        if any(not is_zero(self.A[k, j]) for j in range(len(self.symbols))):
            return False
        spatial = [j for j in range(len(self.symbols)) if j != k]
        block = self.A.extract(spatial, spatial)
        return not is_zero(block.det(method='berkowitz'))

    def to_json(self) -> dict:
        result = {
            'coordinates': list(self.coordinates.names),
            'time': self.coordinates.time,
            'A_upper': [[to_text(e) for e in row] for row in self.A.tolist()],
            'kind': self.kind,
        }
        if self.kind == 'linear':
            result['B'] = [to_text(b) for b in self.B]
            result['f'] = to_text(self.f)
        else:
            result['F'] = to_text(self.F)
        return result


def _matrix(A) -> sp.ImmutableMatrix:
    m = sp.Matrix(A).applyfunc(lambda e: canonical(as_expr(e)))
    return sp.ImmutableMatrix(m)


@dataclass(frozen=True)
class Prolongation:
    """First and second prolongation coefficients η^(1)_i, η^(2)_ij."""
    first: Tuple[Expr, ...]
    second: Dict[Tuple[int, int], Expr] = field(default_factory=dict)

    def eta2(self, i: int, j: int) -> Expr:
        return self.second[(min(i, j), max(i, j))]


def prolong2(X: GeneratorPDE, jet: Optional[JetSpace] = None) -> Prolongation:
    """Second prolongation by the explicit expansion.

    η^(1)_i = η_,i + u_i η_u − ξ^j_,i u_j − u_i u_j ξ^j_,u and the
    corresponding fourteen term expansion of η^(2)_ij.
    """
    if jet is None:
        jet = JetSpace.create(X.coordinates, str(X.dependent))
    xs = X.coordinates
    u = X.dependent
    n = len(xs)
    p = jet.first
    eta = X.eta
    xi = X.xi

    def q(i, j):
        return jet.u2(i, j)

    first = []
    for i in range(n):
        value = sp.diff(eta, xs[i]) + p[i] * sp.diff(eta, u)
        for j in range(n):
            value -= sp.diff(xi[j], xs[i]) * p[j]
            value -= p[i] * p[j] * sp.diff(xi[j], u)
        first.append(sp.expand(value))
    second = {}
    for i in range(n):
        for j in range(i, n):
            value = (
                sp.diff(eta, xs[i], xs[j])
                + p[i] * sp.diff(eta, u, xs[j])
                + p[j] * sp.diff(eta, u, xs[i])
                + p[i] * p[j] * sp.diff(eta, u, 2)
                + q(i, j) * sp.diff(eta, u)
            )
            for k in range(n):
                xk = xi[k]
                value -= (
                    sp.diff(xk, xs[i], xs[j]) * p[k]
                    + p[j] * p[k] * sp.diff(xk, xs[i], u)
                    + p[i] * p[k] * sp.diff(xk, xs[j], u)
                    + p[i] * p[j] * p[k] * sp.diff(xk, u, 2)
                    + q(i, j) * p[k] * sp.diff(xk, u)
                    + sp.diff(xk, xs[i]) * q(k, j)
                    + sp.diff(xk, xs[j]) * q(k, i)
                    + p[i] * q(k, j) * sp.diff(xk, u)
                    + p[j] * q(k, i) * sp.diff(xk, u)
                )
            second[(i, j)] = sp.expand(value)
    return Prolongation(tuple(first), second)


def prolong2_recursive(
    X: GeneratorPDE,
    jet: Optional[JetSpace] = None,
) -> Prolongation:
    """Second prolongation by the total derivative recursion.

    η^(1)_i = D_i η − u_k D_i ξ^k and η^(2)_ij = D_j η^(1)_i − u_ik D_j ξ^k.
    """
    if jet is None:
        jet = JetSpace.create(X.coordinates, str(X.dependent))
    n = len(X.coordinates)
    first = tuple(
        sp.expand(
            jet.total_derivative(X.eta, i)
            - sum(jet.u1(k) * jet.total_derivative(X.xi[k], i)
                  for k in range(n))
        )
        for i in range(n)
    )
    second = {}
    for i in range(n):
        for j in range(i, n):
            second[(i, j)] = sp.expand(
                jet.total_derivative(first[i], j)
                - sum(jet.u2(i, k) * jet.total_derivative(X.xi[k], j)
                      for k in range(n))
            )
    return Prolongation(first, second)


def prolonged_action(p: PDEProblem, X: GeneratorPDE, H=None) -> Expr:
    """X^[2] applied to H, by default the left hand side of p."""
    jet = p.jet
    if H is None:
        H = p.lhs()
    pr = prolong2(X, jet)
    value = sum(c * sp.diff(H, x) for c, x in zip(X.xi, jet.coordinates))
    value += X.eta * sp.diff(H, jet.dependent)
    for k, uk in enumerate(jet.first):
        value += pr.first[k] * sp.diff(H, uk)
    for i, j, s in jet.second:
        value += pr.eta2(i, j) * sp.diff(H, s)
    return sp.expand(value)


def multiplier(p: PDEProblem, X: GeneratorPDE, action=None) -> Expr:
    """λ from the coefficient of the first u_pq with A^pq ≠ 0."""
    if action is None:
        action = prolonged_action(p, X)
    H = p.lhs()
    for i, j, s in p.jet.second:
        h = sp.diff(H, s)
        if not is_zero(h):
            return canonical(sp.diff(action, s) / h)
    raise PreconditionError('all A^ij vanish')


def _split(
    residual: Expr,
    jet: JetSpace,
    tag: str,
    system: DeterminingSystem,
) -> None:
    """Split a residual by second and first jet monomials into system."""
    residual = sp.expand(residual)
    remainder = residual.xreplace({s: 0 for s in jet.second_symbols})
    parts = [(s, sp.diff(residual, s)) for s in jet.second_symbols]
    parts.append((sp.Integer(1), remainder))
    for source, part in parts:
        if is_zero(part):
            continue
        try:
            collected = collect_monomials(part, jet.first)
        except NotPolynomialError:
            collected = {sp.Integer(1): part}
        for monomial, coefficient in collected.items():
            if not is_zero(coefficient):
                system.add(tag, coefficient, source * monomial)


@dataclass
class SymmetryCheck:
    """Outcome of X^[2]H = λH.

    Attributes:
        is_symmetry (bool): every residual vanishes identically.
        multiplier (Expr): λ.
        residuals (DeterminingSystem): nonvanishing jet coefficients of the
            numerator of X^[2]H − λH.
    """
    is_symmetry: bool
    multiplier: Expr
    residuals: DeterminingSystem

    def to_json(self) -> dict:
        return {
            'is_symmetry': self.is_symmetry,
            'lambda': to_text(self.multiplier),
            'nonzero_residuals': [
                eq.to_json() for eq in self.residuals.equations
            ],
        }


def verify_symmetry(p: PDEProblem, X: GeneratorPDE) -> SymmetryCheck:
    """Decide whether X is a Lie point symmetry of p.

    λ is read off the first u_pq coefficient with A^pq ≠ 0; X^[2]H − λH is
    brought over a common denominator and every jet coefficient of the
    numerator must vanish. Free constants and opaque functions in X stay
    symbolic.
    """
    if X.coordinates != p.symbols:
        raise PreconditionError('generator and problem coordinates differ')
    action = prolonged_action(p, X)
    lam = multiplier(p, X, action)
    residual = numerator(action - lam * p.lhs())
    system = DeterminingSystem(multiplier=lam)
    if not is_zero(residual):
        _split(residual, p.jet, 'X2H', system)
    is_symmetry = system.is_satisfied()
    if not is_symmetry:
        LOG.warning(f'{X} is not a symmetry: {len(system)} residuals')
    return SymmetryCheck(is_symmetry, lam, system)


def _opaque_multiplier(p: PDEProblem) -> Expr:
    """λ(x, u) in X^[2]H = λH.

    In general λ may depend on the first derivatives u_k too. The u_ij
    coefficients of X^[2]H − λH are linear in the u_ij and read
    (L_ξA^ij − λA^ij + ...), and every other term is free of u_k once the
    ξ_,u u_k terms are split off into 'uij_uk'. Matching them at a nonzero
    A^ij forces λ to be free of u_k, so λ(x, u) loses no generator.
    """
    return declare_function('lambda', p.symbols + (p.u,))


def determining_general(
    p: PDEProblem,
    X: Optional[GeneratorPDE] = None,
) -> DeterminingSystem:
    """Split X^[2]H − λH by jet monomials.

    λ = λ(x, u) is opaque. The u_ij coefficients split into the u_k linear
    part ('uij_uk') and the rest ('uij'); the u_ij free part of the principal
    contribution gives the cubic u_k terms ('uk_cubic') and everything else goes
    to 'remainder'.

    Args:
        p (PDEProblem): problem, general or linear
        X (Optional[GeneratorPDE], optional): generator. Defaults to the
            generic opaque generator.
    """
    if X is None:
        X = GeneratorPDE.generic(p.symbols, str(p.u))
    lam = _opaque_multiplier(p)
    jet = p.jet
    H0 = p.principal()
    principal = sp.expand(prolonged_action(p, X, H0) - lam * H0)
    rhs_part = sp.expand(
        -(prolonged_action(p, X, p.rhs()) - lam * p.rhs())
    )
    system = DeterminingSystem(
        unknowns=tuple(X.xi) + (X.eta, lam), multiplier=lam
    )
    first = set(jet.first)
    for i, j, s in jet.second:
        coefficient = sp.diff(principal, s)
        collected = collect_monomials(coefficient, jet.first)
        for monomial, value in collected.items():
            if monomial in first:
                k = jet.first.index(monomial)
                system.add('uij_uk', value, s * monomial, (i, j, k))
            elif monomial == 1:
                system.add('uij', value, s, (i, j))
            else:
                raise PreconditionError(
                    f'unexpected jet monomial {monomial} in the prolonged '
                    'condition'
                )
    remainder = principal.xreplace({s: 0 for s in jet.second_symbols})
    lower = sp.Integer(0)
    for monomial, value in collect_monomials(remainder, jet.first).items():
        degree = sp.Poly(monomial, *jet.first).total_degree()
        if degree == 3:
            system.add('uk_cubic', value, monomial)
        else:
            lower += monomial * value
    system.add('remainder', lower + rhs_part)
    LOG.info(f'General determining system: {len(system)} equations')
    return system


@dataclass(frozen=True)
class Deduction:
    """Result of an exact linear deduction from a determining system."""
    name: str
    holds: bool
    rank: int
    required: int
    residuals: Tuple[Expr, ...] = ()


def _derivative_map(functions, variable) -> Dict[Expr, sp.Symbol]:
    return {
        sp.diff(fn, variable): sp.Dummy(f'w{k}')
        for k, fn in enumerate(functions)
        if not is_zero(sp.diff(fn, variable))
    }


def deduce_xi_independent_of_u(
    system: DeterminingSystem,
    X: GeneratorPDE,
) -> Deduction:
    """The uij_uk equations force ξ^k_,u = 0.

    ξ^k_,u are replaced by unknowns w_k; uij_uk is linear homogeneous in them
    and the deduction holds when its rank equals the number of
    coordinates.
    """
    if not all(isinstance(c, AppliedUndef) for c in X.xi):
        raise PreconditionError('deductions need opaque xi components')
    mapping = _derivative_map(X.xi, X.dependent)
    n = len(X.coordinates)
    if not mapping:
        return Deduction('xi_u = 0', True, n, n)
    unknowns = list(mapping.values())
    equations = [
        sp.expand(r.xreplace(mapping)) for r in system.residuals('uij_uk')
    ]
    matrix, rhs = jacobian_rows(equations, unknowns)
    if any(not is_zero(e) for e in rhs):
        raise PreconditionError('uij_uk is not homogeneous in xi_u')
    found = rank(matrix) if matrix.rows else 0
    return Deduction('xi_u = 0', found == len(unknowns), found, len(unknowns))


def _without_u(X: GeneratorPDE) -> Dict[Expr, Expr]:
    """Replace opaque ξ^k(x, u) by ξ^k(x)."""
    mapping = {}
    for c in X.xi:
        if isinstance(c, AppliedUndef) and X.dependent in \
                c.args:
            args = tuple(a for a in c.args if a != X.dependent)
            mapping[c] = c.func(*args)
    return mapping


def lie_derivative_contravariant(
    xi: Sequence[Expr],
    coordinates: Sequence[sp.Symbol],
    A,
) -> sp.Matrix:
    """L_ξ A^ij = ξ^k A^ij_,k − A^kj ξ^i_,k − A^ik ξ^j_,k."""
    n = len(coordinates)
    result = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            value = sum(xi[k] * sp.diff(A[i, j], coordinates[k])
                        for k in range(n))
            value -= sum(
                A[k, j] * sp.diff(xi[i], coordinates[k])
                + A[i, k] * sp.diff(xi[j], coordinates[k])
                for k in range(n)
            )
            result[i, j] = value
    return result


def deduce_conformal_condition(
    system: DeterminingSystem,
    p: PDEProblem,
    X: GeneratorPDE,
) -> Deduction:
    """With ξ_,u = 0 and A independent of u, uij is the CKV condition
    L_ξA^ij = λA^ij − (ηA^ij)_,u."""
    u = p.u
    if any(not is_zero(sp.diff(e, u)) for e in p.A):
        raise PreconditionError('A depends on the dependent variable')
    mapping = _without_u(X)
    xi = [sp.sympify(c).xreplace(mapping) for c in X.xi]
    lam = system.multiplier
    lie = lie_derivative_contravariant(xi, p.symbols, p.A)
    residuals = []
    for eq in system.by_tag('uij'):
        i, j = eq.index
        mult = 1 if i == j else 2
        expected = mult * (
            lie[i, j] - lam * p.A[i, j] + sp.diff(X.eta * p.A[i, j], u)
        )
        reduced = eq.residual.xreplace(mapping).doit()
        residuals.append(canonical(reduced - expected))
    holds = all(is_zero(r) for r in residuals)
    return Deduction(
        'CKV condition', holds, len(residuals), len(residuals),
        tuple(residuals),
    )


def deduce_time_split(
    system: DeterminingSystem,
    p: PDEProblem,
    X: GeneratorPDE,
) -> Deduction:
    """Under A^tt = A^ti = 0 with nondegenerate A^ij, uij forces
    ξ^t_,i = 0 for every spatial i.

    Raises:
        PreconditionError: the problem has no time split
    """
    if not p.has_time_split():
        raise PreconditionError('problem has no nondegenerate time split')
    t = p.coordinates.t
    k = p.symbols.index(t)
    mapping = _without_u(X)
    xi_t = sp.sympify(X.xi[k]).xreplace(mapping)
    spatial = [x for x in p.symbols if x != t]
    derivatives = {
        sp.diff(xi_t, x): sp.Dummy(f'w{idx}')
        for idx, x in enumerate(spatial)
        if not is_zero(sp.diff(xi_t, x))
    }
    if not derivatives:
        return Deduction('xi^t = xi^t(t)', True, len(spatial), len(spatial))
    equations = []
    for eq in system.by_tag('uij'):
        if k in eq.index:
            reduced = eq.residual.xreplace(mapping).doit()
            equations.append(sp.expand(reduced.xreplace(derivatives)))
    unknowns = list(derivatives.values())
    matrix, rhs = jacobian_rows(equations, unknowns)
    if any(not is_zero(e) for e in rhs):
        raise PreconditionError('uij (t, i) is not homogeneous in xi^t_,i')
    found = rank(matrix) if matrix.rows else 0
    return Deduction(
        'xi^t = xi^t(t)', found == len(unknowns), found, len(unknowns)
    )


def _jet_symbols(
    expressions: Sequence[Expr],
    functions: Sequence[Expr],
) -> Dict[Expr, sp.Symbol]:
    """Dummy for every opaque function of ``functions`` and each of its
    derivatives appearing in the expressions."""
    found = set()
    for e in expressions:
        found.update(d for d in e.atoms(sp.Derivative) if d.expr in functions)
        found.update(f for f in e.atoms(AppliedUndef) if f in functions)
    return {
        j: sp.Dummy(f'j{k}')
        for k, j in enumerate(sorted(found, key=sp.default_sort_key))
    }


def deduce_constant_a(
    system: DeterminingSystem,
    p: PDEProblem,
    X: GeneratorPDE,
) -> Deduction:
    """Whether a_,i = 0 follows linearly from 'first_order', 'conformal'
    and the first derivatives of 'conformal', with a = η_,u.

    Every derivative of ξ^k and a is an independent unknown. a_,i is forced
    when adding it as a row leaves the rank unchanged; the residuals list
    the a_,i that are not forced.

    Raises:
        PreconditionError: ξ or η_,u is not opaque, or the equations are not
            homogeneous in the unknowns
    """
    a = canonical(sp.diff(X.eta, p.u))
    functions = tuple(X.xi) + (a,)
    if not all(isinstance(f, AppliedUndef) for f in functions):
        raise PreconditionError('deductions need opaque xi and eta_u')
    conformal = system.residuals('conformal')
    equations = list(system.residuals('first_order')) + list(conformal)
    equations += [sp.diff(e, x) for e in conformal for x in p.symbols]
    targets = [sp.diff(a, x) for x in p.symbols]
    mapping = _jet_symbols(equations + targets, functions)
    unknowns = list(mapping.values())
    reduced = [numerator(canonical(e)).xreplace(mapping) for e in equations]
    matrix, rhs = jacobian_rows(reduced, unknowns)
    if any(not is_zero(e) for e in rhs):
        raise PreconditionError('equations are not homogeneous in the jets')
    found = rank(matrix) if matrix.rows else 0
    missing = []
    for target in targets:
        row, _ = jacobian_rows([target.xreplace(mapping)], unknowns)
        if rank(matrix.col_join(row)) > found:
            missing.append(target)
    n = len(targets)
    return Deduction(
        'a = const', not missing, n - len(missing), n, tuple(missing)
    )


def determining_linear(
    p: PDEProblem,
    X: Optional[GeneratorPDE] = None,
    lam=None,
) -> DeterminingSystem:
    """Determining equations of A^ij u_ij − B^k u_k − f = 0.

    With a = η_,u and b = η − a u the system groups into 'source' (u free
    part), 'first_order' (u_k part), 'conformal' (u_ij part, the CKV
    condition), 'eta_uu', 'xi_u', 'xi_t_x' (ξ^t_,i under a time split)
    and 'first_order_rearranged', the u_k part solved for ξ^k_,ij.

    Args:
        p (PDEProblem): linear problem
        X (Optional[GeneratorPDE], optional): generator. Defaults to
            ξ^i(x) ∂_i + (a(x) u + b(x)) ∂_u with opaque functions.
        lam (optional): multiplier λ. Defaults to the value solved from
            the first nonvanishing conformal component.

    Raises:
        PreconditionError: p is not in linear form
    """
    if p.kind != 'linear':
        raise PreconditionError('determining_linear needs the form B, f')
    if X is None:
        X = GeneratorPDE.linear_generic(p.symbols, str(p.u))
    xs = p.symbols
    n = len(xs)
    u = p.u
    A, B, f = p.A, p.B, p.f
    xi, eta = X.xi, X.eta
    a = canonical(sp.diff(eta, u))
    b = canonical(eta - a * u)
    lie = lie_derivative_contravariant(xi, xs, A)
    if lam is None:
        for i in range(n):
            for j in range(i, n):
                if not is_zero(A[i, j]):
                    lam = canonical(
                        a + (lie[i, j] + eta * sp.diff(A[i, j], u)) / A[i, j]
                    )
                    break
            if lam is not None:
                break
    lam = as_expr(lam)
    system = DeterminingSystem(
        unknowns=tuple(xi) + (eta,), multiplier=lam
    )
    system.add('source', (
        sum(A[i, j] * (sp.diff(a, xs[i], xs[j]) * u
                       + sp.diff(b, xs[i], xs[j]))
            for i in range(n) for j in range(n))
        - sum((sp.diff(a, xs[i]) * u + sp.diff(b, xs[i])) * B[i]
              for i in range(n))
        - sum(xi[k] * sp.diff(f, xs[k]) for k in range(n))
        - a * u * sp.diff(f, u) - b * sp.diff(f, u) + lam * f
    ))
    for k in range(n):
        system.add('first_order', (
            sum(A[i, j] * sp.diff(xi[k], xs[i], xs[j])
                for i in range(n) for j in range(n))
            - 2 * sum(A[i, k] * sp.diff(a, xs[i]) for i in range(n))
            + a * B[k] + a * u * sp.diff(B[k], u)
            - sum(sp.diff(xi[k], xs[i]) * B[i] for i in range(n))
            + sum(xi[i] * sp.diff(B[k], xs[i]) for i in range(n))
            - lam * B[k] + b * sp.diff(B[k], u)
        ), index=(k,))
    for i in range(n):
        for j in range(i, n):
            system.add(
                'conformal',
                lie[i, j] - (lam - a) * A[i, j] + eta * sp.diff(A[i, j], u),
                index=(i, j),
            )
    system.add('eta_uu', sp.diff(eta, u, 2))
    for k in range(n):
        system.add('xi_u', sp.diff(xi[k], u), index=(k,))
    if p.has_time_split():
        kt = xs.index(p.coordinates.t)
        for k in range(n):
            if k != kt:
                system.add('xi_t_x', sp.diff(xi[kt], xs[k]), index=(k,))
    for k in range(n):
        bracket = sum(
            xi[i] * sp.diff(B[k], xs[i]) - B[i] * sp.diff(xi[k], xs[i])
            for i in range(n)
        )
        system.add('first_order_rearranged', (
            sum(A[i, j] * sp.diff(xi[k], xs[i], xs[j])
                for i in range(n) for j in range(n))
            - 2 * sum(A[i, k] * sp.diff(a, xs[i]) for i in range(n))
            + bracket + (a - lam) * B[k] + eta * sp.diff(B[k], u)
        ), index=(k,))
    LOG.info(f'Linear determining system: {len(system)} equations')
    return system


def linear_residual_equations(system: DeterminingSystem) -> List[
        DeterminingEquation]:
    """Nonvanishing equations of a linear system without the rearranged
    first order group, which restates 'first_order'."""
    return [eq for eq in system.nonzero()
            if eq.tag != 'first_order_rearranged']
