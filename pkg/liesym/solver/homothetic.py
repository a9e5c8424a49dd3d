"""Polynomial ansatz solver for L_X g = 2ψ g with constant ψ."""
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator, List, Optional, Sequence, Tuple

import pandas as pd
import sympy as sp
from sympy.polys.orderings import monomial_key

from liesym.errors import InvariantViolation, PreconditionError
from liesym.geometry.collineations import (
    CollineationClass,
    CollineationTag,
    classify_collineation,
)
from liesym.geometry.tensors import (
    MetricField,
    VectorField,
    christoffel,
    lie_derivative_metric,
)
from liesym.solver.linalg import in_span, nullspace
from liesym.symexpr import Expr, canonical, collect_monomials, is_zero, to_text
from liesym.utils.config import load_settings
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)


@dataclass(frozen=True)
class Ansatz:
    """Polynomial components X^i = Σ_m c_{i,m} m over a monomial basis.

    Attributes:
        coordinates (Tuple[sp.Symbol, ...]): coordinates of the field.
        degree (int): highest total degree.
        monomials (Tuple[Expr, ...]): basis functions, graded
            lexicographic ascending.
    """
    coordinates: Tuple[sp.Symbol, ...]
    degree: int
    monomials: Tuple[Expr, ...]

    @classmethod
    def polynomial(
        cls,
        coordinates: Sequence[sp.Symbol],
        degree: int,
    ) -> 'Ansatz':
        if degree < 0:
            raise PreconditionError(f'ansatz degree must be >= 0, got {degree}')
        coordinates = tuple(coordinates)
        monomials = sorted(
            sp.itermonomials(coordinates, degree),
            key=monomial_key('grlex', list(coordinates)),
        )
        return cls(coordinates, degree, tuple(monomials))

    def basis_fields(self) -> Iterator[VectorField]:
        """Elementary fields m ∂_i, component major."""
        n = len(self.coordinates)
        for i in range(n):
            for m in self.monomials:
                yield VectorField.from_components(
                    self.coordinates, [m if k == i else 0 for k in range(n)]
                )

    def __len__(self) -> int:
        return len(self.coordinates) * len(self.monomials)

    def field_from(self, values: Sequence[Expr]) -> VectorField:
        size = len(self.monomials)
        components = []
        for i in range(len(self.coordinates)):
            chunk = values[i * size:(i + 1) * size]
            components.append(sum(c * m for c, m in zip(chunk, self.monomials)))
        return VectorField.from_components(self.coordinates, components)


@dataclass(frozen=True)
class AlgebraElement:
    name: str
    vector: VectorField
    classification: CollineationClass

    def to_json(self) -> dict:
        result = {'name': self.name, 'vector': self.vector.to_json()}
        result.update(self.classification.to_json())
        return result


@dataclass
class AlgebraBasis:
    """Basis of a collineation algebra of a metric.

    Attributes:
        metric (MetricField): metric the vectors belong to.
        elements (List[AlgebraElement]): named, classified vectors.
        degree (Optional[int]): ansatz degree when solved.
        complete (Optional[bool]): True when the basis is known to span the
            whole algebra, None when unknown.
        description (str): free text for reports.
    """
    metric: MetricField
    elements: List[AlgebraElement] = field(default_factory=list)
    degree: Optional[int] = None
    complete: Optional[bool] = None
    description: str = ''

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[AlgebraElement]:
        return iter(self.elements)

    def __getitem__(self, name: str) -> AlgebraElement:
        for element in self.elements:
            if element.name == name:
                return element
        raise KeyError(name)

    def with_tag(self, *tags: CollineationTag) -> List[AlgebraElement]:
        return [e for e in self.elements if e.classification.tag in tags]

    def killing_vectors(self) -> List[AlgebraElement]:
        return self.with_tag(CollineationTag.KV)

    def homothetic_vectors(self) -> List[AlgebraElement]:
        return self.with_tag(CollineationTag.HV)

    def homothetic_algebra(self) -> List[AlgebraElement]:
        return self.with_tag(CollineationTag.KV, CollineationTag.HV)

    def gradient_elements(self) -> List[AlgebraElement]:
        return [
            e for e in self.homothetic_algebra()
            if e.classification.gradient
            and e.classification.potential_representable
        ]

    def nongradient_elements(self) -> List[AlgebraElement]:
        return [
            e for e in self.homothetic_algebra()
            if not e.classification.gradient
        ]

    def structure_constants(self) -> List[Tuple[str, str, Tuple[Expr, ...]]]:
        """Coefficients of each bracket [X_a, X_b] in the basis.

        Raises:
            InvariantViolation: a bracket leaves the span
        """
        coordinates = self.metric.coordinates
        basis = [e.vector.components for e in self.elements]
        result = []
        for a, first in enumerate(self.elements):
            for second in self.elements[a + 1:]:
                bracket = first.vector.bracket(second.vector)
                coefficients = in_span(bracket.components, basis, coordinates)
                if coefficients is None:
                    raise InvariantViolation(
                        f'[{first.name}, {second.name}] is not in the span'
                    )
                result.append((first.name, second.name, coefficients))
        return result

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for element in self.elements:
            c = element.classification
            rows.append({
                'name': element.name,
                'vector': str(element.vector),
                'class': c.label,
                'gradient': c.gradient,
                'psi': '' if c.psi is None else to_text(c.psi),
                'potential': (
                    to_text(c.potential)
                    if c.potential is not None and c.potential_representable
                    else ''
                ),
            })
        return pd.DataFrame(
            rows,
            columns=['name', 'vector', 'class', 'gradient', 'psi',
                     'potential'],
        )

    def to_json(self) -> dict:
        return {
            'description': self.description,
            'coordinates': [str(x) for x in self.metric.coordinates],
            'degree': self.degree,
            'complete': 'unknown' if self.complete is None else self.complete,
            'vectors': [e.to_json() for e in self.elements],
        }

    def __str__(self) -> str:
        return self.to_frame().to_string(index=False)


def _entry_rows(columns: Sequence[Expr], gens: Sequence[sp.Symbol]):
    """Rows of coefficient conditions for Σ_u c_u columns[u] = 0.

    Denominators are cleared with the least common multiple before the
    numerators are split by monomials in gens.
    """
    denominators = [sp.fraction(sp.together(c))[1] for c in columns]
    common = reduce(sp.lcm, denominators, sp.Integer(1))
    collected = [
        collect_monomials(canonical(c * common), gens) for c in columns
    ]
    monomials = set()
    for item in collected:
        monomials.update(item)
    rows = []
    for monomial in sorted(monomials, key=sp.default_sort_key):
        rows.append([item.get(monomial, 0) for item in collected])
    return rows


def _homothetic_matrix(g: MetricField, ansatz: Ansatz) -> sp.Matrix:
    n = g.dimension
    lies = [lie_derivative_metric(X, g) for X in ansatz.basis_fields()]
    rows = []
    for a in range(n):
        for b in range(a, n):
            columns = [lx[a, b] for lx in lies] + [-2 * g.lower[a, b]]
            rows.extend(_entry_rows(columns, g.coordinates))
    if not rows:
        return sp.zeros(0, len(ansatz) + 1)
    return sp.Matrix(rows)


def _separate_psi(vectors: List[sp.Matrix]) -> List[sp.Matrix]:
    """Make ψ vanish on all vectors but one, normalised to ψ = 1."""
    with_psi = [v for v in vectors if not is_zero(v[-1])]
    if not with_psi:
        return vectors
    pivot = with_psi[0] / with_psi[0][-1]
    result = []
    for v in vectors:
        if v is with_psi[0]:
            continue
        result.append((v - v[-1] * pivot).applyfunc(canonical))
    result.append(pivot.applyfunc(canonical))
    return result


def solve_homothetic(
    g: MetricField,
    degree: Optional[int] = None,
    kind: str = 'all',
) -> AlgebraBasis:
    """KVs and HV of g with polynomial components up to degree.

    ψ is one extra unknown, so KVs and the HV come out of a single
    homogeneous system; the basis follows the nullspace of its reduced row
    echelon form with the coefficient order (component, monomial, ψ).

    Args:
        g (MetricField): metric with rational components
        degree (Optional[int], optional): ansatz degree. Defaults to the
            configured default degree.
        kind (str, optional): 'kv', 'hv' or 'all'. Defaults to 'all'.

    Returns:
        AlgebraBasis: classified basis; complete is None unless the
            maximal dimension n(n+1)/2 + 1 is reached
    """
    if kind not in ('kv', 'hv', 'all'):
        raise PreconditionError(f'unknown collineation kind {kind!r}')
    if degree is None:
        degree = load_settings().degree
    if degree < 1:
        raise PreconditionError(f'ansatz degree must be >= 1, got {degree}')
    ansatz = Ansatz.polynomial(g.coordinates, degree)
    matrix = _homothetic_matrix(g, ansatz)
    LOG.info(
        f'Homothetic system: {matrix.rows} equations, '
        f'{matrix.cols} unknowns, degree {degree}'
    )
    vectors = _separate_psi(nullspace(matrix))
    connection = christoffel(g)
    elements = []
    kv_count = 0
    for v in vectors:
        X = ansatz.field_from(list(v[:-1]))
        psi = canonical(v[-1])
        lx = lie_derivative_metric(X, g)
        if not all(is_zero(lx[i, j] - 2 * psi * g.lower[i, j])
                   for i in range(g.dimension) for j in range(g.dimension)):
            raise InvariantViolation(f'{X} does not satisfy L_X g = 2ψ g')
        classification = classify_collineation(X, g, connection)
        if classification is None:
            raise InvariantViolation(f'{X} failed classification')
        if is_zero(psi):
            kv_count += 1
            name = f'K{kv_count}'
            if kind == 'hv':
                continue
        else:
            name = 'H'
            if kind == 'kv':
                continue
        elements.append(AlgebraElement(name, X, classification))
    n = g.dimension
    complete = True if len(vectors) == n * (n + 1) // 2 + 1 else None
    LOG.info(
        f'Homothetic algebra: {kv_count} KVs, '
        f'{len(vectors) - kv_count} HV found at degree {degree}'
    )
    return AlgebraBasis(
        metric=g,
        elements=elements,
        degree=degree,
        complete=complete,
        description=f'Homothetic algebra at ansatz degree {degree}',
    )
