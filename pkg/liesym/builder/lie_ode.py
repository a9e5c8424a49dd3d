"""Lie point symmetries of ẍ^i + Γ^i_jk ẋ^j ẋ^k + F^i(x) = 0 from the
projective collineations of the metric.

The generator is sought in the span that the projective structure
suggests: ξ is polynomial in t with coefficients built from constants and
gradient KV potentials, η is polynomial in t with coefficients in the
supplied collineations. The determining system is then solved exactly over
that finite span.
"""
from dataclasses import dataclass, field
from typing import List, Sequence

import pandas as pd
import sympy as sp

from liesym.errors import InvariantViolation, PreconditionError
from liesym.geometry.collineations import CollineationTag
from liesym.geometry.tensors import christoffel
from liesym.prolongation.ode import ForceTensor, GeneratorODE, determining_ode
from liesym.solver.homothetic import AlgebraBasis, AlgebraElement
from liesym.solver.linalg import homogeneous_system, nullspace
from liesym.symexpr import Expr, canonical, is_zero
from liesym.symexpr.registry import REGISTRY
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)


@dataclass
class LieODEResult:
    """Generators admitted within the projective span.

    Attributes:
        generators (List[GeneratorODE]): basis of the admitted generators.
        potentials (List[str]): gradient KVs whose potentials enter ξ.
        elements (List[str]): collineations entering η.
        degree (int): highest power of t in the span.
        unknowns (int): size of the span.
    """
    generators: List[GeneratorODE] = field(default_factory=list)
    potentials: List[str] = field(default_factory=list)
    elements: List[str] = field(default_factory=list)
    degree: int = 2
    unknowns: int = 0

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{'name': f'G{k + 1}', 'generator': str(X)}
             for k, X in enumerate(self.generators)],
            columns=['name', 'generator'],
        )

    def to_json(self) -> dict:
        return {
            'dimension': self.dimension,
            'degree_in_t': self.degree,
            'potentials': self.potentials,
            'elements': self.elements,
            'generators': [
                {'name': f'G{k + 1}', 'vector': X.to_json()}
                for k, X in enumerate(self.generators)
            ],
        }


def _potential_elements(algebra: AlgebraBasis) -> List[AlgebraElement]:
    return [
        e for e in algebra.gradient_elements()
        if e.classification.tag == CollineationTag.KV
    ]


def lie_ode_from_projective(
    algebra: AlgebraBasis,
    forces: Sequence[ForceTensor] = (),
    time: str = 't',
    degree: int = 2,
) -> LieODEResult:
    """Lie symmetries of the geodesic equations of algebra.metric with
    velocity independent forces.

    Args:
        algebra (AlgebraBasis): projective collineations of the metric,
            KVs and HV included
        forces (Sequence[ForceTensor]): order 0 force terms F^i(x)
        time (str): name of the independent variable
        degree (int): highest power of t in ξ and η

    Returns:
        LieODEResult: generators admitted within the span

    Raises:
        PreconditionError: a force depends on the velocities
        InvariantViolation: an emitted generator fails the determining
            system
    """
    if any(f.order != 0 for f in forces):
        raise PreconditionError('forces must not depend on the velocities')
    if degree < 0:
        raise PreconditionError('degree must be non negative')
    g = algebra.metric
    connection = christoffel(g)
    t = REGISTRY.symbol(time)
    xs = g.coordinates
    n = g.dimension
    potentials = _potential_elements(algebra)
    elements = list(algebra.elements)

    unknowns = []
    xi = sp.Integer(0)
    eta = [sp.Integer(0)] * n
    for p in range(degree + 1):
        alpha = sp.Dummy(f'alpha{p}')
        unknowns.append(alpha)
        xi += t**p * alpha
        for element in potentials:
            beta = sp.Dummy(f'beta{p}_{element.name}')
            unknowns.append(beta)
            xi += t**p * beta * element.classification.potential
        for element in elements:
            gamma = sp.Dummy(f'gamma{p}_{element.name}')
            unknowns.append(gamma)
            for i in range(n):
                eta[i] += t**p * gamma * element.vector[i]
    candidate = GeneratorODE(t, xs, sp.expand(xi),
                             tuple(sp.expand(e) for e in eta))
    system = determining_ode(connection, forces, candidate)
    matrix = homogeneous_system(system.residuals(), unknowns, (t,) + xs)
    basis = nullspace(matrix)
    LOG.info(
        f'Lie span of {len(unknowns)} unknowns, {matrix.rows} conditions, '
        f'{len(basis)} generators'
    )
    generators = []
    for vector in basis:
        values = dict(zip(unknowns, vector))
        X = GeneratorODE.create(
            t, xs,
            candidate.xi.xreplace(values),
            [e.xreplace(values) for e in candidate.eta],
        )
        check = determining_ode(connection, forces, X)
        if not check.is_satisfied():
            raise InvariantViolation(f'{X} fails the determining system')
        generators.append(X)
    return LieODEResult(
        generators,
        [e.name for e in potentials],
        [e.name for e in elements],
        degree,
        len(unknowns),
    )


def admits(
    X: GeneratorODE,
    algebra: AlgebraBasis,
    forces: Sequence[ForceTensor] = (),
) -> List[Expr]:
    """Residuals of the determining system that do not vanish for X."""
    connection = christoffel(algebra.metric)
    system = determining_ode(connection, forces, X)
    return [canonical(r) for r in system.residuals() if not is_zero(r)]
