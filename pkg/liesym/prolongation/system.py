"""Determining systems: tagged residuals that must vanish identically."""
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

import pandas as pd
import sympy as sp

from liesym.symexpr import Expr, canonical, is_zero, to_text


@dataclass(frozen=True)
class DeterminingEquation:
    """One condition of a determining system.

    Attributes:
        tag (str): equation family, e.g. "uij_uk" or "conformal".
        source (Expr): jet monomial the residual is the coefficient of,
            1 for jet free groups.
        residual (Expr): expression that must vanish identically.
        index (Tuple[int, ...]): tensor indices of the entry, if any.
    """
    tag: str
    source: Expr
    residual: Expr
    index: Tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return is_zero(self.residual)

    def to_json(self) -> dict:
        return {
            'tag': self.tag,
            'source': to_text(self.source),
            'index': list(self.index),
            'residual': to_text(self.residual),
        }


@dataclass
class DeterminingSystem:
    """Residuals whose joint vanishing is the symmetry condition.

    Attributes:
        equations (List[DeterminingEquation]): tagged residuals.
        unknowns (Tuple[Expr, ...]): unknown functions and constants.
        multiplier (Optional[Expr]): λ of X^[2]H = λH when used.
    """
    equations: List[DeterminingEquation] = field(default_factory=list)
    unknowns: Tuple[Expr, ...] = ()
    multiplier: Optional[Expr] = None

    def add(
        self,
        tag: str,
        residual,
        source=sp.Integer(1),
        index: Sequence[int] = (),
    ) -> DeterminingEquation:
        equation = DeterminingEquation(
            tag, sp.sympify(source), canonical(residual), tuple(index)
        )
        self.equations.append(equation)
        return equation

    def __len__(self) -> int:
        return len(self.equations)

    def __iter__(self) -> Iterator[DeterminingEquation]:
        return iter(self.equations)

    def tags(self) -> List[str]:
        seen = []
        for eq in self.equations:
            if eq.tag not in seen:
                seen.append(eq.tag)
        return seen

    def by_tag(self, tag: str) -> List[DeterminingEquation]:
        return [eq for eq in self.equations if eq.tag == tag]

    def residuals(self, tag: Optional[str] = None) -> List[Expr]:
        equations = self.equations if tag is None else self.by_tag(tag)
        return [eq.residual for eq in equations]

    def nonzero(self) -> List[DeterminingEquation]:
        return [eq for eq in self.equations if not eq.is_zero()]

    def is_satisfied(self) -> bool:
        return not self.nonzero()

    def substitute(self, mapping) -> 'DeterminingSystem':
        """System with mapping applied to every residual and derivatives
        evaluated."""
        result = DeterminingSystem(
            unknowns=self.unknowns,
            multiplier=(None if self.multiplier is None
                        else self.multiplier.subs(mapping).doit()),
        )
        for eq in self.equations:
            result.add(
                eq.tag, eq.residual.subs(mapping).doit(), eq.source, eq.index
            )
        return result

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    'tag': eq.tag,
                    'source': to_text(eq.source),
                    'index': ','.join(str(i) for i in eq.index),
                    'residual': to_text(eq.residual),
                }
                for eq in self.equations
            ],
            columns=['tag', 'source', 'index', 'residual'],
        )

    def to_json(self) -> dict:
        return {
            'multiplier': (None if self.multiplier is None
                           else to_text(self.multiplier)),
            'equations': [eq.to_json() for eq in self.equations],
        }

    def __str__(self) -> str:
        return self.to_frame().to_string(index=False)
