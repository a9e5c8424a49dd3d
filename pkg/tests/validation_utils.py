import contextlib
import io
import json
import random
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import sympy as sp

from liesym.cli import main
from liesym.geometry.tensors import MetricField
from liesym.symexpr import is_zero
from liesym.symexpr.registry import REGISTRY


def seeded_rng(seed: int = 0) -> random.Random:
    return random.Random(seed)


def random_polynomial(
    rng: random.Random,
    variables: Sequence[sp.Symbol],
    degree: int = 2,
    terms: int = 3,
) -> sp.Expr:
    result = sp.Integer(0)
    for _ in range(terms):
        monomial = sp.Integer(rng.randint(-3, 3))
        for x in variables:
            monomial *= x**rng.randint(0, degree)
        result += monomial
    return sp.expand(result)


def metric_corpus() -> Dict[str, MetricField]:
    """Small metrics used across the geometry tests."""
    x, y = REGISTRY.symbols(('x', 'y'))
    return {
        'euclidean': MetricField.euclidean((x, y)),
        'polar': MetricField.from_lower((x, y), sp.diag(1, x**2)),
        'halfplane': MetricField.from_lower((x, y), sp.eye(2) / y**2),
        'minkowski': MetricField.from_lower((x, y), sp.diag(1, -1)),
        'wave': MetricField.from_lower((x, y), sp.diag(1 / x**2, -1)),
    }


def assert_all_zero(test_case, expressions, msg=None) -> None:
    for e in expressions:
        test_case.assertTrue(is_zero(e), msg or f'{e} does not vanish')


def write_json(directory: str, name: str, data) -> Path:
    path = Path(directory) / name
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def run_cli(argv: List[str]) -> Tuple[int, str, str]:
    """Run the command line front end, returning (code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()
