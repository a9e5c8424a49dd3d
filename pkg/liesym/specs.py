"""Problem specifications read from JSON.

A specification names its coordinates, declares constants and opaque
functions, and describes exactly one problem kind. Every expression is a
string in the kernel grammar::

    {
      "coordinates": ["x"],
      "time": "t",
      "constants": {"q0": null, "k": "1/2"},
      "metric": {"g_lower": [["1"]]},
      "kind": "heat",
      "q": "q0*u"
    }

Kinds and their fields:

- ``metric``: ``metric`` only
- ``general``: ``A_upper``, optional ``F``
- ``linear``: ``A_upper``, ``B``, ``f``
- ``heat``: ``metric``, optional ``q``
- ``wave``: ``c``
- ``ode``: ``metric``, optional ``forces`` (one expression per coordinate)
  and ``force_terms``, velocity dependent terms such as
  ``{"order": 1, "components": {"x x": "k"}}`` keyed by the upper index
  followed by the lower ones
- ``lagrangian``: ``metric``, ``V``

A metric is one of ``g_lower``, the inverse ``A_upper`` (``g_upper`` is
accepted as an alias) or ``{"euclidean": true}``.

Errors name the offending field, e.g. ``metric.g_lower[0][1]``.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy as sp

from liesym.builder.wave import wave_problem
from liesym.errors import LiesymError, SpecError
from liesym.geometry.tensors import Coordinates, MetricField
from liesym.prolongation.ode import ForceTensor, GeneratorODE
from liesym.prolongation.pde import GeneratorPDE, PDEProblem
from liesym.symexpr import Expr, Namespace, parse
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)

KINDS = ('metric', 'general', 'linear', 'heat', 'wave', 'ode', 'lagrangian')
METRIC_KEYS = ('g_lower', 'A_upper', 'g_upper', 'euclidean')


def _expect(value, kind, name: str):
    if not isinstance(value, kind):
        expected = getattr(kind, '__name__', str(kind))
        raise SpecError(
            f'expected {expected}, got {type(value).__name__}', field=name
        )
    return value


def parse_field(text, namespace: Namespace, name: str) -> Expr:
    """Parse one expression, reporting failures against its field."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise SpecError(
            f'expected an expression string, got {text!r}', field=name
        )
    try:
        return parse(str(text), namespace)
    except LiesymError as err:
        raise SpecError(str(err), field=name)


def parse_matrix(
    rows,
    namespace: Namespace,
    size: int,
    name: str,
) -> sp.Matrix:
    _expect(rows, list, name)
    if len(rows) != size:
        raise SpecError(f'expected {size} rows, got {len(rows)}', field=name)
    entries = []
    for i, row in enumerate(rows):
        _expect(row, list, f'{name}[{i}]')
        if len(row) != size:
            raise SpecError(
                f'expected {size} entries, got {len(row)}',
                field=f'{name}[{i}]',
            )
        entries.append([
            parse_field(value, namespace, f'{name}[{i}][{j}]')
            for j, value in enumerate(row)
        ])
    return sp.Matrix(entries)


@dataclass
class ProblemSpec:
    """A parsed problem specification.

    Attributes:
        kind (str): one of KINDS.
        coordinates (Tuple[str, ...]): metric coordinates, or all
            independent variables of a general or linear PDE.
        time (Optional[str]): time variable.
        dependent (str): dependent variable.
        namespace (Namespace): declared names used by every expression.
        metric (Optional[MetricField]): metric, when the kind has one.
        fields (Dict[str, Any]): parsed kind specific expressions.
        options (Dict[str, Any]): unparsed options such as "degree".
        description (str): free text.
    """
    kind: str
    coordinates: Tuple[str, ...]
    time: Optional[str] = None
    dependent: str = 'u'
    namespace: Namespace = field(default_factory=Namespace)
    metric: Optional[MetricField] = None
    fields: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)
    description: str = ''

    def parse(self, text, name: str = 'expression') -> Expr:
        return parse_field(text, self.namespace, name)

    def require_metric(self) -> MetricField:
        if self.metric is None:
            raise SpecError('a metric is required', field='metric')
        return self.metric

    def problem(self) -> PDEProblem:
        """The PDE described by a general, linear, heat or wave spec."""
        if self.kind == 'general':
            return PDEProblem.general(
                Coordinates(self.coordinates, self.time), self.fields['A'],
                self.fields.get('F'), self.dependent, self.description,
            )
        if self.kind == 'linear':
            return PDEProblem.linear(
                Coordinates(self.coordinates, self.time), self.fields['A'],
                self.fields['B'], self.fields['f'], self.dependent,
                description=self.description,
            )
        if self.kind == 'heat':
            return PDEProblem.heat(
                self.require_metric(), self.fields.get('q'),
                self.time or 't', self.dependent,
            )
        if self.kind == 'wave':
            return wave_problem(self.fields['c'], self.coordinates,
                                self.dependent)
        raise SpecError(f'kind {self.kind!r} has no PDE', field='kind')

    def forces(self) -> List[ForceTensor]:
        F = self.fields.get('forces')
        result = [] if F is None else [ForceTensor.from_vector(F)]
        return result + list(self.fields.get('force_terms', ()))

    def generator(self, data: Mapping, name: str = 'generator'
                  ) -> GeneratorPDE:
        """Generator {"xi": {var: expr}, "eta": expr} on the PDE variables.

        Missing ξ components are zero.
        """
        _expect(data, dict, name)
        problem = self.problem()
        xi_data = _expect(data.get('xi', {}), dict, f'{name}.xi')
        names = [str(x) for x in problem.symbols]
        unknown = set(xi_data) - set(names)
        if unknown:
            raise SpecError(
                f'unknown variables {sorted(unknown)}', field=f'{name}.xi'
            )
        xi = [
            self.parse(xi_data[x], f'{name}.xi.{x}') if x in xi_data else 0
            for x in names
        ]
        eta = self.parse(data.get('eta', '0'), f'{name}.eta')
        return GeneratorPDE.create(problem.symbols, xi, eta,
                                   dependent=self.dependent)

    def generator_ode(self, data: Mapping, name: str = 'generator'
                      ) -> GeneratorODE:
        """Generator {"xi": expr, "eta": {var: expr}} of an ode spec.

        Missing η components are zero.
        """
        _expect(data, dict, name)
        if self.kind != 'ode':
            raise SpecError(f'kind {self.kind!r} has no ODE', field='kind')
        eta_data = _expect(data.get('eta', {}), dict, f'{name}.eta')
        unknown = set(eta_data) - set(self.coordinates)
        if unknown:
            raise SpecError(
                f'unknown variables {sorted(unknown)}', field=f'{name}.eta'
            )
        xi = self.parse(data.get('xi', '0'), f'{name}.xi')
        eta = [
            self.parse(eta_data[x], f'{name}.eta.{x}') if x in eta_data
            else 0
            for x in self.coordinates
        ]
        return GeneratorODE.create(
            self.namespace.variables[self.time],
            self.require_metric().coordinates, xi, eta,
        )


def _load_metric(
    data: Mapping,
    namespace: Namespace,
    coordinates: Sequence[sp.Symbol],
) -> MetricField:
    metric = _expect(data, dict, 'metric')
    keys = [k for k in METRIC_KEYS if k in metric]
    if len(keys) != 1:
        raise SpecError(
            f'expected exactly one of {METRIC_KEYS}', field='metric'
        )
    key = keys[0]
    n = len(coordinates)
    try:
        if key == 'euclidean':
            return MetricField.euclidean(coordinates)
        matrix = parse_matrix(metric[key], namespace, n, f'metric.{key}')
        if key == 'g_lower':
            return MetricField.from_lower(coordinates, matrix)
        return MetricField.from_upper(coordinates, matrix)
    except SpecError:
        raise
    except LiesymError as err:
        raise SpecError(str(err), field=f'metric.{key}')


def _force_term(spec: ProblemSpec, data, name: str) -> ForceTensor:
    """{"order": m, "components": {"i j1 .. jm": expr}} by coordinate names."""
    _expect(data, dict, name)
    order = data.get('order')
    if isinstance(order, bool) or not isinstance(order, int) or order < 0:
        raise SpecError(f'expected a non negative integer, got {order!r}',
                        field=f'{name}.order')
    components = _expect(data.get('components', {}), dict,
                         f'{name}.components')
    indexed = {}
    for key, value in components.items():
        names = key.split()
        if len(names) != order + 1 or any(
                x not in spec.coordinates for x in names):
            raise SpecError(
                f'expected {order + 1} coordinate names, got {key!r}',
                field=f'{name}.components',
            )
        index = tuple(spec.coordinates.index(x) for x in names)
        indexed[index] = spec.parse(value, f'{name}.components.{key}')
    return ForceTensor.from_components(order, indexed)


def _names(value, name: str) -> Tuple[str, ...]:
    _expect(value, list, name)
    for k, item in enumerate(value):
        _expect(item, str, f'{name}[{k}]')
    if len(set(value)) != len(value):
        raise SpecError('repeated names', field=name)
    return tuple(value)


def _read_json(path: Union[str, Path]):
    try:
        with open(path, encoding='utf-8') as fid:
            return json.load(fid)
    except json.JSONDecodeError as err:
        raise SpecError(f'malformed JSON: {err}', field=str(path))
    except OSError as err:
        raise SpecError(f'cannot read file: {err}', field=str(path))


def load_spec(data: Union[Mapping, str, Path]) -> ProblemSpec:
    """Build a ProblemSpec from a mapping or a JSON file.

    Raises:
        SpecError: malformed JSON, missing or invalid fields
    """
    if isinstance(data, (str, Path)):
        data = _read_json(data)
    _expect(data, dict, 'spec')
    kind = data.get('kind', 'metric')
    if kind not in KINDS:
        raise SpecError(f'unknown kind {kind!r}, expected one of {KINDS}',
                        field='kind')
    default_coordinates = ['x', 'y'] if kind == 'wave' else None
    if 'coordinates' not in data and default_coordinates is None:
        raise SpecError('missing', field='coordinates')
    coordinates = _names(data.get('coordinates', default_coordinates),
                         'coordinates')
    time = data.get('time')
    if time is not None:
        _expect(time, str, 'time')
    if kind in ('heat', 'ode', 'lagrangian'):
        time = time or 't'
        if time in coordinates:
            raise SpecError(
                f'time {time!r} must not be a metric coordinate',
                field='time',
            )
    elif kind in ('general', 'linear') and time is not None \
            and time not in coordinates:
        raise SpecError(f'time {time!r} is not a coordinate', field='time')
    dependent = _expect(data.get('dependent', 'u'), str, 'dependent')

    namespace = Namespace(strict=True)
    try:
        symbols = namespace.declare_variables(coordinates)
        if time is not None and time not in coordinates:
            namespace.declare_variable(time)
        if kind in ('general', 'linear', 'heat', 'wave'):
            namespace.declare_variable(dependent)
        constants = _expect(data.get('constants', {}), dict, 'constants')
        for name, value in sorted(constants.items()):
            if value is not None and not isinstance(value, (str, int)):
                raise SpecError(f'bad value {value!r}',
                                field=f'constants.{name}')
            namespace.declare_constant(name, value)
        functions = _expect(data.get('functions', {}), dict, 'functions')
        for name, args in sorted(functions.items()):
            namespace.declare_function(name, _names(args, f'functions.{name}'))
    except SpecError:
        raise
    except LiesymError as err:
        raise SpecError(str(err), field='constants')

    spec = ProblemSpec(
        kind, coordinates, time, dependent, namespace,
        description=_expect(data.get('description', ''), str, 'description'),
        options={k: data[k] for k in ('degree', 'ansatz') if k in data},
    )
    if kind in ('metric', 'heat', 'ode', 'lagrangian'):
        if 'metric' not in data:
            raise SpecError('missing', field='metric')
        spec.metric = _load_metric(data['metric'], namespace, symbols)
    if kind in ('general', 'linear'):
        if 'A_upper' not in data:
            raise SpecError('missing', field='A_upper')
        spec.fields['A'] = parse_matrix(
            data['A_upper'], namespace, len(coordinates), 'A_upper'
        )
    if kind == 'general' and 'F' in data:
        spec.fields['F'] = spec.parse(data['F'], 'F')
    if kind == 'linear':
        B = _expect(data.get('B'), list, 'B')
        if len(B) != len(coordinates):
            raise SpecError(f'expected {len(coordinates)} entries',
                            field='B')
        spec.fields['B'] = [spec.parse(b, f'B[{k}]') for k, b in enumerate(B)]
        spec.fields['f'] = spec.parse(data.get('f', '0'), 'f')
    if kind == 'heat' and 'q' in data:
        spec.fields['q'] = spec.parse(data['q'], 'q')
    if kind == 'wave':
        if len(coordinates) != 2:
            raise SpecError('the wave equation has two coordinates',
                            field='coordinates')
        if 'c' not in data:
            raise SpecError('missing', field='c')
        spec.fields['c'] = spec.parse(data['c'], 'c')
    if kind == 'ode' and 'forces' in data:
        forces = _expect(data['forces'], list, 'forces')
        if len(forces) != len(coordinates):
            raise SpecError(f'expected {len(coordinates)} entries',
                            field='forces')
        spec.fields['forces'] = [
            spec.parse(f, f'forces[{k}]') for k, f in enumerate(forces)
        ]
    if kind == 'ode' and 'force_terms' in data:
        terms = _expect(data['force_terms'], list, 'force_terms')
        spec.fields['force_terms'] = [
            _force_term(spec, term, f'force_terms[{k}]')
            for k, term in enumerate(terms)
        ]
    if kind == 'lagrangian':
        if 'V' not in data:
            raise SpecError('missing', field='V')
        spec.fields['V'] = spec.parse(data['V'], 'V')
    LOG.debug(f'loaded {kind} spec on {coordinates}')
    return spec


def load_generator(
    path: Union[str, Path],
    spec: ProblemSpec,
) -> Union[GeneratorPDE, GeneratorODE]:
    """Generator file for the problem of spec: {"xi": {var: expr}, "eta":
    expr} for a PDE, {"xi": expr, "eta": {var: expr}} for an ode spec."""
    data = _read_json(path)
    if spec.kind == 'ode':
        return spec.generator_ode(data, name=Path(path).name)
    return spec.generator(data, name=Path(path).name)


def load_expression(
    path: Union[str, Path],
    spec: ProblemSpec,
    variables: Sequence[str] = (),
) -> Expr:
    """Single expression stored as text, e.g. a flux q or a potential V.

    Args:
        path (Union[str, Path]): text file
        spec (ProblemSpec): spec whose declarations the expression uses
        variables (Sequence[str], optional): extra variables to declare
            first, such as the time and dependent variable

    Raises:
        SpecError: unreadable file, parse error or undeclared name
    """
    try:
        text = Path(path).read_text(encoding='utf-8').strip()
    except OSError as err:
        raise SpecError(f'cannot read file: {err}', field=str(path))
    try:
        spec.namespace.declare_variables(variables)
    except LiesymError as err:
        raise SpecError(str(err), field=str(path))
    return parse_field(text, spec.namespace, Path(path).name)
