"""Command line front end.

Every subcommand builds a result, turns it into its JSON view and prints
either that JSON or the rendered markdown report. Exit codes: 0 on
success, 2 for invalid input, 1 when an internal check fails or an
unexpected error is raised.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import sympy as sp

from liesym.builder.counts import SPACES, heat_symmetry_counts
from liesym.builder.heat import (
    QU_ROWS,
    HeatAlgebra,
    heat_problem,
    heat_symmetries,
    linear_heat_algebra,
    qu_table,
    solve_heat_ansatz,
)
from liesym.builder.lie_ode import lie_ode_from_projective
from liesym.builder.noether import noether_symmetries
from liesym.builder.wave import wave_symmetries
from liesym.errors import InvariantViolation, LiesymError, SpecError
from liesym.geometry.tensors import christoffel
from liesym.prolongation.ode import GeneratorODE, determining_ode
from liesym.prolongation.pde import (
    Deduction,
    GeneratorPDE,
    deduce_conformal_condition,
    deduce_time_split,
    deduce_xi_independent_of_u,
    determining_general,
    determining_linear,
    verify_symmetry,
)
from liesym.reporting.generate import render_report, save_report
from liesym.solver.catalogs import desitter_catalog, euclidean_catalog
from liesym.solver.homothetic import solve_homothetic
from liesym.specs import (
    ProblemSpec,
    load_expression,
    load_generator,
    load_spec,
    parse_field,
)
from liesym.symexpr import Namespace, declare_function, is_zero
from liesym.utils.logging import get_logger

LOG = get_logger(__name__)

Result = Tuple[str, dict]


def _degree(args: argparse.Namespace, spec: ProblemSpec) -> Optional[int]:
    if args.degree is not None:
        return args.degree
    degree = spec.options.get('degree')
    if degree is not None and (not isinstance(degree, int) or degree < 1):
        raise SpecError(f'expected a positive integer, got {degree!r}',
                        field='degree')
    return degree


def run_collineations(args: argparse.Namespace) -> Result:
    spec = load_spec(args.metric)
    algebra = solve_homothetic(spec.require_metric(), _degree(args, spec),
                               kind=args.kind)
    algebra.description = spec.description or algebra.description
    return 'collineations', algebra.to_json()


def run_catalog(args: argparse.Namespace) -> Result:
    if args.euclidean is not None:
        algebra = euclidean_catalog(args.euclidean)
    else:
        K = args.desitter
        if not K.isidentifier():
            K = parse_field(K, Namespace(strict=True), 'desitter')
        algebra = desitter_catalog(K)
    return 'collineations', algebra.to_json()


def _deduction_json(deduction: Deduction) -> dict:
    return {
        'name': deduction.name,
        'holds': deduction.holds,
        'rank': deduction.rank,
        'required': deduction.required,
    }


def _deductions(spec: ProblemSpec, system, X: GeneratorPDE) -> List[dict]:
    problem = spec.problem()
    deductions = [deduce_xi_independent_of_u(system, X)]
    if all(is_zero(e.diff(problem.u)) for e in problem.A):
        deductions.append(deduce_conformal_condition(system, problem, X))
    if problem.has_time_split():
        deductions.append(deduce_time_split(system, problem, X))
    return [_deduction_json(d) for d in deductions]


def _generic_ode_generator(spec: ProblemSpec) -> GeneratorODE:
    """ξ(t, x) ∂_t + η^i(t, x) ∂_i with opaque components."""
    xs = spec.require_metric().coordinates
    t = spec.namespace.variables[spec.time]
    args = (t,) + xs
    return GeneratorODE(
        t, xs, declare_function('xi', args),
        tuple(declare_function(f'eta_{x}', args) for x in xs),
    )


def _ode_algebra(spec: ProblemSpec, degree: Optional[int]):
    metric = spec.require_metric()
    if metric.lower == sp.eye(metric.dimension):
        return euclidean_catalog(metric.dimension, metric.coordinates)
    return solve_homothetic(metric, degree)


def run_determining_ode(args: argparse.Namespace, spec: ProblemSpec) -> Result:
    if args.lie:
        algebra = _ode_algebra(spec, _degree(args, spec))
        result = lie_ode_from_projective(algebra, spec.forces(), spec.time,
                                         args.t_degree)
        info = result.to_json()
        info['description'] = spec.description or 'Lie symmetries of the ODE'
        return 'lie_ode', info
    if args.generator is not None:
        X = load_generator(args.generator, spec)
    else:
        X = _generic_ode_generator(spec)
    connection = christoffel(spec.require_metric())
    system = determining_ode(connection, spec.forces(), X)
    info = system.to_json()
    info['description'] = spec.description or 'equations of motion'
    info['deductions'] = []
    return 'determining', info


def run_determining(args: argparse.Namespace) -> Result:
    spec = load_spec(args.problem)
    if spec.kind == 'ode':
        return run_determining_ode(args, spec)
    if args.lie:
        raise SpecError('--lie needs an ode problem', field='kind')
    problem = spec.problem()
    X = None
    if args.generator is not None:
        X = load_generator(args.generator, spec)
    deductions = []
    if problem.kind == 'general':
        if X is None:
            X = GeneratorPDE.generic(problem.symbols, spec.dependent)
            system = determining_general(problem, X)
            deductions = _deductions(spec, system, X)
        else:
            system = determining_general(problem, X)
    else:
        system = determining_linear(problem, X)
    info = system.to_json()
    info['description'] = spec.description or problem.description
    info['deductions'] = deductions
    return 'determining', info


def run_verify(args: argparse.Namespace) -> Result:
    spec = load_spec(args.problem)
    problem = spec.problem()
    X = load_generator(args.generator, spec)
    check = verify_symmetry(problem, X)
    return 'verify', {
        'description': spec.description or problem.description,
        'generator': X.to_json(),
        'check': check.to_json(),
    }


def run_heat(args: argparse.Namespace) -> Result:
    spec = load_spec(args.metric)
    metric = spec.require_metric()
    time = spec.time or 't'
    dependent = spec.dependent
    algebra = solve_homothetic(metric, _degree(args, spec))
    q = spec.fields.get('q')
    if args.flux is not None:
        q = load_expression(args.flux, spec, (time, dependent))
    if args.row is not None:
        result = qu_table(algebra, args.row, time=time, dependent=dependent)
    elif args.general:
        symmetries = heat_symmetries(algebra, q, time, dependent)
        result = HeatAlgebra(
            heat_problem(metric, q, time, dependent),
            [(s.source, s) for s in symmetries],
            'heat equation with flux, generators before the residual is '
            'solved',
        )
    elif q is None or is_zero(q):
        result = linear_heat_algebra(algebra, time, dependent)
    else:
        ansatz = args.ansatz or spec.options.get('ansatz', 'poly:2')
        result = solve_heat_ansatz(algebra, q, ansatz, time, dependent)
    return 'heat', result.to_json()


def run_noether(args: argparse.Namespace) -> Result:
    spec = load_spec(args.metric)
    metric = spec.require_metric()
    V = spec.fields.get('V')
    if args.potential is not None:
        V = load_expression(args.potential, spec)
    if V is None:
        raise SpecError('a potential is required', field='potential')
    algebra = solve_homothetic(metric, _degree(args, spec))
    result = noether_symmetries(metric, algebra, V, spec.time or 't')
    return 'noether', result.to_json()


def run_wave(args: argparse.Namespace) -> Result:
    namespace = Namespace(strict=True)
    namespace.declare_variables(args.coordinates)
    c = parse_field(args.c, namespace, 'c')
    result = wave_symmetries(c, tuple(args.coordinates), args.degree,
                             trace=not args.no_trace)
    return 'wave', result.to_json()


def run_counts(args: argparse.Namespace) -> Result:
    result = heat_symmetry_counts(args.space, args.enumerate_upto)
    return 'counts', result.to_json()


COMMANDS: Dict[str, Callable[[argparse.Namespace], Result]] = {
    'collineations': run_collineations,
    'determining': run_determining,
    'verify': run_verify,
    'heat': run_heat,
    'noether': run_noether,
    'wave': run_wave,
    'counts': run_counts,
    'catalog': run_catalog,
}


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog='liesym',
        description='Lie and Noether point symmetries from collineations.',
    )
    parser.add_argument('--format', choices=('json', 'md'), default='json')
    parser.add_argument('--output', type=Path, default=None,
                        help='directory to write the report into')
    commands = parser.add_subparsers(dest='command', required=True)

    sub = commands.add_parser('collineations',
                              help='KVs and HV of a metric')
    sub.add_argument('--metric', type=Path, required=True)
    sub.add_argument('--degree', type=int, default=None)
    sub.add_argument('--class', dest='kind', choices=('kv', 'hv', 'all'),
                     default='all')

    sub = commands.add_parser('catalog', help='verified collineation tables')
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument('--euclidean', type=int, metavar='N')
    group.add_argument('--desitter', nargs='?', const='K', metavar='K')

    sub = commands.add_parser('determining',
                              help='determining equations of a PDE')
    sub.add_argument('--problem', type=Path, required=True)
    sub.add_argument('--generator', type=Path, default=None)
    sub.add_argument('--lie', action='store_true',
                     help='solve an ode problem over its projective span')
    sub.add_argument('--t-degree', type=int, default=2,
                     help='highest power of t in the --lie span')
    sub.add_argument('--degree', type=int, default=None)

    sub = commands.add_parser('verify', help='check one generator')
    sub.add_argument('--problem', type=Path, required=True)
    sub.add_argument('--generator', type=Path, required=True)

    sub = commands.add_parser('heat', help='heat equation with flux')
    sub.add_argument('--metric', type=Path, required=True)
    sub.add_argument('--flux', type=Path, default=None,
                     help='text file holding q(t, x, u)')
    sub.add_argument('--ansatz', default=None, help='poly:<d> or exp')
    sub.add_argument('--row', choices=QU_ROWS, default=None,
                     help='closed form row for q = q(u)')
    sub.add_argument('--general', action='store_true',
                     help='symbolic generators with their residuals')
    sub.add_argument('--degree', type=int, default=None)

    sub = commands.add_parser('noether', help='Noether point symmetries')
    sub.add_argument('--metric', type=Path, required=True)
    sub.add_argument('--potential', type=Path, default=None,
                     help='text file holding V(x)')
    sub.add_argument('--degree', type=int, default=None)

    sub = commands.add_parser('wave', help='c(x)^2 u_xx - u_yy = 0')
    sub.add_argument('--c', required=True)
    sub.add_argument('--coordinates', nargs=2, default=['x', 'y'])
    sub.add_argument('--degree', type=int, default=None)
    sub.add_argument('--no-trace', action='store_true')

    sub = commands.add_parser('counts', help='heat symmetry counts')
    sub.add_argument('--space', required=True,
                     help=f'one of {", ".join(SPACES)}, as flat:<n>, '
                          f'constcurv:<n> or 1d')
    sub.add_argument('--enumerate-upto', type=int, default=3)
    return parser.parse_args(argv)


def render(kind: str, info: dict, fmt: str) -> str:
    if fmt == 'md':
        return render_report(kind, info)
    return json.dumps(info, indent=2) + '\n'


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    LOG.info(f'liesym {args.command}')
    try:
        kind, info = COMMANDS[args.command](args)
        text = render(kind, info, args.format)
        if args.output is not None:
            suffix = 'md' if args.format == 'md' else 'json'
            save_report(text, str(args.output), f'{args.command}.{suffix}',
                        LOG)
        else:
            sys.stdout.write(text)
    except InvariantViolation as err:
        LOG.error(f'internal check failed: {err}')
        print(f'liesym: internal check failed: {err}', file=sys.stderr)
        return 1
    except (LiesymError, FileExistsError) as err:
        print(f'liesym: {err}', file=sys.stderr)
        return 2
    except Exception as err:
        LOG.error(f'{args.command} failed: {err!r}')
        LOG.debug('traceback', exc_info=True)
        print(f'liesym: internal error: {type(err).__name__}: {err}',
              file=sys.stderr)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
