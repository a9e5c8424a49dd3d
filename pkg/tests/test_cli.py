import json
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from liesym import cli
from .validation_utils import run_cli, write_json

PLANE = {
    'coordinates': ['x', 'y'],
    'metric': {'euclidean': True},
}
HEAT_LINE = {
    'kind': 'heat',
    'coordinates': ['x'],
    'metric': {'euclidean': True},
    'q': '0',
}
OSCILLATOR = {
    'kind': 'lagrangian',
    'coordinates': ['x'],
    'metric': {'euclidean': True},
    'V': 'x^2/2',
}
GENERAL = {
    'kind': 'general',
    'coordinates': ['x', 'y'],
    'A_upper': [['1', '0'], ['0', '1']],
}
BOOST = {'xi': {'x': 't'}, 'eta': '-x*u/2'}
DRAG = {
    'kind': 'ode',
    'coordinates': ['x'],
    'metric': {'euclidean': True},
    'constants': {'k': None},
    'force_terms': [{'order': 1, 'components': {'x x': 'k'}}],
}
FREE_PARTICLE = {
    'kind': 'ode',
    'coordinates': ['x'],
    'metric': {'euclidean': True},
}


class TestCommands(unittest.TestCase):
    def setUp(self) -> None:
        self.tmpdir = tempfile.TemporaryDirectory()
        self.dir = self.tmpdir.name

    def tearDown(self) -> None:
        self.tmpdir.cleanup()

    def run_json(self, argv):
        code, out, err = run_cli(argv)
        self.assertEqual(code, 0, msg=err)
        return json.loads(out)

    def test_collineations(self):
        path = write_json(self.dir, 'plane.json', PLANE)
        info = self.run_json(['collineations', '--metric', str(path),
                              '--degree', '2'])
        self.assertEqual(len(info['vectors']), 4)
        self.assertEqual(info['complete'], True)
        info = self.run_json(['collineations', '--metric', str(path),
                              '--degree', '2', '--class', 'hv'])
        self.assertEqual([v['name'] for v in info['vectors']], ['H'])

    def test_markdown_output(self):
        path = write_json(self.dir, 'plane.json', PLANE)
        code, out, _ = run_cli(['--format', 'md', 'collineations',
                                '--metric', str(path), '--degree', '2'])
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('# Collineations'))
        self.assertIn('gradient-HV', out)

    def test_catalog(self):
        info = self.run_json(['catalog', '--euclidean', '2'])
        self.assertEqual(len(info['vectors']), 10)
        code, _, err = run_cli(['catalog', '--desitter', '0'])
        self.assertEqual(code, 2)
        self.assertIn('nonzero', err)

    def test_verify(self):
        problem = write_json(self.dir, 'heat.json', HEAT_LINE)
        generator = write_json(self.dir, 'boost.json', BOOST)
        info = self.run_json(['verify', '--problem', str(problem),
                              '--generator', str(generator)])
        self.assertTrue(info['check']['is_symmetry'])

    def test_determining_with_deductions(self):
        problem = write_json(self.dir, 'general.json', GENERAL)
        info = self.run_json(['determining', '--problem', str(problem)])
        deductions = {d['name']: d['holds'] for d in info['deductions']}
        self.assertEqual(
            deductions, {'xi_u = 0': True, 'CKV condition': True}
        )

    def test_determining_linear(self):
        problem = write_json(self.dir, 'heat.json', HEAT_LINE)
        generator = write_json(self.dir, 'boost.json', BOOST)
        info = self.run_json(['determining', '--problem', str(problem),
                              '--generator', str(generator)])
        self.assertEqual(info['deductions'], [])
        self.assertGreater(len(info['equations']), 0)

    def test_heat(self):
        path = write_json(self.dir, 'heat.json', HEAT_LINE)
        info = self.run_json(['heat', '--metric', str(path), '--degree', '2'])
        self.assertEqual(info['dimension'], 7)
        info = self.run_json(['heat', '--metric', str(path), '--degree', '2',
                              '--row', 'exp'])
        self.assertEqual(info['dimension'], 3)

    def test_noether(self):
        path = write_json(self.dir, 'oscillator.json', OSCILLATOR)
        info = self.run_json(['noether', '--metric', str(path),
                              '--degree', '2'])
        self.assertEqual(info['dimension'], 5)
        plane = write_json(self.dir, 'plane.json', PLANE)
        code, _, err = run_cli(['noether', '--metric', str(plane)])
        self.assertEqual(code, 2)
        self.assertIn('potential', err)

    def test_wave(self):
        info = self.run_json(['wave', '--c', 'x', '--degree', '2',
                              '--no-trace'])
        self.assertEqual(info['dimension'], 4)
        self.assertIsNone(info['trace'])

    def test_counts(self):
        info = self.run_json(['counts', '--space', 'constcurv:2'])
        self.assertEqual(info['count'], 6)
        self.assertEqual(info['enumerated'], 6)
        code, _, _ = run_cli(['counts', '--space', 'sphere:2'])
        self.assertEqual(code, 2)

    def test_output_directory(self):
        target = Path(self.dir) / 'reports'
        argv = ['--output', str(target), 'counts', '--space', 'flat:1']
        code, out, _ = run_cli(argv)
        self.assertEqual(code, 0)
        self.assertEqual(out, '')
        saved = json.loads((target / 'counts.json').read_text())
        self.assertEqual(saved['count'], 7)
        code, _, err = run_cli(argv)
        self.assertEqual(code, 2)
        self.assertIn('already exists', err)

    def test_missing_file(self):
        code, _, err = run_cli(['collineations', '--metric',
                                str(Path(self.dir) / 'missing.json')])
        self.assertEqual(code, 2)
        self.assertIn('cannot read file', err)

    def test_determining_ode(self):
        problem = write_json(self.dir, 'drag.json', DRAG)
        info = self.run_json(['determining', '--problem', str(problem)])
        self.assertEqual(
            [eq['tag'] for eq in info['equations']],
            ['velocity0', 'velocity1', 'velocity2', 'velocity3'],
        )
        self.assertEqual(info['deductions'], [])
        generator = write_json(self.dir, 'shift.json',
                               {'xi': '1', 'eta': {'x': 'x'}})
        info = self.run_json(['determining', '--problem', str(problem),
                              '--generator', str(generator)])
        self.assertEqual(info['equations'], [])

    def test_determining_ode_rejects_pde_generator(self):
        problem = write_json(self.dir, 'drag.json', DRAG)
        generator = write_json(self.dir, 'bad.json',
                               {'xi': '1', 'eta': {'y': '1'}})
        code, _, err = run_cli(['determining', '--problem', str(problem),
                                '--generator', str(generator)])
        self.assertEqual(code, 2)
        self.assertIn('unknown variables', err)

    def test_lie_ode(self):
        problem = write_json(self.dir, 'free.json', FREE_PARTICLE)
        info = self.run_json(['determining', '--problem', str(problem),
                              '--lie', '--t-degree', '2'])
        self.assertEqual(info['dimension'], 8)
        self.assertEqual(info['degree_in_t'], 2)
        code, out, _ = run_cli(['--format', 'md', 'determining', '--problem',
                                str(problem), '--lie', '--t-degree', '1'])
        self.assertEqual(code, 0)
        self.assertTrue(
            out.startswith('# Lie symmetries of the equations of motion')
        )
        self.assertIn('dimension: 7', out)

    def test_lie_needs_ode(self):
        problem = write_json(self.dir, 'general.json', GENERAL)
        code, _, err = run_cli(['determining', '--problem', str(problem),
                                '--lie'])
        self.assertEqual(code, 2)
        self.assertIn('--lie', err)

    def test_unexpected_error(self):
        def broken(args):
            raise RuntimeError('boom')

        with mock.patch.dict(cli.COMMANDS, {'counts': broken}):
            code, out, err = run_cli(['counts', '--space', 'flat:1'])
        self.assertEqual(code, 1)
        self.assertEqual(out, '')
        self.assertIn('liesym: internal error: RuntimeError: boom', err)
        self.assertNotIn('Traceback', err)
