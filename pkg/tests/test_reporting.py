import tempfile
import unittest
from pathlib import Path

from liesym.builder.counts import heat_symmetry_counts
from liesym.builder.heat import flat_heat_algebra
from liesym.builder.lie_ode import lie_ode_from_projective
from liesym.builder.noether import noether_symmetries
from liesym.geometry.tensors import MetricField
from liesym.prolongation import GeneratorPDE, PDEProblem, verify_symmetry
from liesym.prolongation.pde import determining_linear
from liesym.reporting.generate import REPORTS, render_report, save_report
from liesym.solver import euclidean_catalog, solve_homothetic
from liesym.symexpr.registry import REGISTRY


class TestRenderReport(unittest.TestCase):
    def setUp(self) -> None:
        self.t, self.x, self.y, self.u = REGISTRY.symbols(('t', 'x', 'y', 'u'))
        self.line = MetricField.euclidean((self.x,))
        self.problem = PDEProblem.heat(self.line, 0)
        self.boost = GeneratorPDE.create(
            self.problem.symbols, (0, self.t), -self.x * self.u / 2,
        )

    def test_collineations(self):
        plane = MetricField.euclidean((self.x, self.y))
        text = render_report(
            'collineations', solve_homothetic(plane, 2).to_json()
        )
        self.assertTrue(text.startswith('# Collineations'))
        self.assertIn('| H |', text)
        self.assertIn('gradient-HV', text)

    def test_determining(self):
        info = determining_linear(self.problem, self.boost).to_json()
        info['description'] = 'heat equation on the line'
        info['deductions'] = []
        text = render_report('determining', info)
        self.assertIn('# Determining equations', text)
        self.assertNotIn('## Deductions', text)
        self.assertIn('conformal', text)

    def test_verify(self):
        check = verify_symmetry(self.problem, self.boost)
        text = render_report('verify', {
            'description': 'boost',
            'generator': self.boost.to_json(),
            'check': check.to_json(),
        })
        self.assertIn('# Symmetry check', text)
        self.assertIn('is symmetry: True', text)

    def test_heat(self):
        text = render_report('heat', flat_heat_algebra(1).to_json())
        self.assertIn('# Heat equation symmetries', text)
        self.assertIn('dimension: 7', text)
        self.assertIn('| Ht |', text)

    def test_noether(self):
        algebra = solve_homothetic(self.line, 2)
        result = noether_symmetries(self.line, algebra, self.x**2 / 2)
        text = render_report('noether', result.to_json())
        self.assertIn('# Noether symmetries', text)
        self.assertIn('dimension: 5', text)
        self.assertIn('## Constraints not satisfied', text)

    def test_counts(self):
        text = render_report('counts', heat_symmetry_counts('flat:2').to_json())
        self.assertIn('# Heat symmetry count', text)
        self.assertIn('| 10 |', text)

    def test_lie_ode(self):
        result = lie_ode_from_projective(euclidean_catalog(1), degree=1)
        info = result.to_json()
        info['description'] = 'free particle'
        text = render_report('lie_ode', info)
        self.assertIn('# Lie symmetries of the equations of motion', text)
        self.assertIn('dimension: 7', text)
        self.assertIn('| G1 |', text)

    def test_every_report_has_a_template(self):
        for kind in REPORTS:
            path = (Path(__file__).resolve().parents[1] / 'liesym'
                    / 'reporting' / 'templates' / f'{kind}.md.j2')
            self.assertTrue(path.exists(), msg=kind)

    def test_unknown_report(self):
        with self.assertRaises(ValueError):
            render_report('summary', {})


class TestSaveReport(unittest.TestCase):
    def setUp(self) -> None:
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self) -> None:
        self.tmpdir.cleanup()

    def test_creates_directory_and_refuses_overwrite(self):
        target = Path(self.tmpdir.name) / 'nested' / 'reports'
        path = save_report('# report\n', str(target), 'counts.md')
        self.assertEqual(path, (target / 'counts.md').resolve())
        self.assertEqual(path.read_text(encoding='utf-8'), '# report\n')
        with self.assertRaises(FileExistsError):
            save_report('# other\n', str(target), 'counts.md')
        self.assertEqual(path.read_text(encoding='utf-8'), '# report\n')
