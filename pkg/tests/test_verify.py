"""
Tests unitarios para el módulo de certificación numérica.

Ejecutar con:
    pytest tests/test_verify.py -v
"""

import unittest
import sys
from pathlib import Path

import numpy as np
import pytest

# Agregar src al path
sys.path.append(str(Path(__file__).parent.parent))

from src.actions import ACTION_IDS, make_action
from src.geometry import quadratic_field, unit_ball
from src.verify import (SamplePlan, certify_action, certify_lemma, certify_resolution,
                        check_solution, default_body, default_lemma_params, default_suite,
                        expected_verdict, non_round_solution)


class TestSamplePlan(unittest.TestCase):
    """Tests para el plan de muestreo."""

    def test_points_inside_ball(self):
        """Test puntos dentro de la bola de radio R."""
        plan = SamplePlan(n=3, radius=2.0, samples=200, seed=1)
        points = plan.points()
        self.assertEqual(points.shape, (200, 3))
        self.assertLessEqual(float(np.max(np.linalg.norm(points, axis=1))), 2.0)

    def test_reproducible(self):
        """Test misma semilla, mismos puntos."""
        a = SamplePlan(n=2, samples=10, seed=9)
        b = SamplePlan(n=2, samples=10, seed=9)
        np.testing.assert_array_equal(a.points(), b.points())
        np.testing.assert_allclose(np.linalg.norm(a.directions(), axis=1), 1.0)

    def test_invalid_plan(self):
        """Test parámetros inválidos."""
        with self.assertRaises(ValueError):
            SamplePlan(n=2, samples=0)
        with self.assertRaises(ValueError):
            SamplePlan(n=2, radius=-1.0)


class TestCertifyAction(unittest.TestCase):
    """Tests para la certificación de acciones."""

    def setUp(self):
        """Configuración inicial para cada test."""
        self.plan = SamplePlan(n=2, radius=5.0, samples=60, seed=4)
        self.ball = unit_ball(2)

    def test_scaling_confirmed_at_critical_exponent(self):
        """Test g2 confirmada con p = n+1."""
        report = certify_action(make_action('g2', 2, eps=2.0), 3, self.ball, self.plan)
        self.assertEqual(report.verdict, 'symmetry-confirmed')
        self.assertLessEqual(report.max_residual, 1e-9)
        self.assertEqual(report.skipped, 0)

    def test_scaling_refuted_elsewhere(self):
        """Test g2 refutada con p = 2."""
        report = certify_action(make_action('g2', 2, eps=2.0), 2, self.ball, self.plan)
        self.assertEqual(report.verdict, 'symmetry-refuted')
        self.assertGreaterEqual(report.max_residual, 1e-2)
        self.assertGreaterEqual(report.max_abs, report.max_residual)

    def test_translation_in_x(self):
        """Test g8 solo con p = −n−1."""
        action = make_action('g8', 2)
        self.assertEqual(certify_action(action, -3, self.ball, self.plan).verdict,
                         'symmetry-confirmed')
        self.assertEqual(certify_action(action, 3, self.ball, self.plan).verdict,
                         'symmetry-refuted')

    def test_non_round_solutions(self):
        """Test acciones listadas sobre soluciones no redondas."""
        for p, action_id in ((3, 'g2'), (1, 'g5'), (-3, 'g7'), (-3, 'g9')):
            u = non_round_solution(2, p)
            report = certify_action(make_action(action_id, 2), p, u, self.plan)
            self.assertEqual(report.verdict, 'symmetry-confirmed', f"{action_id} con p={p}")
        self.assertIsNone(non_round_solution(2, "5/2"))

    def test_sphere_residual_detail(self):
        """Test residuo sobre la esfera del transporte confirmado."""
        report = certify_action(make_action('g3', 2), "5/2", self.ball, self.plan)
        self.assertEqual(report.verdict, 'symmetry-confirmed')
        self.assertLess(report.details['sphere_residual_max'], 1e-8)

    def test_excessive_skips_are_inconclusive(self):
        """Test más de la mitad de los puntos fuera del dominio."""
        plan = SamplePlan(n=2, radius=5.0, samples=300, seed=4)
        report = certify_action(make_action('g3', 2, eps=2.5), 3, self.ball, plan)
        self.assertGreater(report.skip_ratio, 0.5)
        self.assertEqual(report.verdict, 'inconclusive')
        self.assertEqual(report.outcome, 'inconclusive')

    def test_base_field_must_solve(self):
        """Test precondición sobre el campo base."""
        with self.assertRaisesRegex(ValueError, "base field fails PDE"):
            certify_action(make_action('g2', 2), 3, quadratic_field(2), self.plan)
        with self.assertRaisesRegex(ValueError, "base field fails PDE"):
            check_solution(non_round_solution(2, 3), 2, self.plan)

    def test_deterministic(self):
        """Test mismo plan, mismo reporte."""
        action = make_action('g9', 2)
        first = certify_action(action, -3, self.ball, self.plan).to_dict()
        second = certify_action(action, -3, self.ball, self.plan).to_dict()
        self.assertEqual(first, second)

    def test_expected_verdict(self):
        """Test tabla de veredictos esperados."""
        self.assertEqual(expected_verdict('g2', 2, 3), 'symmetry-confirmed')
        self.assertEqual(expected_verdict('g2', 2, 2), 'symmetry-refuted')
        with self.assertRaises(ValueError):
            expected_verdict('g1', 1, 2)


class TestCertifyIdentities(unittest.TestCase):
    """Tests para identidades de funciones soporte y resoluciones."""

    def setUp(self):
        """Configuración inicial para cada test."""
        self.plan = SamplePlan(n=2, radius=5.0, samples=80, seed=2)

    def test_lemmas_confirmed(self):
        """Test las cinco identidades con la variante derivada."""
        for lemma in ('4.1', '4.2', '5.1', '6.2', '6.3'):
            report = certify_lemma(lemma, default_body(2), default_lemma_params(lemma, 2), self.plan,
                                   center=[0.1, 0.0, -0.2])
            self.assertEqual(report.verdict, 'identity-confirmed', lemma)

    def test_stated_projective_shear_refuted(self):
        """Test la variante enunciada de la identidad del cizallamiento Q."""
        params = default_lemma_params('6.3', 2)
        report = certify_lemma('6.3', default_body(2), params, self.plan, variant='stated')
        self.assertEqual(report.verdict, 'identity-refuted')
        deviations = report.details['variant_max_deviation']
        self.assertLess(deviations['derived'], 1e-10)
        self.assertGreater(deviations['stated'], 1e-3)

    def test_singular_body(self):
        """Test cuerpo degenerado."""
        with self.assertRaisesRegex(ValueError, "singular ellipsoid matrix"):
            certify_lemma('4.1', np.zeros((3, 3)), default_lemma_params('4.1', 2), self.plan)

    def test_resolutions_confirmed(self):
        """Test resolución de punta a punta de todas las acciones."""
        for action_id in ACTION_IDS:
            report = certify_resolution(make_action(action_id, 2), self.plan,
                                        body=default_body(2), center=[0.1, 0.2, 0.0])
            self.assertEqual(report.verdict, 'identity-confirmed', action_id)

    def test_resolution_details(self):
        """Test signo de la traslación y formas cerradas en los detalles."""
        g4 = certify_resolution(make_action('g4', 2), self.plan)
        self.assertGreater(g4.details['stated_translation_max_deviation'], 1e-3)
        g8 = certify_resolution(make_action('g8', 2), self.plan, body=default_body(2))
        self.assertLess(g8.details['closed_form_max_deviation']['derived'], 1e-10)
        g9 = certify_resolution(make_action('g9', 2), self.plan, body=default_body(2))
        closed = g9.details['closed_form_max_deviation']
        self.assertLess(closed['derived'], 1e-10)
        self.assertGreater(closed['stated'], 1e-3)


def test_default_suite_matches_table_for_n1():
    """Test suite completa con n = 1 contra la tabla de acciones."""
    plan = SamplePlan(n=1, radius=5.0, samples=40, seed=3)
    reports = default_suite(1, plan)
    assert reports
    for report in reports:
        if report.kind == 'action':
            expected = expected_verdict(report.subject['action']['id'], 1, report.p)
            assert report.verdict == expected, report.subject
        else:
            assert report.outcome == 'confirmed', report.subject
    assert not any(r.subject.get('action', {}).get('id') in ('g1', 'g6') for r in reports)


@pytest.mark.parametrize("action_id", ['g2', 'g4', 'g5', 'g6', 'g7', 'g8', 'g9'])
def test_negative_controls_at_generic_exponent(action_id):
    """Test acciones no listadas refutadas con p = 5/2."""
    plan = SamplePlan(n=2, radius=5.0, samples=40, seed=6)
    report = certify_action(make_action(action_id, 2), "5/2", unit_ball(2), plan)
    assert report.verdict == 'symmetry-refuted'


@pytest.mark.parametrize("action_id", ['g3', 'g9'])
def test_projective_actions_confirmed_near_singular_locus(action_id):
    """Test g3 y g9 con p = −2 sobre el elipsoide con 10³ puntos de radio 5."""
    plan = SamplePlan(n=1, radius=5.0, samples=1000)
    report = certify_action(make_action(action_id, 1), -2, non_round_solution(1, -2), plan)
    assert report.verdict == 'symmetry-confirmed'
    assert report.max_residual <= 1e-9
    assert report.skip_ratio < 0.5


def test_domain_margin_counts_skips():
    """Test puntos con denominador menor que el margen se omiten y se cuentan."""
    action = make_action('g9', 1, eps=0.5)
    assert not action.in_domain([1.99])
    assert action.in_domain([1.97])
    report = certify_action(action, -2, unit_ball(1), SamplePlan(n=1, radius=5.0, samples=1000))
    assert 0.2 < report.skip_ratio < 0.4
    assert report.verdict == 'symmetry-confirmed'


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
def test_default_suite_at_acceptance_scale(n):
    """Test suite completa con 10³ puntos en la bola de radio 5."""
    plan = SamplePlan(n=n, radius=5.0, samples=1000)
    for report in default_suite(n, plan):
        if report.kind == 'action':
            expected = expected_verdict(report.subject['action']['id'], n, report.p)
            assert report.verdict == expected, (report.subject, report.max_residual)
        else:
            assert report.outcome == 'confirmed', (report.subject, report.max_residual)
