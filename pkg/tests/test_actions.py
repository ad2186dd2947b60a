"""
Tests unitarios para el módulo de acciones de grupo.

Ejecutar con:
    pytest tests/test_actions.py -v
"""

import math
import unittest
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import svd

# Agregar src al path
sys.path.append(str(Path(__file__).parent.parent))

from src.actions import (ACTION_IDS, ActionDomainError, GroupAction, body_classification,
                         body_matrix, compose, compose_transforms, diagonal_stretch,
                         infinitesimal_generator, jacobi_eigh, lemma_matrix, lemma_preimage,
                         listed_actions, make_action, resolve, rotation_in_plane,
                         scaling_commutes_with_rotation, scaling_factors, sl_decompose,
                         special_linear_from_generator, stated_translation, support_transform)
from src.geometry import ellipsoid_support, quadratic_field
from src.prolongation import determining_system
from src.verify import suite_exponents


class TestGroupAction(unittest.TestCase):
    """Tests para la construcción y el mapa puntual de las acciones."""

    def setUp(self):
        """Configuración inicial para cada test."""
        self.x = np.array([0.3, -0.4])
        self.u = 1.7

    def test_scaling_example(self):
        """Test g2 multiplica u."""
        y, v = GroupAction('g2', 2, eps=3.0).apply([0.5, 0.0], 2.0)
        np.testing.assert_allclose(y, [0.5, 0.0])
        self.assertEqual(v, 6.0)

    def test_label_and_describe(self):
        """Test etiqueta con eje en base 1."""
        a = make_action('g3', 2, eps=0.3)
        self.assertEqual(a.label(), 'g3^1(eps=0.3)')
        self.assertEqual(a.describe()['axis'], 1)
        self.assertEqual(make_action('g6', 2).label(), 'g6(matrix)')

    def test_validation_errors(self):
        """Test parámetros inválidos."""
        with self.assertRaisesRegex(ValueError, "unknown action"):
            GroupAction('g10', 2)
        with self.assertRaisesRegex(ValueError, "scaling factor must be positive"):
            GroupAction('g2', 2, eps=0.0)
        with self.assertRaisesRegex(ValueError, "requires an axis"):
            GroupAction('g3', 2, eps=0.1)
        with self.assertRaisesRegex(ValueError, "rotation matrix must be orthogonal"):
            GroupAction('g1', 2, matrix=[[1.0, 0.5], [0.0, 1.0]])
        with self.assertRaisesRegex(ValueError, "not special linear"):
            GroupAction('g6', 2, matrix=[[2.0, 0.0], [0.0, 1.0]])
        with self.assertRaisesRegex(ValueError, "generator must be traceless"):
            special_linear_from_generator(np.eye(2), 0.1)

    def test_domain(self):
        """Test denominador no positivo."""
        a = make_action('g9', 2, eps=0.5)
        self.assertFalse(a.in_domain([2.0, 0.0]))
        self.assertTrue(a.in_domain([1.0, 5.0]))
        with self.assertRaises(ActionDomainError):
            a.apply([2.5, 0.0], 1.0)

    def test_inverse_round_trip(self):
        """Test a⁻¹(a(x, u)) = (x, u) para todas las acciones."""
        for action_id in ACTION_IDS:
            a = make_action(action_id, 2)
            y, v = a.apply(self.x, self.u)
            x_back, u_back = a.inverse().apply(y, v)
            np.testing.assert_allclose(x_back, self.x, atol=1e-12)
            self.assertAlmostEqual(u_back, self.u, places=12)

    def test_group_law(self):
        """Test a(ε)∘a(δ) = a(ε+δ) en el parámetro."""
        for action_id in ('g2', 'g3', 'g4', 'g5', 'g7', 'g8', 'g9'):
            a = make_action(action_id, 2, eps=0.2 if action_id != 'g2' else 1.5)
            b = make_action(action_id, 2, eps=0.1 if action_id != 'g2' else 0.5)
            y, v = a.apply(*b.apply(self.x, self.u))
            y_c, v_c = compose(a, b).apply(self.x, self.u)
            np.testing.assert_allclose(y, y_c, atol=1e-12)
            self.assertAlmostEqual(v, v_c, places=12)

    def test_matrix_composition(self):
        """Test composición de rotaciones y de matrices de SL(n)."""
        a = rotation_in_plane(2, 0, 1, 0.3)
        b = rotation_in_plane(2, 0, 1, 0.2)
        np.testing.assert_allclose(compose(a, b).matrix_array,
                                   rotation_in_plane(2, 0, 1, 0.5).matrix_array, atol=1e-12)
        stretch = compose(diagonal_stretch(2, 0, 1, 2.0), diagonal_stretch(2, 0, 1, 1.5))
        np.testing.assert_allclose(np.diag(stretch.matrix_array), [1.0 / 3.0, 3.0])

    def test_transport_of_translation(self):
        """Test transporte de g8: v(y) = u(y − εe_1)."""
        u = quadratic_field(2)
        v = make_action('g8', 2, eps=0.2).transport(u)
        y = np.array([1.0, 2.0])
        self.assertAlmostEqual(v.value(y), u.value(y - np.array([0.2, 0.0])))
        np.testing.assert_allclose(v.hessian(y), np.eye(2), atol=1e-12)

    def test_listed_actions(self):
        """Test tabla de acciones por caso de p."""
        self.assertEqual(listed_actions(2, 3), ['g1', 'g2', 'g3'])
        self.assertEqual(listed_actions(2, -3), ['g1', 'g3', 'g6', 'g7', 'g8', 'g9'])
        self.assertEqual(listed_actions(1, 2), ['g2', 'g3'])
        self.assertEqual(listed_actions(2, "5/2"), ['g1', 'g3'])
        self.assertEqual(body_classification(2, 1), ['rotation', 'translation'])
        self.assertEqual(body_classification(2, -3), ['rotation', 'scaling', 'centro-affine'])


class TestInfinitesimalGenerators(unittest.TestCase):
    """Tests para los generadores infinitesimales de g1..g9."""

    def test_listed_generators_are_symmetries(self):
        """Test que cada acción listada satisface el sistema determinante."""
        for p in suite_exponents(2):
            for action_id in listed_actions(2, p):
                v = infinitesimal_generator(action_id, 2, axis=0)
                self.assertTrue(determining_system(v, 2, p).is_satisfied(),
                                f"{action_id} con p={p}")

    def test_unlisted_generators_fail_at_generic_exponent(self):
        """Test controles negativos simbólicos con p = 5/2."""
        for action_id in ('g2', 'g4', 'g5', 'g6', 'g7', 'g8', 'g9'):
            v = infinitesimal_generator(action_id, 2, axis=0)
            self.assertFalse(determining_system(v, 2, "5/2").is_satisfied(), action_id)

    def test_generator_is_derivative_of_action(self):
        """Test d/dε de la acción en la identidad contra el generador."""
        x, u, h = np.array([0.3, -0.6]), 1.3, 1e-6
        values = {'x1': x[0], 'x2': x[1], 'u': u}
        for action_id in ACTION_IDS:
            identity = 1.0 if action_id == 'g2' else 0.0
            plus = make_action(action_id, 2, eps=identity + h).apply(x, u)
            minus = make_action(action_id, 2, eps=identity - h).apply(x, u)
            d_x = (plus[0] - minus[0]) / (2 * h)
            d_u = (plus[1] - minus[1]) / (2 * h)
            v = infinitesimal_generator(action_id, 2, axis=0)
            xi = [float(c.evaluate(values)) for c in v.xi]
            phi = float(v.phi.evaluate(values))
            np.testing.assert_allclose(d_x, xi, atol=1e-7, err_msg=action_id)
            self.assertAlmostEqual(d_u, phi, places=7, msg=action_id)


class TestBodyTransforms(unittest.TestCase):
    """Tests para la resolución en transformaciones de cuerpos."""

    def test_kinds(self):
        """Test tipo de resolución de cada acción."""
        self.assertEqual(resolve(make_action('g2', 2)).kind, 'scaling')
        self.assertEqual(resolve(make_action('g4', 2)).kind, 'translation')
        self.assertEqual(resolve(make_action('g8', 2)).kind, 'centro-affine')
        self.assertEqual([t.kind for t in resolve(make_action('g6', 2))],
                         ['rotation', 'scaling', 'rotation'])

    def test_g7_factors_are_unimodular(self):
        """Test Πk = 1 para el escalamiento anisótropo."""
        factors = scaling_factors(make_action('g7', 3, eps=0.7))
        self.assertAlmostEqual(math.prod(factors), 1.0, places=12)
        self.assertAlmostEqual(factors[0], math.exp(-0.7 * 3 / 4), places=12)

    def test_g6_composition_matches_inverse_transpose(self):
        """Test Q, Λ⁻¹, P compuestos = diag(A^{−T}, 1)."""
        a = make_action('g6', 3, eps=0.6)
        M, b = compose_transforms(resolve(a))
        expected, _ = body_matrix(a)
        np.testing.assert_allclose(M, expected, atol=1e-10)
        np.testing.assert_allclose(b, 0.0)

    def test_translation_signs(self):
        """Test traslación derivada y la enunciada con signo opuesto."""
        g4 = make_action('g4', 2, eps=0.5)
        np.testing.assert_allclose(resolve(g4).vector, [0.0, 0.0, -0.5])
        np.testing.assert_allclose(stated_translation(g4), [0.0, 0.0, 0.5])
        g5 = make_action('g5', 2, eps=0.5, axis=1)
        np.testing.assert_allclose(resolve(g5).vector, [0.0, 0.5, 0.0])

    def test_uniform_scaling_commutes(self):
        """Test conmutación de escalamiento y rotación."""
        R, _ = body_matrix(make_action('g3', 2, eps=0.4))
        self.assertTrue(scaling_commutes_with_rotation(2.0, R))
        self.assertFalse(scaling_commutes_with_rotation([1.0, 2.0, 3.0], R))


class TestSupportIdentities(unittest.TestCase):
    """Tests para las formas cerradas de funciones soporte."""

    def setUp(self):
        """Configuración inicial para cada test."""
        rng = np.random.default_rng(3)
        Y = rng.standard_normal((25, 3))
        self.directions = Y / np.linalg.norm(Y, axis=1)[:, None]
        self.A = np.array([[1.2, 0.0, 0.3], [0.0, 0.8, 0.1], [0.2, 0.0, 1.5]])
        self.h1 = ellipsoid_support(self.A)
        c, s = math.cos(0.4), math.sin(0.4)
        self.params = {
            '4.1': {'matrix': np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])},
            '4.2': {'factors': [1.5, 0.7, 2.0]},
            '5.1': {'vector': [0.1, -0.3, 0.5]},
            '6.2': {'eps': 0.3, 'axis': 1},
            '6.3': {'eps': 0.3, 'axis': 0},
        }

    def test_shear_example(self):
        """Test q(Y)² = 5/2 para el cizallamiento H con ε = 1."""
        Y = np.array([1.0, 0.0, 1.0]) / np.sqrt(2.0)
        q = support_transform('6.2', 1.0, Y, {'eps': 1.0, 'axis': 0})
        self.assertAlmostEqual(q, math.sqrt(2.5), places=12)

    def test_closed_forms_match_oracle(self):
        """Test cada identidad contra |(MA)ᵀY| + ⟨b, Y⟩."""
        for lemma, params in self.params.items():
            M, b = lemma_matrix(lemma, 2, params)
            oracle = ellipsoid_support(M @ self.A, b)
            for Y in self.directions:
                X = Y if lemma == '5.1' else lemma_preimage(lemma, Y, params)
                q = support_transform(lemma, self.h1(X), Y, params)
                self.assertAlmostEqual(q, oracle(Y), places=11, msg=lemma)

    def test_stated_projective_shear_deviates(self):
        """Test la variante enunciada del cizallamiento Q no coincide."""
        params = self.params['6.3']
        M, _ = lemma_matrix('6.3', 2, params)
        oracle = ellipsoid_support(M @ self.A)
        worst = 0.0
        for Y in self.directions:
            X = lemma_preimage('6.3', Y, params)
            q = support_transform('6.3', self.h1(X), Y, params, variant='stated')
            worst = max(worst, abs(q - oracle(Y)))
        self.assertGreater(worst, 1e-3)

    def test_non_unit_direction(self):
        """Test Y no unitario."""
        with self.assertRaisesRegex(ValueError, "Y must be a unit vector"):
            support_transform('4.1', 1.0, [1.0, 1.0, 0.0], self.params['4.1'])


class TestDecomposition(unittest.TestCase):
    """Tests para Jacobi cíclico y la descomposición en SL(n)."""

    def test_jacobi_matches_numpy(self):
        """Test autovalores contra numpy.linalg.eigh."""
        rng = np.random.default_rng(5)
        B = rng.standard_normal((4, 4))
        S = B + B.T
        values, V = jacobi_eigh(S)
        np.testing.assert_allclose(values, np.sort(np.linalg.eigvalsh(S))[::-1], atol=1e-10)
        np.testing.assert_allclose(V.T @ V, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(S @ V, V @ np.diag(values), atol=1e-10)

    def test_jacobi_rejects_asymmetric(self):
        """Test matriz no simétrica."""
        with self.assertRaisesRegex(ValueError, "matrix must be symmetric"):
            jacobi_eigh([[1.0, 2.0], [0.0, 1.0]])

    def test_shear_decomposition(self):
        """Test A = [[1,1],[0,1]] contra la SVD de scipy."""
        A = np.array([[1.0, 1.0], [0.0, 1.0]])
        P, lam, Q = sl_decompose(A)
        np.testing.assert_allclose(lam, svd(A, compute_uv=False), atol=1e-12)
        self.assertAlmostEqual(lam[0], (1.0 + math.sqrt(5.0)) / 2.0, places=12)
        np.testing.assert_allclose(P @ np.diag(lam) @ Q, A, atol=1e-12)

    def test_not_special_linear(self):
        """Test det A ≠ 1."""
        with self.assertRaisesRegex(ValueError, "not special linear"):
            sl_decompose([[2.0, 0.0], [0.0, 1.0]])


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_sl3_decomposition(seed):
    """Test descomposición de matrices aleatorias de SL(3)."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((3, 3))
    if np.linalg.det(A) < 0:
        A[0] = -A[0]
    A = A / np.linalg.det(A) ** (1.0 / 3.0)
    P, lam, Q = sl_decompose(A)
    assert np.allclose(P @ np.diag(lam) @ Q, A, atol=1e-10)
    assert np.allclose(lam, svd(A, compute_uv=False), atol=1e-10)
    assert np.prod(lam) == pytest.approx(1.0, abs=1e-10)
    for R in (P, Q):
        assert np.allclose(R.T @ R, np.eye(3), atol=1e-10)
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-10)
