"""
Tests unitarios para el módulo de prolongación y el sistema determinante.

Ejecutar con:
    pytest tests/test_prolongation.py -v
"""

import unittest
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import sympy as sp

# Agregar src al path
sys.path.append(str(Path(__file__).parent.parent))

from src.exact import MPoly
from src.prolongation import (VectorFieldAnsatz, determining_system, numeric_prolong_eval,
                              on_manifold_sample, prolong2, total_derivative)


class TestVectorFieldAnsatz(unittest.TestCase):
    """Tests para el ansatz de generadores."""

    def test_render(self):
        """Test representación legible."""
        v = VectorFieldAnsatz.from_components(2, ["x1^2 + 1", "x1*x2"], "x1*u")
        self.assertEqual(v.render(), "(x1^2 + 1) d/dx1 + x1*x2 d/dx2 + x1*u d/du")
        rotation = VectorFieldAnsatz.from_components(2, ["x2", "-x1"], "0")
        self.assertEqual(rotation.render(), "x2 d/dx1 - x1 d/dx2")

    def test_generic_unknowns(self):
        """Test una incógnita por componente y monomio."""
        v = VectorFieldAnsatz.generic(1, 2)
        # monomios de grado ≤ 2 en (x1, u): 6, por 2 componentes
        self.assertEqual(len(v.unknowns()), 12)
        self.assertFalse(v.is_concrete())

    def test_coefficient_vector_round_trip(self):
        """Test coordenadas de un campo concreto."""
        v = VectorFieldAnsatz.from_components(1, ["x1^2"], "u", degree=2)
        vector = v.coefficient_vector()
        self.assertEqual(sum(1 for c in vector if c), 2)
        self.assertEqual(VectorFieldAnsatz.from_vector(1, 2, vector).render(), v.render())

    def test_rejects_jet_variables(self):
        """Test componentes con derivadas."""
        with self.assertRaises(ValueError):
            VectorFieldAnsatz.from_components(1, ["u_1"], "0")

    def test_rejects_excess_degree(self):
        """Test grado mayor al del ansatz."""
        with self.assertRaisesRegex(ValueError, "exceeds ansatz degree"):
            VectorFieldAnsatz.from_components(1, ["x1^3"], "0", degree=2)


class TestProlongation(unittest.TestCase):
    """Tests para la segunda prolongación."""

    def test_total_derivative(self):
        """Test D_2 u_1 = u_1_2."""
        v = VectorFieldAnsatz.zero(2)
        u1 = MPoly.variable(v.table, 'u_1')
        self.assertEqual(str(total_derivative(u1, 2, 2)), "u_1_2")

    def test_translation_has_trivial_prolongation(self):
        """Test ∂x1 se prolonga sin términos de segundo orden."""
        v = VectorFieldAnsatz.from_components(2, ["1", "0"], "0")
        coeffs = prolong2(v)
        for poly in coeffs.phi_ij.values():
            self.assertTrue(poly.is_zero())

    def test_u_scaling_prolongation(self):
        """Test φ^{ij} = u_ij para u∂u."""
        v = VectorFieldAnsatz.from_components(2, ["0", "0"], "u")
        coeffs = prolong2(v)
        self.assertEqual(str(coeffs.second(1, 2)), "u_1_2")
        self.assertEqual(str(coeffs.first(2)), "u_2")


class TestDeterminingSystem(unittest.TestCase):
    """Tests para el sistema determinante reducido."""

    def test_rotation_is_symmetry_for_all_p(self):
        """Test rotación en todos los exponentes."""
        v = VectorFieldAnsatz.from_components(2, ["-x2", "x1"], "0")
        for p in ("3", "1", "-3", "5/2", "0"):
            self.assertTrue(determining_system(v, 2, p).is_satisfied())

    def test_u_scaling_only_at_critical_exponent(self):
        """Test u∂u solo con p = n+1."""
        v = VectorFieldAnsatz.from_components(2, ["0", "0"], "u")
        self.assertTrue(determining_system(v, 2, 3).is_satisfied())
        self.assertFalse(determining_system(v, 2, "5/2").is_satisfied())

    def test_translation_only_at_negative_exponent(self):
        """Test ∂x1 solo con p = −n−1."""
        v = VectorFieldAnsatz.from_components(2, ["1", "0"], "0")
        self.assertTrue(determining_system(v, 2, -3).is_satisfied())
        self.assertFalse(determining_system(v, 2, 1).is_satisfied())

    def test_linear_system_shape(self):
        """Test sistema lineal del ansatz genérico."""
        system = determining_system(VectorFieldAnsatz.generic(1, 2), 1, 2)
        matrix = system.linear_system()
        self.assertEqual(matrix.cols, 12)
        self.assertGreater(len(matrix.rows), 0)

    def test_dimension_mismatch(self):
        """Test dimensión del campo distinta de n."""
        v = VectorFieldAnsatz.zero(2)
        with self.assertRaisesRegex(ValueError, "does not match"):
            determining_system(v, 1, 2)


def _sympy_phi_xx(xi, phi, x, u, ux, uxx):
    """Fórmula clásica de φ^{xx} para una variable independiente."""
    return (sp.diff(phi, x, 2) + (2 * sp.diff(phi, x, u) - sp.diff(xi, x, 2)) * ux
            + (sp.diff(phi, u, 2) - 2 * sp.diff(xi, x, u)) * ux ** 2
            - sp.diff(xi, u, 2) * ux ** 3
            + (sp.diff(phi, u) - 2 * sp.diff(xi, x)) * uxx
            - 3 * sp.diff(xi, u) * ux * uxx)


def test_second_prolongation_matches_classical_formula():
    """Test φ^{xx} contra la fórmula clásica calculada con sympy."""
    x, u, ux, uxx = sp.symbols('x u ux uxx')
    xi_text, phi_text = "x1^2*u + x1", "u^2*x1 + 3*u"
    xi = x ** 2 * u + x
    phi = u ** 2 * x + 3 * u
    expected = sp.expand(_sympy_phi_xx(xi, phi, x, u, ux, uxx))

    v = VectorFieldAnsatz.from_components(1, [xi_text], phi_text)
    ours = prolong2(v).second(1, 1)
    for values in [(1, 2, 3, 5), (Fraction(1, 2), -1, 4, Fraction(-2, 3)), (0, 3, -2, 1)]:
        point = dict(zip(['x1', 'u', 'u_1', 'u_1_1'], map(Fraction, values)))
        reference = expected.subs({x: sp.Rational(str(values[0])), u: sp.Rational(str(values[1])),
                                   ux: sp.Rational(str(values[2])), uxx: sp.Rational(str(values[3]))})
        assert ours.evaluate(point) == Fraction(str(reference))


@pytest.mark.parametrize("xi, phi, p", [
    (["-x2", "x1"], "0", "5/2"),
    (["x1^2", "x1*x2"], "x1*u", "3"),
    (["x2*u", "1"], "x1^2 + u", "-3"),
    (["0", "0"], "u", "5/2"),
])
def test_symbolic_residual_matches_numeric_prolongation(xi, phi, p):
    """Test sistema reducido contra la prolongación evaluada numéricamente."""
    rng = np.random.default_rng(7)
    v = VectorFieldAnsatz.from_components(2, xi, phi)
    system = determining_system(v, 2, p)
    for _ in range(5):
        x, u, grad, hess = on_manifold_sample(rng, 2, p, radius=2.0)
        numeric = numeric_prolong_eval(v, 2, p, x, u, grad, hess)
        reduced = system.residual(x, u, grad, hess)
        assert reduced == pytest.approx(numeric, rel=1e-7, abs=1e-9)


def test_symmetry_annihilates_on_manifold():
    """Test pr²vΦ = 0 sobre la variedad para la rotación."""
    rng = np.random.default_rng(11)
    v = VectorFieldAnsatz.from_components(2, ["-x2", "x1"], "0")
    for _ in range(5):
        x, u, grad, hess = on_manifold_sample(rng, 2, 2, radius=3.0)
        assert abs(numeric_prolong_eval(v, 2, 2, x, u, grad, hess)) < 1e-8


def _random_field(rng, n, degree):
    size = len(VectorFieldAnsatz.generic(n, degree).unknowns())
    coefficients = rng.integers(-3, 4, size=size)
    coefficients[rng.random(size) < 0.5] = 0
    return VectorFieldAnsatz.from_vector(n, degree, [int(c) for c in coefficients])


@pytest.mark.parametrize("instance", range(10))
def test_random_fields_match_numeric_prolongation(instance):
    """Test campo aleatorio: sistema reducido contra prolongación numérica en 100 muestras."""
    rng = np.random.default_rng(1000 + instance)
    n = 1 + instance % 2
    p = ["5/2", "3", "-3", "1", "-1/2"][instance % 5]
    v = _random_field(rng, n, degree=2 + instance % 2)
    system = determining_system(v, n, p)
    for _ in range(100):
        x, u, grad, hess = on_manifold_sample(rng, n, p, radius=2.0)
        numeric = numeric_prolong_eval(v, n, p, x, u, grad, hess)
        assert system.residual(x, u, grad, hess) == pytest.approx(numeric, rel=1e-9, abs=1e-12)


def test_determining_system_is_linear():
    """Test el sistema de v₁+v₂ es la suma de los sistemas y escala con v."""
    rng = np.random.default_rng(5)
    v1 = _random_field(rng, 2, 2)
    v2 = _random_field(rng, 2, 2)
    s1, s2 = determining_system(v1, 2, "5/2"), determining_system(v2, 2, "5/2")
    total = determining_system(v1 + v2, 2, "5/2")
    for key, poly in total.u_group.items():
        assert poly == s1.u_group[key] + s2.u_group[key]
    assert total.s_group == s1.s_group + s2.s_group
    assert total == s1 + s2
    assert determining_system(v1.scale(3), 2, "5/2").s_group == s1.s_group.scale(3)
