"""
Tests unitarios para el módulo de aritmética exacta.

Ejecutar con:
    pytest tests/test_exact.py -v
"""

import unittest
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

# Agregar src al path
sys.path.append(str(Path(__file__).parent.parent))

from src.exact import (MPoly, RatMatrix, VarTable, as_rat, in_span, monomial_label,
                       mpoly_arith, nullspace, primitive_integer_vector, rank)


class TestVarTable(unittest.TestCase):
    """Tests para la tabla de variables del jet."""

    def setUp(self):
        """Configuración inicial para cada test."""
        self.table = VarTable.jet(2)

    def test_jet_order(self):
        """Test orden x, u, derivadas primeras."""
        self.assertEqual(self.table.index('x1'), 0)
        self.assertEqual(self.table.index('u'), 2)
        self.assertEqual(self.table.index('u_1'), 3)

    def test_roles(self):
        """Test roles de las variables."""
        self.assertEqual(self.table.role('U_1_2'), 'cofactor')
        self.assertEqual(self.table.names_with_role('second'), ['u_1_1', 'u_1_2', 'u_2_2'])
        self.assertEqual(len(self.table.names_with_role('third')), 4)

    def test_unknown_labels(self):
        """Test incógnitas etiquetadas."""
        table = VarTable.jet(1, ['xi1:1', 'phi:u'])
        self.assertEqual(table.names_with_role('unknown'), ['k0', 'k1'])
        self.assertEqual(table.label('k1'), 'phi:u')

    def test_unknown_variable(self):
        """Test variable inexistente."""
        with self.assertRaises(ValueError):
            self.table.index('x9')

    def test_invalid_dimension(self):
        """Test n < 1."""
        with self.assertRaisesRegex(ValueError, "n must be >= 1"):
            VarTable.jet(0)


class TestMPoly(unittest.TestCase):
    """Tests para polinomios multivariados."""

    def setUp(self):
        """Configuración inicial para cada test."""
        self.table = VarTable.jet(1)

    def poly(self, text):
        return MPoly.from_string(self.table, text)

    def test_parse_and_print(self):
        """Test lectura y escritura canónica."""
        self.assertEqual(str(self.poly("(x1 + u)*(x1 - u)")), "x1^2 - u^2")
        self.assertEqual(str(self.poly("3/2*x1")), "3/2*x1")
        self.assertEqual(str(self.poly("x1 - x1")), "0")

    def test_power_notations(self):
        """Test ^ y ** equivalentes."""
        self.assertEqual(self.poly("x1^3"), self.poly("x1**3"))

    def test_unary_minus(self):
        """Test menos unario."""
        self.assertEqual(self.poly("-x1^2 + 1"), 1 - self.poly("x1*x1"))

    def test_division_only_by_integers(self):
        """Test división restringida a literales enteros."""
        with self.assertRaisesRegex(ValueError, "division only by non-zero integer literals"):
            self.poly("x1/u")
        with self.assertRaisesRegex(ValueError, "division only by non-zero integer literals"):
            self.poly("x1/0")

    def test_degree(self):
        """Test grado total y grado del cero."""
        self.assertEqual(self.poly("x1^2*u + u").degree(), 3)
        self.assertEqual(MPoly.zero(self.table).degree(), -1)

    def test_coefficient(self):
        """Test coeficiente de un monomio."""
        p = self.poly("5*x1^2*u - 2/3*u")
        self.assertEqual(p.coefficient({'x1': 2, 'u': 1}), Fraction(5))
        self.assertEqual(p.coefficient({'u': 1}), Fraction(-2, 3))
        self.assertEqual(p.coefficient({'x1': 1}), 0)

    def test_diff(self):
        """Test derivada parcial exacta."""
        p = self.poly("x1^3*u + 2*u^2")
        self.assertEqual(p.diff('x1'), self.poly("3*x1^2*u"))
        self.assertEqual(p.diff('u'), self.poly("x1^3 + 4*u"))
        self.assertTrue(p.diff('u_1').is_zero())

    def test_substitute_and_evaluate(self):
        """Test sustitución parcial y evaluación."""
        p = self.poly("x1^2*u + u")
        self.assertEqual(p.substitute({'x1': 2}), self.poly("5*u"))
        self.assertEqual(p.evaluate({'x1': Fraction(1, 2), 'u': 4}), Fraction(5))
        with self.assertRaisesRegex(ValueError, "missing value for variable u"):
            p.evaluate({'x1': 1})

    def test_coefficient_split(self):
        """Test separación por monomios."""
        table = VarTable.jet(2)
        p = MPoly.from_string(table, "x1*u_1 + x2*u_1 + u_2 + 7")
        split = p.coefficient_split(['u_1', 'u_2'])
        self.assertEqual(split[(('u_1', 1),)], MPoly.from_string(table, "x1 + x2"))
        self.assertEqual(split[(('u_2', 1),)], 1)
        self.assertEqual(split[()], 7)
        self.assertEqual(monomial_label((('u_1', 2),)), "u_1^2")
        self.assertEqual(monomial_label(()), "1")

    def test_named_arithmetic(self):
        """Test operaciones con nombre."""
        a, b = self.poly("x1 + 1"), self.poly("x1 - 1")
        self.assertEqual(mpoly_arith(a, b, 'mul'), self.poly("x1^2 - 1"))
        self.assertEqual(mpoly_arith(a, b, 'sub'), 2)
        with self.assertRaisesRegex(ValueError, "unknown operation"):
            mpoly_arith(a, b, 'div')

    def test_incompatible_tables(self):
        """Test tablas distintas."""
        other = MPoly.variable(VarTable.jet(2), 'x1')
        with self.assertRaises(ValueError):
            self.poly("x1") + other


class TestRatMatrix(unittest.TestCase):
    """Tests para álgebra lineal exacta."""

    def test_nullspace_rref(self):
        """Test base escalonada del núcleo."""
        basis = RatMatrix.from_rows([[1, 2, 3]]).nullspace()
        self.assertEqual(basis, [(-2, 1, 0), (-3, 0, 1)])

    def test_rank_nullity(self):
        """Test rango + nulidad = columnas."""
        m = RatMatrix.from_rows([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]])
        self.assertEqual(rank(m), 2)
        self.assertEqual(len(nullspace(m)), 2)
        for vector in nullspace(m):
            self.assertEqual(m.apply(vector), (0, 0, 0))

    def test_fractional_entries(self):
        """Test entradas racionales."""
        m = RatMatrix.from_rows([["1/2", "1/3"]])
        self.assertEqual(m.nullspace(), [(Fraction(-2, 3), 1)])

    def test_inverse(self):
        """Test inversa exacta."""
        m = RatMatrix.from_rows([[2, 1], [1, 1]])
        self.assertEqual(m @ m.inverse(), RatMatrix.identity(2))
        with self.assertRaisesRegex(ValueError, "singular matrix"):
            RatMatrix.from_rows([[1, 2], [2, 4]]).inverse()

    def test_in_span(self):
        """Test pertenencia al espacio generado."""
        self.assertTrue(in_span([[1, 0, 1], [0, 1, 1]], [2, 3, 5]))
        self.assertFalse(in_span([[1, 0, 1], [0, 1, 1]], [0, 0, 1]))
        self.assertTrue(in_span([], [0, 0]))

    def test_primitive_integer_vector(self):
        """Test normalización a enteros primitivos."""
        self.assertEqual(primitive_integer_vector(["-1/2", "3/4", 0]), (2, -3, 0))
        self.assertEqual(primitive_integer_vector([0, 0]), (0, 0))


def test_as_rat_rejects_floats():
    """Test que los float binarios no se aceptan como racionales."""
    assert as_rat("0.5") == Fraction(1, 2)
    assert as_rat("-3/1") == -3
    with pytest.raises(ValueError, match="invalid rational"):
        as_rat(0.5)


small = st.integers(min_value=-5, max_value=5)


@settings(max_examples=50, deadline=None)
@given(a=small, b=small, c=small, d=small)
def test_product_rule(a, b, c, d):
    """Test regla del producto para la derivada formal."""
    table = VarTable.jet(1)
    f = MPoly.from_string(table, f"({a})*x1^2 + ({b})*u")
    g = MPoly.from_string(table, f"({c})*x1*u + ({d})")
    assert (f * g).diff('x1') == f.diff('x1') * g + f * g.diff('x1')


@settings(max_examples=30, deadline=None)
@given(rows=st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_vectors_are_annihilated(rows):
    """Test que cada vector del núcleo anula la matriz."""
    m = RatMatrix.from_rows(rows)
    basis = m.nullspace()
    assert len(basis) == 4 - m.rank()
    for vector in basis:
        assert all(v == 0 for v in m.apply(vector))
