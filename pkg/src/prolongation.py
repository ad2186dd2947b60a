"""
Módulo de prolongación.

Construye la segunda prolongación pr²v de un generador candidato
v = ξ^i ∂_{x^i} + φ ∂_u, la aplica a

    Φ(x, u⁽²⁾) = det D²u − (1+|x|²)^{−(p+n+1)/2} u^{p−1}

y reduce el resultado módulo la ecuación a restricciones polinomiales:
un grupo U (coeficientes de cada símbolo de cofactor U_ij) y un grupo s
(la parte proporcional a s = (1+|x|²)^{−(p+n+1)/2} u^{p−1}, normalizada
a polinomio multiplicando por (1+|x|²)·u).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

from config import TOLERANCES

from .exact import (MPoly, RatMatrix, VarTable, as_rat, base_name, cofactor_name,
                    first_name, second_name, third_name)
from .geometry import Jet2, rhs_density

logger = logging.getLogger(__name__)


# ============================================================================
# ANSATZ
# ============================================================================

@lru_cache(maxsize=None)
def ansatz_monomials(n: int, degree: int) -> Tuple[Tuple[int, ...], ...]:
    """
    Monomios en (x1..xn, u) de grado total ≤ degree, por grado creciente.

    Cada monomio es un exponente de longitud n+1 (la última entrada es u).
    """
    monomials = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n + 1), d):
            exponent = [0] * (n + 1)
            for k in combo:
                exponent[k] += 1
            monomials.append(tuple(exponent))
    return tuple(monomials)


def _monomial_text(n: int, exponent: Tuple[int, ...]) -> str:
    names = [base_name(i + 1) for i in range(n)] + ['u']
    factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, exponent) if e]
    return "*".join(factors) or "1"


@lru_cache(maxsize=None)
def jet_table(n: int, degree: int) -> VarTable:
    """Tabla compartida por todos los campos de dimensión n y grado degree."""
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = []
    for c in range(n + 1):
        component = f"xi{c + 1}" if c < n else "phi"
        labels += [f"{component}[{_monomial_text(n, m)}]" for m in ansatz_monomials(n, degree)]
    return VarTable.jet(n, labels)


def _ansatz_mpoly(table: VarTable, n: int, exponent: Tuple[int, ...]) -> MPoly:
    powers = {base_name(i + 1): e for i, e in enumerate(exponent[:n]) if e}
    if exponent[n]:
        powers['u'] = exponent[n]
    return MPoly.monomial(table, powers)


@dataclass(frozen=True)
class VectorFieldAnsatz:
    """
    Generador v = ξ^i ∂_{x^i} + φ ∂_u con componentes polinomiales en (x, u).

    Las componentes pueden contener incógnitas k0, k1, ... (ansatz genérico)
    o ser concretas. Todas viven sobre jet_table(n, degree).

    Example:
        >>> v = VectorFieldAnsatz.from_components(2, ["x1^2 + 1", "x1*x2"], "x1*u")
        >>> v.render()
        '(x1^2 + 1) d/dx1 + x1*x2 d/dx2 + x1*u d/du'
    """
    n: int
    degree: int
    xi: Tuple[MPoly, ...]
    phi: MPoly

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if len(self.xi) != self.n:
            raise ValueError("xi must have n components")

    @property
    def table(self) -> VarTable:
        return self.phi.table

    def components(self) -> Tuple[MPoly, ...]:
        return self.xi + (self.phi,)

    # ------------------------------------------------------------------
    # Constructores
    # ------------------------------------------------------------------

    @classmethod
    def generic(cls, n: int, degree: int = 3) -> 'VectorFieldAnsatz':
        """Ansatz con una incógnita por cada (componente, monomio)."""
        return _generic_ansatz(n, degree)

    @classmethod
    def zero(cls, n: int, degree: int = 3) -> 'VectorFieldAnsatz':
        table = jet_table(n, degree)
        return cls(n, degree, tuple(MPoly.zero(table) for _ in range(n)), MPoly.zero(table))

    @classmethod
    def from_components(cls, n: int, xi: Sequence[Union[str, MPoly]],
                        phi: Union[str, MPoly], degree: int = 3) -> 'VectorFieldAnsatz':
        """
        Construye un campo concreto a partir de texto o de MPoly.

        Raises:
            ValueError: si aparece una variable distinta de x, u o se excede el grado
        """
        table = jet_table(n, degree)

        def convert(component):
            poly = MPoly.from_string(table, component) if isinstance(component, str) else component
            if poly.table != table:
                raise ValueError("incompatible variable tables")
            allowed = set(table.names_with_role('base', 'dependent'))
            stray = [name for name in poly.variables() if name not in allowed]
            if stray:
                raise ValueError(f"vector field components may only use x and u, found {stray}")
            if poly.degree() > degree:
                raise ValueError(f"component degree {poly.degree()} exceeds ansatz degree {degree}")
            return poly

        if len(xi) != n:
            raise ValueError("xi must have n components")
        return cls(n, degree, tuple(convert(c) for c in xi), convert(phi))

    @classmethod
    def from_vector(cls, n: int, degree: int, vector: Sequence) -> 'VectorFieldAnsatz':
        return cls.generic(n, degree).instantiate(vector)

    # ------------------------------------------------------------------
    # Coeficientes
    # ------------------------------------------------------------------

    def unknowns(self) -> List[str]:
        used = set()
        for component in self.components():
            used.update(component.variables())
        return [name for name in self.table.names_with_role('unknown') if name in used]

    def is_concrete(self) -> bool:
        return not self.unknowns()

    def instantiate(self, vector: Sequence) -> 'VectorFieldAnsatz':
        """Sustituye las incógnitas k_m por vector[m]."""
        names = self.table.names_with_role('unknown')
        if len(vector) != len(names):
            raise ValueError(f"expected {len(names)} coefficients, got {len(vector)}")
        values = {name: as_rat(value) for name, value in zip(names, vector)}
        return VectorFieldAnsatz(self.n, self.degree,
                                 tuple(c.substitute(values) for c in self.xi),
                                 self.phi.substitute(values))

    def coefficient_vector(self) -> Tuple[Fraction, ...]:
        """
        Coordenadas de un campo concreto en la base (componente, monomio del ansatz).

        Raises:
            ValueError: si el campo no es concreto o tiene monomios fuera del ansatz
        """
        if not self.is_concrete():
            raise ValueError("coefficient vector requires a concrete field")
        monomials = ansatz_monomials(self.n, self.degree)
        xu = [base_name(i + 1) for i in range(self.n)] + ['u']
        vector: List[Fraction] = []
        for component in self.components():
            known = 0
            for exponent in monomials:
                coeff = component.coefficient(dict(zip(xu, exponent)))
                vector.append(coeff)
                known += 1 if coeff else 0
            if known != len(component):
                raise ValueError("field has monomials outside the ansatz")
        return tuple(vector)

    def __add__(self, other: 'VectorFieldAnsatz') -> 'VectorFieldAnsatz':
        if (self.n, self.degree) != (other.n, other.degree):
            raise ValueError("incompatible variable tables")
        return VectorFieldAnsatz(self.n, self.degree,
                                 tuple(a + b for a, b in zip(self.xi, other.xi)),
                                 self.phi + other.phi)

    def scale(self, factor) -> 'VectorFieldAnsatz':
        return VectorFieldAnsatz(self.n, self.degree,
                                 tuple(c.scale(factor) for c in self.xi),
                                 self.phi.scale(factor))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components())

    def render(self) -> str:
        """Campo legible, por ejemplo '(x1^2 + 1) d/dx1 + x1*x2 d/dx2 + x1*u d/du'."""
        targets = [f"d/d{base_name(i + 1)}" for i in range(self.n)] + ["d/du"]
        pieces = []
        for component, target in zip(self.components(), targets):
            if component.is_zero():
                continue
            text = str(component)
            if text == "1":
                pieces.append(target)
            elif text == "-1":
                pieces.append(f"-{target}")
            elif len(component) == 1:
                pieces.append(f"{text} {target}")
            else:
                pieces.append(f"({text}) {target}")
        if not pieces:
            return "0"
        rendered = pieces[0]
        for piece in pieces[1:]:
            rendered += f" - {piece[1:]}" if piece.startswith('-') else f" + {piece}"
        return rendered

    def __str__(self) -> str:
        return self.render()


@lru_cache(maxsize=None)
def _generic_ansatz(n: int, degree: int) -> VectorFieldAnsatz:
    table = jet_table(n, degree)
    monomials = ansatz_monomials(n, degree)
    unknowns = table.names_with_role('unknown')
    components = []
    for c in range(n + 1):
        poly = MPoly.zero(table)
        for m, exponent in enumerate(monomials):
            symbol = MPoly.variable(table, unknowns[c * len(monomials) + m])
            poly = poly + symbol * _ansatz_mpoly(table, n, exponent)
        components.append(poly)
    return VectorFieldAnsatz(n, degree, tuple(components[:n]), components[n])


# ============================================================================
# PROLONGACIÓN
# ============================================================================

def total_derivative(f: MPoly, i: int, n: int) -> MPoly:
    """
    Derivada total D_i sobre el jet: ∂_{x^i} + u_i ∂_u + u_{ik} ∂_{u_k} + u_{ikl} ∂_{u_kl}.
    """
    table = f.table
    present = set(f.variables())
    result = f.diff(base_name(i)) if base_name(i) in present else MPoly.zero(table)
    if 'u' in present:
        result = result + MPoly.variable(table, first_name(i)) * f.diff('u')
    for k in range(1, n + 1):
        name = first_name(k)
        if name in present:
            result = result + MPoly.variable(table, second_name(i, k)) * f.diff(name)
    for k, l in combinations_with_replacement(range(1, n + 1), 2):
        name = second_name(k, l)
        if name in present:
            result = result + MPoly.variable(table, third_name(i, k, l)) * f.diff(name)
    if any(table.role(name) == 'third' for name in present):
        raise ValueError("total derivative beyond third order is not supported")
    return result


@dataclass(frozen=True)
class ProlongedCoeffs:
    """Coeficientes φ^i y φ^{ij} (i ≤ j) de la segunda prolongación."""
    n: int
    phi_i: Tuple[MPoly, ...]
    phi_ij: Dict[Tuple[int, int], MPoly]

    def first(self, i: int) -> MPoly:
        return self.phi_i[i - 1]

    def second(self, i: int, j: int) -> MPoly:
        return self.phi_ij[(min(i, j), max(i, j))]


def prolong2(v: VectorFieldAnsatz) -> ProlongedCoeffs:
    """
    Segunda prolongación con derivadas totales genuinas:
    φ^i = D_i(φ − ξ^a u_a) + ξ^a u_{ia},  φ^{ij} = D_iD_j(φ − ξ^a u_a) + ξ^a u_{ija}.

    Returns:
        ProlongedCoeffs sin símbolos de tercer orden

    Raises:
        RuntimeError: si sobreviven símbolos u_{ija}
    """
    return _prolong2_cached(v)


@lru_cache(maxsize=64)
def _prolong2_cached(v: VectorFieldAnsatz) -> ProlongedCoeffs:
    n, table = v.n, v.table
    characteristic = v.phi
    for a in range(1, n + 1):
        characteristic = characteristic - v.xi[a - 1] * MPoly.variable(table, first_name(a))

    d_char = [total_derivative(characteristic, i, n) for i in range(1, n + 1)]
    phi_i = []
    for i in range(1, n + 1):
        coeff = d_char[i - 1]
        for a in range(1, n + 1):
            coeff = coeff + v.xi[a - 1] * MPoly.variable(table, second_name(i, a))
        phi_i.append(coeff)

    third = set(table.names_with_role('third'))
    phi_ij = {}
    for i, j in combinations_with_replacement(range(1, n + 1), 2):
        coeff = total_derivative(d_char[i - 1], j, n)
        for a in range(1, n + 1):
            coeff = coeff + v.xi[a - 1] * MPoly.variable(table, third_name(i, j, a))
        if third.intersection(coeff.variables()):
            raise RuntimeError("third-derivative symbols survived prolongation")
        phi_ij[(i, j)] = coeff
    logger.debug(f"Prolongación n={n}: {sum(len(c) for c in phi_ij.values())} términos de segundo orden")
    return ProlongedCoeffs(n, tuple(phi_i), phi_ij)


# ============================================================================
# REDUCCIÓN POR LA IDENTIDAD DEL COFACTOR
# ============================================================================

@lru_cache(maxsize=None)
def _representation_operator(n: int):
    """
    Operador K: P ↦ coeficientes de u_kl en (PH + HPᵀ)_ij, y su inversa por izquierda.

    Filas: pares ((i, j), (k, l)) con i ≤ j, k ≤ l. Columnas: entradas P_ab.
    """
    pairs = list(combinations_with_replacement(range(1, n + 1), 2))
    columns = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    col_index = {c: m for m, c in enumerate(columns)}
    rows = []
    for i, j in pairs:
        for k, l in pairs:
            row = [0] * len(columns)
            for a in range(1, n + 1):
                if tuple(sorted((a, j))) == (k, l):
                    row[col_index[(i, a)]] += 1
                if tuple(sorted((i, a))) == (k, l):
                    row[col_index[(j, a)]] += 1
            rows.append(row)
    k_matrix = RatMatrix.from_rows(rows)
    k_t = k_matrix.transpose()
    left_inverse = (k_t @ k_matrix).inverse() @ k_t
    return pairs, columns, k_matrix, left_inverse


def cofactor_reduction(coeffs: ProlongedCoeffs) -> Tuple[Dict[Tuple[int, int], MPoly], MPoly]:
    """
    Separa cada φ^{ij} en su parte libre de u_kl (η^{ij}) y su parte lineal en u_kl.

    La parte lineal se escribe como (PH + HPᵀ)_ij resolviendo exactamente por
    la inversa por izquierda del operador K; con u_ik U^{kj} = δ_ij det D²u su
    contracción con U vale 2·tr(P)·s.

    Returns:
        (eta, trace_p): η^{ij} para i ≤ j y tr(P)

    Raises:
        ValueError: si la parte de segundo orden no es representable
    """
    n = coeffs.n
    pairs, columns, k_matrix, left_inverse = _representation_operator(n)
    any_coeff = next(iter(coeffs.phi_ij.values()))
    table = any_coeff.table
    seconds = [second_name(k, l) for k, l in pairs]

    eta: Dict[Tuple[int, int], MPoly] = {}
    targets: List[MPoly] = []
    for i, j in pairs:
        split = coeffs.second(i, j).coefficient_split(seconds)
        for key in split:
            if sum(power for _, power in key) > 1:
                raise ValueError("second-order part is not linear in the Hessian")
        eta[(i, j)] = split.get((), MPoly.zero(table))
        for k, l in pairs:
            targets.append(split.get(((second_name(k, l), 1),), MPoly.zero(table)))

    p_entries = []
    for row in left_inverse.rows:
        entry = MPoly.zero(table)
        for weight, target in zip(row, targets):
            if weight and not target.is_zero():
                entry = entry + target.scale(weight)
        p_entries.append(entry)

    for row, target in zip(k_matrix.rows, targets):
        rebuilt = MPoly.zero(table)
        for weight, entry in zip(row, p_entries):
            if weight:
                rebuilt = rebuilt + entry.scale(weight)
        if rebuilt != target:
            raise ValueError("second-order part not representable as PH + HP^T")

    trace_p = MPoly.zero(table)
    for (a, b), entry in zip(columns, p_entries):
        if a == b:
            trace_p = trace_p + entry
    return eta, trace_p


# ============================================================================
# SISTEMA DETERMINANTE
# ============================================================================

def _radius_poly(table: VarTable, n: int) -> MPoly:
    one_plus = MPoly.constant(table, 1)
    for i in range(1, n + 1):
        x = MPoly.variable(table, base_name(i))
        one_plus = one_plus + x * x
    return one_plus


@lru_cache(maxsize=64)
def _determining_pieces(v: VectorFieldAnsatz):
    """Piezas independientes de p: grupo U y los tres términos del grupo s."""
    n, table = v.n, v.table
    eta, trace_p = cofactor_reduction(prolong2(v))

    contracted = MPoly.zero(table)
    for (i, j), coeff in eta.items():
        weight = 1 if i == j else 2
        contracted = contracted + coeff.scale(weight) * MPoly.variable(table, cofactor_name(i, j))
    cofactors = table.names_with_role('cofactor')
    split = contracted.coefficient_split(cofactors)
    u_group = {name: split.get(((name, 1),), MPoly.zero(table)) for name in cofactors}

    u = MPoly.variable(table, 'u')
    weight = _radius_poly(table, n)
    x_dot_xi = MPoly.zero(table)
    for i in range(1, n + 1):
        x_dot_xi = x_dot_xi + v.xi[i - 1] * MPoly.variable(table, base_name(i))
    t1 = u * x_dot_xi
    t2 = weight * v.phi
    t3 = (weight * u * trace_p).scale(2)
    return u_group, t1, t2, t3


@dataclass(frozen=True)
class DeterminingSystem:
    """
    Restricciones determinantes de un generador.

    u_group: símbolo de cofactor → polinomio en (x, u, u_k) que debe anularse.
    s_group: polinomio S con pr²vΦ = Σ u_group·U + S·s/((1+|x|²)u) sobre Φ = 0.
    """
    n: int
    p: Fraction
    u_group: Dict[str, MPoly]
    s_group: MPoly

    @property
    def table(self) -> VarTable:
        return self.s_group.table

    def constraints(self) -> List[MPoly]:
        """Polinomios no nulos que deben anularse idénticamente."""
        polys = list(self.u_group.values()) + [self.s_group]
        return [poly for poly in polys if not poly.is_zero()]

    def is_satisfied(self) -> bool:
        return not self.constraints()

    def unknowns(self) -> List[str]:
        used = set()
        for poly in self.constraints():
            used.update(poly.variables())
        return [name for name in self.table.names_with_role('unknown') if name in used]

    def substitute(self, values) -> 'DeterminingSystem':
        return DeterminingSystem(self.n, self.p,
                                 {k: c.substitute(values) for k, c in self.u_group.items()},
                                 self.s_group.substitute(values))

    def __add__(self, other: 'DeterminingSystem') -> 'DeterminingSystem':
        if (self.n, self.p) != (other.n, other.p):
            raise ValueError("systems for different (n, p) cannot be added")
        return DeterminingSystem(self.n, self.p,
                                 {k: c + other.u_group[k] for k, c in self.u_group.items()},
                                 self.s_group + other.s_group)

    def linear_system(self, unknowns: Optional[Sequence[str]] = None) -> RatMatrix:
        """
        Sistema lineal exacto sobre las incógnitas.

        Cada restricción se separa por monomios en las variables que no son
        incógnitas; cada coeficiente es una forma lineal homogénea y da una fila.

        Raises:
            ValueError: si algún coeficiente no es lineal homogéneo en las incógnitas
        """
        table = self.table
        names = list(unknowns) if unknowns is not None else table.names_with_role('unknown')
        position = {name: m for m, name in enumerate(names)}
        others = [name for name, role in zip(table.names, table.roles) if role != 'unknown']
        rows = []
        for poly in self.constraints():
            for coeff in poly.coefficient_split(others).values():
                row = [Fraction(0)] * len(names)
                for exponent, value in coeff.terms():
                    used = [(table.names[i], e) for i, e in enumerate(exponent) if e]
                    if len(used) != 1 or used[0][1] != 1 or used[0][0] not in position:
                        raise ValueError("constraint is not homogeneous linear in the unknowns")
                    row[position[used[0][0]]] += value
                rows.append(row)
        logger.debug(f"Sistema lineal: {len(rows)} filas, {len(names)} incógnitas")
        return RatMatrix.from_rows(rows, len(names))

    def residual(self, x: Sequence[float], u: float, grad: Sequence[float],
                 hess: np.ndarray) -> float:
        """
        Evalúa Σ u_group·cof(H) + S·s/((1+|x|²)u) en punto flotante.

        Requiere un sistema sin incógnitas; cof(H) = det(H)·H⁻¹.
        """
        if self.unknowns():
            raise ValueError("numeric residual requires a concrete system")
        x = np.asarray(x, dtype=float)
        hess = np.asarray(hess, dtype=float)
        values = {base_name(i + 1): float(x[i]) for i in range(self.n)}
        values['u'] = float(u)
        values.update({first_name(k + 1): float(grad[k]) for k in range(self.n)})
        cof = np.linalg.det(hess) * np.linalg.inv(hess)
        total = 0.0
        for i, j in combinations_with_replacement(range(1, self.n + 1), 2):
            poly = self.u_group[cofactor_name(i, j)]
            if not poly.is_zero():
                total += float(poly.evaluate(values)) * cof[i - 1, j - 1]
        weight = 1.0 + float(x @ x)
        s = rhs_density(self.p, self.n, weight, float(u))
        total += float(self.s_group.evaluate(values)) * s / (weight * float(u))
        return total


def determining_system(v: VectorFieldAnsatz, n: int, p) -> DeterminingSystem:
    """
    Sistema determinante reducido de v para la ecuación con exponente p.

    S = (p+n+1)·u·Σξ^i x^i + (1−p)(1+|x|²)φ + 2(1+|x|²)u·tr(P).

    Args:
        v: Generador (genérico o concreto)
        n: Dimensión, n ≥ 1
        p: Exponente racional

    Returns:
        DeterminingSystem
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if v.n != n:
        raise ValueError(f"field dimension {v.n} does not match n={n}")
    p = as_rat(p)
    u_group, t1, t2, t3 = _determining_pieces(v)
    s_group = t1.scale(p + n + 1) + t2.scale(1 - p) + t3
    return DeterminingSystem(n, p, dict(u_group), s_group)


# ============================================================================
# ORÁCULO NUMÉRICO
# ============================================================================

def numeric_prolong_eval(v: VectorFieldAnsatz, n: int, p, x: Sequence[float], u: float,
                         grad: Sequence[float], hess: np.ndarray) -> float:
    """
    Evalúa ξ^i𝒳^i + φ𝒰 + φ^{ij}U^{ij} con la fórmula expandida de φ^{ij}
    y el cofactor verdadero de hess, de forma independiente del pipeline simbólico.

    Raises:
        ValueError: muestra fuera de la variedad (det hess ≠ s) o u ≤ 0
    """
    if not v.is_concrete():
        raise ValueError("numeric evaluation requires a concrete field")
    if v.n != n:
        raise ValueError(f"field dimension {v.n} does not match n={n}")
    x = np.asarray(x, dtype=float)
    grad = np.asarray(grad, dtype=float)
    hess = np.asarray(hess, dtype=float)
    if u <= 0:
        raise ValueError("positivity violated")
    if np.max(np.abs(hess - hess.T)) > TOLERANCES['SYMMETRIC'] * max(1.0, np.max(np.abs(hess))):
        raise ValueError("hessian must be symmetric")

    p = as_rat(p)
    weight = 1.0 + float(x @ x)
    s = rhs_density(p, n, weight, u)
    det = float(np.linalg.det(hess))
    if abs(det - s) > TOLERANCES['ON_MANIFOLD'] * abs(s):
        raise ValueError("off-manifold sample")

    size = n + 1
    point = {base_name(i + 1): Jet2.variable(x[i], i, size) for i in range(n)}
    point['u'] = Jet2.variable(u, n, size)
    xi = [_as_jet(c.evaluate(point), size) for c in v.xi]
    phi = _as_jet(v.phi.evaluate(point), size)
    iu = n  # índice de u en las derivadas

    cof = det * np.linalg.inv(hess)
    pf = float(p)
    total = 0.0
    for i in range(n):
        total += xi[i].value * (pf + n + 1) * x[i] * s / weight
    total += phi.value * (1.0 - pf) * s / u

    for i in range(n):
        for j in range(n):
            coeff = (phi.hess[i, j] + phi.hess[i, iu] * grad[j]
                     + (phi.hess[iu, j] + phi.hess[iu, iu] * grad[j]) * grad[i]
                     + phi.grad[iu] * hess[i, j])
            for a in range(n):
                xa = xi[a]
                coeff -= ((xa.hess[i, j] + xa.hess[i, iu] * grad[j])
                          + (xa.hess[iu, j] + xa.hess[iu, iu] * grad[j]) * grad[i]
                          + xa.grad[iu] * hess[i, j]) * grad[a]
                coeff -= (xa.grad[i] + xa.grad[iu] * grad[i]) * hess[j, a]
                coeff -= (xa.grad[j] + xa.grad[iu] * grad[j]) * hess[i, a]
            total += coeff * cof[i, j]
    return float(total)


def _as_jet(value, size: int) -> Jet2:
    return value if isinstance(value, Jet2) else Jet2.constant(float(value), size)


def on_manifold_sample(rng: np.random.Generator, n: int, p, radius: float = 1.0):
    """
    Muestra aleatoria (x, u, grad, hess) con hess SPD y det hess = s exactamente.

    Se toma H = MᵀM + I/10 y se reescala H ← c·H con c = (s/det H)^{1/n}.
    """
    direction = rng.normal(size=n)
    direction /= np.linalg.norm(direction)
    x = direction * radius * rng.uniform() ** (1.0 / n)
    u = float(rng.uniform(0.5, 2.0))
    grad = rng.normal(size=n)
    m = rng.normal(size=(n, n))
    hess = m.T @ m + 0.1 * np.eye(n)
    hess = 0.5 * (hess + hess.T)
    target = rhs_density(as_rat(p), n, 1.0 + float(x @ x), u)
    hess = hess * (target / np.linalg.det(hess)) ** (1.0 / n)
    return x, u, grad, hess
