"""
Módulo de clasificación del álgebra de simetrías.

Construye el ansatz genérico de grado acotado, extrae el sistema lineal
determinante exacto, calcula su núcleo y devuelve una base canónica del
álgebra de Lie, etiquetada por familias de generadores.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

from config import CLASSIFY_CONFIG, CONFIG

from .exact import MPoly, as_rat, base_name, in_span, nullspace, primitive_integer_vector
from .prolongation import VectorFieldAnsatz, determining_system

logger = logging.getLogger(__name__)

FAMILY_TAGS = (
    'rotation',
    'u-scaling',
    'u-translation',
    'u-linear-translation',
    'projective',
    'x-translation',
    'trace-scaling',
    'off-diagonal-affine',
    'mixed',
)


# ============================================================================
# CASOS ESPECIALES Y DIMENSIONES
# ============================================================================

def special_case(n: int, p) -> str:
    """Etiqueta del caso: 'p=n+1', 'p=1', 'p=-n-1' o 'generic'."""
    p = as_rat(p)
    if p == n + 1:
        return 'p=n+1'
    if p == 1:
        return 'p=1'
    if p == -n - 1:
        return 'p=-n-1'
    return 'generic'


def expected_dimension(n: int, p) -> int:
    """Dimensión del álgebra según el recuento de generadores de cada caso."""
    case = special_case(n, p)
    base = n * (n + 1) // 2
    if case == 'p=n+1':
        return base + 1
    if case == 'p=1':
        return base + n + 1
    if case == 'p=-n-1':
        return n * n + 2 * n
    return base


# ============================================================================
# BASE DEL ÁLGEBRA
# ============================================================================

@dataclass(frozen=True)
class LieAlgebraBasis:
    """
    Base canónica del álgebra de simetrías dentro del ansatz.

    vectors son vectores enteros primitivos sobre las incógnitas del ansatz;
    generators son los campos concretos correspondientes.
    """
    n: int
    p: Fraction
    degree: int
    generators: Tuple[VectorFieldAnsatz, ...]
    vectors: Tuple[Tuple[int, ...], ...]
    tags: Tuple[str, ...] = ()
    rows: int = 0
    rank: int = 0
    unknowns: int = 0
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def tag_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for tag in self.tags:
            counts[tag] = counts.get(tag, 0) + 1
        return dict(sorted(counts.items()))

    def to_dict(self) -> Dict[str, Any]:
        """Representación serializable con coeficientes enteros exactos."""
        return {
            'n': self.n,
            'p': self.p,
            'case': special_case(self.n, self.p),
            'ansatz_degree': self.degree,
            'dimension': self.dimension,
            'expected_dimension': expected_dimension(self.n, self.p),
            'linear_system': {'rows': self.rows, 'unknowns': self.unknowns, 'rank': self.rank},
            'generators': [
                {'field': g.render(), 'tag': tag, 'coefficients': list(vec)}
                for g, tag, vec in zip(self.generators, self.tags or ('',) * self.dimension,
                                       self.vectors)
            ],
            'tag_counts': self.tag_counts(),
            'checks': dict(self.checks),
        }


def _canonical_order(vector: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...]]:
    leading = next(i for i, v in enumerate(vector) if v)
    return (leading, vector)


def classify(n: int, p, ansatz_degree: int = CLASSIFY_CONFIG['ANSATZ_DEGREE']) -> LieAlgebraBasis:
    """
    Álgebra de simetrías de la ecuación proyectada dentro del ansatz de grado acotado.

    Args:
        n: Dimensión, n ≥ 1
        p: Exponente racional (Fraction, int o cadena "a/b")
        ansatz_degree: Grado total máximo de ξ^i y φ

    Returns:
        LieAlgebraBasis etiquetada con match_families

    Raises:
        ValueError: n < 1 o ansatz_degree < 2
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if ansatz_degree < CLASSIFY_CONFIG['MIN_ANSATZ_DEGREE']:
        raise ValueError("ansatz cannot contain paper generators")
    p = as_rat(p)
    logger.info(f"Clasificando n={n}, p={p}, grado={ansatz_degree}")

    generic = VectorFieldAnsatz.generic(n, ansatz_degree)
    system = determining_system(generic, n, p)
    matrix = system.linear_system()
    kernel = nullspace(matrix)
    rank = matrix.cols - len(kernel)
    logger.info(f"Sistema determinante ensamblado: {matrix.shape[0]} filas, rango {rank}")

    vectors = sorted((primitive_integer_vector(v) for v in kernel), key=_canonical_order)
    generators = tuple(generic.instantiate(v) for v in vectors)

    for g in generators:
        if not determining_system(g, n, p).is_satisfied():
            raise RuntimeError(f"generator fails its determining system: {g.render()}")

    checks: Dict[str, bool] = {}
    if special_case(n, p) == 'p=-n-1':
        checks['trace_constraint'] = all(_trace_constraint_holds(g) for g in generators)
        if not checks['trace_constraint']:
            logger.error("La restricción (n+1)b = tr A no emergió del núcleo")

    basis = LieAlgebraBasis(n, p, ansatz_degree, generators, tuple(vectors),
                            rows=matrix.shape[0], rank=rank, unknowns=matrix.cols, checks=checks)
    defects = closure_defects(basis)
    if defects:
        logger.error(f"El corchete sale del álgebra en los pares {defects}")
    basis = replace(basis, checks={**checks, 'closure': not defects})
    return match_families(basis)


def _linear_coefficients(v: VectorFieldAnsatz) -> Tuple[List[List[Fraction]], Fraction]:
    xs = [base_name(i + 1) for i in range(v.n)]
    A = [[component.coefficient({x: 1}) for x in xs] for component in v.xi]
    b = v.phi.coefficient({'u': 1})
    return A, b


def _trace_constraint_holds(v: VectorFieldAnsatz) -> bool:
    A, b = _linear_coefficients(v)
    return (v.n + 1) * b == sum(A[k][k] for k in range(v.n))


# ============================================================================
# FAMILIAS
# ============================================================================

def _single_term(poly: MPoly) -> Optional[Tuple[Dict[str, int], Fraction]]:
    if len(poly) != 1:
        return None
    exponent, coeff = poly.terms()[0]
    powers = {poly.table.names[i]: e for i, e in enumerate(exponent) if e}
    return powers, coeff


def _is_homogeneous_linear_in_x(poly: MPoly, n: int) -> bool:
    xs = {base_name(i + 1) for i in range(n)}
    for exponent, _ in poly.terms():
        used = [(poly.table.names[i], e) for i, e in enumerate(exponent) if e]
        if len(used) != 1 or used[0][1] != 1 or used[0][0] not in xs:
            return False
    return True


def _projective_tag(v: VectorFieldAnsatz) -> bool:
    single = _single_term(v.phi)
    if single is None:
        return False
    powers, c = single
    axes = [name for name in powers if name != 'u']
    if len(axes) != 1 or powers.get('u') != 1 or powers[axes[0]] != 1:
        return False
    table = v.table
    xi_axis = MPoly.variable(table, axes[0])
    pure = [(xi_axis * MPoly.variable(table, base_name(j + 1))).scale(c) for j in range(v.n)]
    if all(a == b for a, b in zip(v.xi, pure)):
        return True
    axis = int(axes[0][1:]) - 1
    shifted = [poly + c if j == axis else poly for j, poly in enumerate(pure)]
    return all(a == b for a, b in zip(v.xi, shifted))


def tag_generator(v: VectorFieldAnsatz) -> str:
    """
    Etiqueta estructural exacta de un generador concreto.

    Formas reconocidas: rotación (A antisimétrica), u∂_u, ∂_u, x^k∂_u,
    proyectivas x^ix^j∂_j (+∂_i) + x^iu∂_u, traslaciones en x,
    escalamiento de traza ((n+1)b = tr A ≠ 0) y afines sin traza.
    """
    n = v.n
    xi_zero = all(c.is_zero() for c in v.xi)
    if xi_zero:
        if v.phi.is_zero():
            return 'mixed'
        if v.phi.degree() == 0:
            return 'u-translation'
        single = _single_term(v.phi)
        if single is not None and single[0] == {'u': 1}:
            return 'u-scaling'
        if _is_homogeneous_linear_in_x(v.phi, n):
            return 'u-linear-translation'
        return 'mixed'

    if v.phi.is_zero() and all(c.degree() <= 0 for c in v.xi):
        return 'x-translation'

    if all(c.is_zero() or _is_homogeneous_linear_in_x(c, n) for c in v.xi):
        A, b = _linear_coefficients(v)
        trace = sum(A[k][k] for k in range(n))
        if v.phi.is_zero():
            if all(A[i][j] == -A[j][i] for i in range(n) for j in range(n)):
                return 'rotation'
            if trace == 0:
                return 'off-diagonal-affine'
            return 'mixed'
        single = _single_term(v.phi)
        diagonal = all(A[i][j] == 0 for i in range(n) for j in range(n) if i != j)
        if single is not None and single[0] == {'u': 1} and diagonal:
            if (n + 1) * b == trace and trace != 0:
                return 'trace-scaling'
        return 'mixed'

    if _projective_tag(v):
        return 'projective'
    return 'mixed'


def match_families(basis: LieAlgebraBasis) -> LieAlgebraBasis:
    """Asigna una FamilyTag a cada generador de la base."""
    tags = tuple(tag_generator(g) for g in basis.generators)
    logger.debug(f"Familias: {tags}")
    return replace(basis, tags=tags)


# ============================================================================
# CORCHETE DE LIE Y PERTENENCIA
# ============================================================================

def _apply_field(v: VectorFieldAnsatz, f: MPoly) -> MPoly:
    result = v.phi * f.diff('u')
    for i in range(v.n):
        result = result + v.xi[i] * f.diff(base_name(i + 1))
    return result


def lie_bracket(v: VectorFieldAnsatz, w: VectorFieldAnsatz) -> VectorFieldAnsatz:
    """Conmutador [v, w] de campos de primer orden: componente c = v(w_c) − w(v_c)."""
    if (v.n, v.degree) != (w.n, w.degree):
        raise ValueError("incompatible variable tables")
    components = [_apply_field(v, b) - _apply_field(w, a)
                  for a, b in zip(v.components(), w.components())]
    return VectorFieldAnsatz(v.n, v.degree, tuple(components[:-1]), components[-1])


def contains_field(basis: LieAlgebraBasis, v: VectorFieldAnsatz) -> bool:
    """Pertenencia racional exacta de un campo concreto al espacio generado por la base."""
    if (v.n, v.degree) != (basis.n, basis.degree):
        raise ValueError("field and basis live on different ansatz tables")
    try:
        vector = v.coefficient_vector()
    except ValueError:
        return False
    return in_span(basis.vectors, vector)


def closure_defects(basis: LieAlgebraBasis) -> List[Tuple[int, int]]:
    """Pares (a, b) cuyo corchete no pertenece al espacio generado por la base."""
    defects = []
    for a in range(basis.dimension):
        for b in range(a + 1, basis.dimension):
            bracket = lie_bracket(basis.generators[a], basis.generators[b])
            if not contains_field(basis, bracket):
                defects.append((a, b))
    return defects


# ============================================================================
# GENERADORES DE REFERENCIA
# ============================================================================

def reference_generators(n: int, p, degree: int = CLASSIFY_CONFIG['ANSATZ_DEGREE']) -> Dict[str, VectorFieldAnsatz]:
    """
    Generadores infinitesimales de referencia para (n, p).

    Rotaciones y proyectivos en todos los casos; u∂_u para p=n+1; ∂_u y x^i∂_u
    para p=1; traslaciones, sl(n), escalamientos de traza y proyectivos sin
    ∂_i para p=−n−1.
    """
    case = special_case(n, p)
    xs = [base_name(i + 1) for i in range(n)]
    zero = ["0"] * n
    fields: Dict[str, VectorFieldAnsatz] = {}

    def add(name: str, xi: Sequence[str], phi: str):
        fields[name] = VectorFieldAnsatz.from_components(n, list(xi), phi, degree)

    for i in range(n):
        for j in range(i + 1, n):
            xi = list(zero)
            xi[i], xi[j] = xs[j], f"-{xs[i]}"
            add(f"rotation_{i + 1}{j + 1}", xi, "0")
    for i in range(n):
        xi = [f"{xs[i]}*{xs[j]}" + (" + 1" if j == i else "") for j in range(n)]
        add(f"projective_{i + 1}", xi, f"{xs[i]}*u")

    if case == 'p=n+1':
        add("u_scaling", zero, "u")
    elif case == 'p=1':
        add("u_translation", zero, "1")
        for i in range(n):
            add(f"u_linear_{i + 1}", zero, xs[i])
    elif case == 'p=-n-1':
        for i in range(n):
            xi = list(zero)
            xi[i] = "1"
            add(f"x_translation_{i + 1}", xi, "0")
            add(f"projective_pure_{i + 1}", [f"{xs[i]}*{xs[j]}" for j in range(n)], f"{xs[i]}*u")
            xi = list(zero)
            xi[i] = f"{n + 1}*{xs[i]}"
            add(f"trace_scaling_{i + 1}", xi, "u")
            for j in range(n):
                if j != i:
                    xi = list(zero)
                    xi[i] = xs[j]
                    add(f"affine_{i + 1}{j + 1}", xi, "0")
    return fields


# ============================================================================
# BARRIDO EN p
# ============================================================================

def _scan_row(args: Tuple[int, Fraction, int]) -> Dict[str, Any]:
    n, p, degree = args
    basis = classify(n, p, degree)
    return {
        'p': p,
        'dimension': basis.dimension,
        'case': special_case(n, p),
        'expected_dimension': expected_dimension(n, p),
    }


def scan(n: int, p_values: Iterable, ansatz_degree: int = CLASSIFY_CONFIG['ANSATZ_DEGREE'],
         parallel: Optional[bool] = None) -> List[Dict[str, Any]]:
    """
    Una clasificación por cada valor distinto de p; filas ordenadas por p.

    Los exponentes se comparan como racionales exactos, así que "2" y "4/2"
    producen una sola fila; la tabla puede tener menos filas que la entrada.

    Args:
        n: Dimensión
        p_values: Exponentes racionales (no vacío)
        ansatz_degree: Grado del ansatz
        parallel: Usa ProcessPoolExecutor; por defecto CONFIG['PARALLEL_PROCESSING']

    Returns:
        Lista de dicts con p, dimension, case y expected_dimension
    """
    values = sorted({as_rat(p) for p in p_values})
    if not values:
        raise ValueError("empty p list")
    if parallel is None:
        parallel = CONFIG['PARALLEL_PROCESSING']
    jobs = [(n, p, ansatz_degree) for p in values]
    if parallel and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=CONFIG['MAX_WORKERS']) as executor:
            rows = list(executor.map(_scan_row, jobs))
    else:
        rows = [_scan_row(job) for job in jobs]
    logger.info(f"Barrido n={n}: {len(rows)} valores de p")
    return rows
