"""
Módulo de acciones de grupo y su resolución en transformaciones de cuerpos convexos.

Incluye:
- GroupAction: las nueve acciones uniparamétricas g1..g9 como mapas puntuales
  invertibles y como transporte de soluciones (con Jet2 a través del mapa)
- BodyTransform: rotación, escalamiento, traslación o transformación centro-afín
  del cuerpo cuya función soporte corresponde a la solución transportada
- Formas cerradas de las identidades de funciones soporte
- Descomposición A = P·diag(λ)·Q de matrices de SL(n) con Jacobi cíclico
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm

import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

from config import DEFAULT_EPS, SAMPLING, TOLERANCES

from .exact import as_rat, base_name
from .geometry import ScalarField, value_of
from .prolongation import VectorFieldAnsatz

logger = logging.getLogger(__name__)

ACTION_IDS = ('g1', 'g2', 'g3', 'g4', 'g5', 'g6', 'g7', 'g8', 'g9')

# Acciones que actúan sobre un eje x^i
AXIS_ACTIONS = ('g3', 'g5', 'g7', 'g8', 'g9')

# Acciones con matriz propia (rotación de R^n o matriz de SL(n))
MATRIX_ACTIONS = ('g1', 'g6')

# Tipo de transformación de cuerpos en que se resuelve cada acción
RESOLUTION_KINDS = {
    'g1': 'rotation',
    'g2': 'scaling',
    'g3': 'rotation',
    'g4': 'translation',
    'g5': 'translation',
    'g6': 'centro-affine',
    'g7': 'scaling',
    'g8': 'centro-affine',
    'g9': 'centro-affine',
}

BODY_KINDS = ('rotation', 'scaling', 'translation', 'centro-affine')


class ActionDomainError(ValueError):
    """Punto fuera del dominio de una acción (denominador no positivo)."""

    def __init__(self, message: str = "action undefined at point"):
        super().__init__(message)


# ============================================================================
# ACCIÓN DE GRUPO
# ============================================================================

def _linear_image(M: np.ndarray, xs: Sequence[Any]) -> List[Any]:
    """M·x con entradas Jet2 o float, sin pasar por numpy."""
    image = []
    for row in M:
        entry = 0.0
        for coeff, x in zip(row, xs):
            if coeff != 0.0:
                entry = x * float(coeff) + entry
        image.append(entry)
    return image


@dataclass(frozen=True)
class GroupAction:
    """
    Una de las acciones g1..g9 con sus parámetros.

    Args:
        id: Identificador 'g1'..'g9'
        n: Dimensión de la carta
        eps: Parámetro del grupo (factor multiplicativo para g2)
        axis: Eje i (base 0) para g3, g5, g7, g8, g9
        matrix: R ∈ SO(n) para g1 o A ∈ SL(n) para g6

    Example:
        >>> a = GroupAction('g2', 2, eps=3.0)
        >>> a.apply([0.5, 0.0], 2.0)
        (array([0.5, 0. ]), 6.0)
    """
    id: str
    n: int
    eps: float = 0.0
    axis: Optional[int] = None
    matrix: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __post_init__(self):
        if self.id not in ACTION_IDS:
            raise ValueError(f"unknown action: {self.id}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, 'eps', float(self.eps))
        if self.id in AXIS_ACTIONS:
            if self.axis is None or not 0 <= self.axis < self.n:
                raise ValueError(f"{self.id} requires an axis in 1..{self.n}")
        elif self.axis is not None:
            raise ValueError(f"{self.id} does not take an axis")
        if self.id == 'g2' and self.eps <= 0:
            raise ValueError("scaling factor must be positive")
        if self.id in MATRIX_ACTIONS:
            self._check_matrix()
        elif self.matrix is not None:
            raise ValueError(f"{self.id} does not take a matrix")

    def _check_matrix(self):
        if self.matrix is None:
            raise ValueError(f"{self.id} requires a matrix")
        M = np.array(self.matrix, dtype=float)
        if M.shape != (self.n, self.n):
            raise ValueError(f"{self.id} matrix must be {self.n}x{self.n}")
        object.__setattr__(self, 'matrix', tuple(tuple(float(v) for v in row) for row in M))
        if self.id == 'g1':
            if np.max(np.abs(M.T @ M - np.eye(self.n))) > TOLERANCES['ORTHOGONAL']:
                raise ValueError("rotation matrix must be orthogonal")
            if abs(np.linalg.det(M) - 1.0) > TOLERANCES['ORTHOGONAL']:
                raise ValueError("rotation matrix must have determinant 1")
        elif abs(np.linalg.det(M) - 1.0) > TOLERANCES['UNIMODULAR']:
            raise ValueError("not special linear")

    @property
    def matrix_array(self) -> Optional[np.ndarray]:
        return None if self.matrix is None else np.array(self.matrix, dtype=float)

    def label(self) -> str:
        """Etiqueta legible, por ejemplo 'g3^1(eps=0.3)'."""
        axis = f"^{self.axis + 1}" if self.axis is not None else ""
        if self.id in MATRIX_ACTIONS:
            return f"{self.id}(matrix)"
        return f"{self.id}{axis}(eps={self.eps:g})"

    def describe(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'n': self.n,
            'eps': self.eps,
            'axis': None if self.axis is None else self.axis + 1,
            'matrix': None if self.matrix is None else [list(row) for row in self.matrix],
        }

    # ------------------------------------------------------------------
    # Mapa puntual
    # ------------------------------------------------------------------

    def denominator(self, xs: Sequence[Any]) -> Optional[Any]:
        """Denominador del mapa (g3: cos ε − x^i sen ε; g9: 1 − εx^i); None si no hay."""
        if self.id == 'g3':
            return math.cos(self.eps) - xs[self.axis] * math.sin(self.eps)
        if self.id == 'g9':
            return 1.0 - xs[self.axis] * self.eps
        return None

    def in_domain(self, x: Sequence[float]) -> bool:
        c = self.denominator([float(v) for v in x])
        return c is None or c > TOLERANCES['DOMAIN_MARGIN']

    def map_point(self, xs: Sequence[Any], u: Any) -> Tuple[List[Any], Any]:
        """
        Imagen (y, v) de (x, u); acepta coordenadas float o Jet2.

        Raises:
            ActionDomainError: si el denominador no es positivo
        """
        xs = list(xs)
        i = self.axis
        c = self.denominator(xs)
        if c is not None and value_of(c) <= TOLERANCES['DOMAIN_MARGIN']:
            raise ActionDomainError()

        if self.id in MATRIX_ACTIONS:
            return _linear_image(self.matrix_array, xs), u
        if self.id == 'g2':
            return xs, u * self.eps
        if self.id == 'g3':
            ys = list(xs)
            ys[i] = xs[i] * math.cos(self.eps) + math.sin(self.eps)
            return [y / c for y in ys], u / c
        if self.id == 'g4':
            return xs, u + self.eps
        if self.id == 'g5':
            return xs, u + xs[i] * self.eps
        if self.id == 'g7':
            ys = list(xs)
            ys[i] = xs[i] * math.exp(self.eps)
            return ys, u * math.exp(self.eps / (self.n + 1))
        if self.id == 'g8':
            ys = list(xs)
            ys[i] = xs[i] + self.eps
            return ys, u
        # g9
        return [x / c for x in xs], u / c

    def apply(self, x: Sequence[float], u: float) -> Tuple[np.ndarray, float]:
        """(y, v) = a·(x, u) en punto flotante."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected a point of dimension {self.n}")
        ys, v = self.map_point([float(t) for t in x], float(u))
        return np.array([float(y) for y in ys]), float(v)

    def inverse(self) -> 'GroupAction':
        """Acción inversa: −ε para las aditivas, 1/ε para g2, matriz inversa para g1 y g6."""
        if self.id == 'g1':
            return GroupAction('g1', self.n, self.eps and -self.eps,
                               matrix=self.matrix_array.T)
        if self.id == 'g6':
            return GroupAction('g6', self.n, self.eps and -self.eps,
                               matrix=np.linalg.inv(self.matrix_array))
        if self.id == 'g2':
            return GroupAction('g2', self.n, 1.0 / self.eps)
        return GroupAction(self.id, self.n, -self.eps, self.axis)

    def transport(self, u: ScalarField) -> ScalarField:
        """
        Campo cuyo grafo es la imagen del grafo de u: v(y) = v-parte de a(x(y), u(x(y))).

        La preimagen x(y) se obtiene con la acción inversa sobre coordenadas Jet2,
        así que el gradiente y el hessiano del transporte son exactos.
        """
        if u.n != self.n:
            raise ValueError("field and action have different dimension")
        inverse = self.inverse()

        def fn(ys):
            xs, _ = inverse.map_point(ys, 0.0)
            _, v = self.map_point(xs, u.fn(xs))
            return v

        return ScalarField(self.n, fn, 'transported', {'action': self.describe(), 'base': u.kind})


def apply(a: GroupAction, x: Sequence[float], u: float) -> Tuple[np.ndarray, float]:
    return a.apply(x, u)


def inverse(a: GroupAction) -> GroupAction:
    return a.inverse()


def transport(a: GroupAction, u: ScalarField) -> ScalarField:
    return a.transport(u)


def compose(a: GroupAction, b: GroupAction) -> GroupAction:
    """
    a∘b para dos acciones del mismo tipo y eje.

    g2 compone multiplicativamente, g1 y g6 por producto de matrices y el
    resto suma los parámetros.
    """
    if (a.id, a.n, a.axis) != (b.id, b.n, b.axis):
        raise ValueError("only actions of the same kind and axis compose in the parameter")
    if a.id in MATRIX_ACTIONS:
        return GroupAction(a.id, a.n, a.eps + b.eps, matrix=a.matrix_array @ b.matrix_array)
    if a.id == 'g2':
        return GroupAction('g2', a.n, a.eps * b.eps)
    return GroupAction(a.id, a.n, a.eps + b.eps, a.axis)


# ============================================================================
# FÁBRICAS
# ============================================================================

def rotation_in_plane(n: int, i: int, j: int, eps: float) -> GroupAction:
    """g1 con R = expm(ε·S), S antisimétrica en el plano (x^i, x^j) (ejes base 0)."""
    if n < 2:
        raise ValueError("rotations of the chart need n >= 2")
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError("rotation plane needs two distinct axes")
    S = np.zeros((n, n))
    S[i, j], S[j, i] = -1.0, 1.0
    return GroupAction('g1', n, eps, matrix=expm(eps * S))


def special_linear(A: Sequence[Sequence[float]]) -> GroupAction:
    A = np.asarray(A, dtype=float)
    return GroupAction('g6', A.shape[0], matrix=A)


def special_linear_from_generator(X: Sequence[Sequence[float]], eps: float) -> GroupAction:
    """g6 con A = expm(ε·X), X de traza nula."""
    X = np.asarray(X, dtype=float)
    if abs(np.trace(X)) > TOLERANCES['UNIMODULAR']:
        raise ValueError("generator must be traceless")
    return GroupAction('g6', X.shape[0], eps, matrix=expm(eps * X))


def diagonal_stretch(n: int, i: int, j: int, mu: float) -> GroupAction:
    """Estiramiento x^i → μ⁻¹x^i, x^j → μx^j (g6 con A diagonal, ejes base 0)."""
    if mu <= 0:
        raise ValueError("stretch factor must be positive")
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError("stretch needs two distinct axes")
    A = np.eye(n)
    A[i, i], A[j, j] = 1.0 / mu, mu
    return GroupAction('g6', n, math.log(mu), matrix=A)


def default_g6_generator(n: int) -> np.ndarray:
    """Generador de traza nula no diagonal ni antisimétrico usado por defecto."""
    X = np.zeros((n, n))
    if n >= 2:
        X[0, 0], X[1, 1], X[0, 1] = 1.0, -1.0, 1.0
    return X


def make_action(action_id: str, n: int, eps: Optional[float] = None, axis: Optional[int] = None,
                matrix: Optional[Sequence[Sequence[float]]] = None) -> GroupAction:
    """
    Construye una acción con los valores por defecto de DEFAULT_EPS.

    Args:
        action_id: 'g1'..'g9'
        n: Dimensión
        eps: Parámetro; DEFAULT_EPS[action_id] si es None
        axis: Eje base 0; 0 por defecto en las acciones con eje
        matrix: Matriz explícita para g1 o g6
    """
    if action_id not in ACTION_IDS:
        raise ValueError(f"unknown action: {action_id}")
    eps = DEFAULT_EPS[action_id] if eps is None else float(eps)
    if action_id == 'g1':
        if matrix is not None:
            return GroupAction('g1', n, eps, matrix=matrix)
        return rotation_in_plane(n, 0, 1, eps)
    if action_id == 'g6':
        if matrix is not None:
            return GroupAction('g6', n, eps, matrix=matrix)
        return special_linear_from_generator(default_g6_generator(n), eps)
    if action_id in AXIS_ACTIONS:
        return GroupAction(action_id, n, eps, 0 if axis is None else axis)
    return GroupAction(action_id, n, eps)


# ============================================================================
# GENERADORES INFINITESIMALES
# ============================================================================

def _linear_field_text(n: int, X: np.ndarray) -> List[str]:
    xs = [base_name(k + 1) for k in range(n)]
    components = []
    for row in X:
        terms = [f"({int(v)})*{x}" for v, x in zip(row, xs) if v != 0]
        components.append(" + ".join(terms) if terms else "0")
    return components


def infinitesimal_generator(action_id: str, n: int, axis: Optional[int] = None,
                            generator: Optional[Sequence[Sequence[int]]] = None,
                            degree: int = 3) -> VectorFieldAnsatz:
    """
    Generador d/dε de la acción en ε = 0 (identidad) como campo concreto.

    Para g1 y g6 se pasa la matriz entera del generador lineal (por defecto
    la rotación del plano (x^1, x^2) y default_g6_generator).
    """
    xs = [base_name(k + 1) for k in range(n)]
    zero = ["0"] * n
    i = 0 if axis is None else axis
    if action_id in MATRIX_ACTIONS:
        if generator is None:
            if action_id == 'g1':
                if n < 2:
                    raise ValueError("rotations of the chart need n >= 2")
                generator = np.zeros((n, n), dtype=int)
                generator[0, 1], generator[1, 0] = -1, 1
            else:
                generator = default_g6_generator(n).astype(int)
        X = np.asarray(generator, dtype=int)
        return VectorFieldAnsatz.from_components(n, _linear_field_text(n, X), "0", degree)
    if action_id == 'g2':
        return VectorFieldAnsatz.from_components(n, zero, "u", degree)
    if action_id == 'g3':
        xi = [f"{xs[i]}*{xs[j]}" + (" + 1" if j == i else "") for j in range(n)]
        return VectorFieldAnsatz.from_components(n, xi, f"{xs[i]}*u", degree)
    if action_id == 'g4':
        return VectorFieldAnsatz.from_components(n, zero, "1", degree)
    if action_id == 'g5':
        return VectorFieldAnsatz.from_components(n, zero, xs[i], degree)
    if action_id == 'g7':
        xi = list(zero)
        xi[i] = xs[i]
        return VectorFieldAnsatz.from_components(n, xi, f"u/{n + 1}", degree)
    if action_id == 'g8':
        xi = list(zero)
        xi[i] = "1"
        return VectorFieldAnsatz.from_components(n, xi, "0", degree)
    if action_id == 'g9':
        xi = [f"{xs[i]}*{xs[j]}" for j in range(n)]
        return VectorFieldAnsatz.from_components(n, xi, f"{xs[i]}*u", degree)
    raise ValueError(f"unknown action: {action_id}")


# ============================================================================
# TRANSFORMACIONES DE CUERPOS
# ============================================================================

@dataclass(frozen=True)
class BodyTransform:
    """
    Transformación K₂ = M·K₁ + b de un cuerpo convexo en R^{n+1}.

    rotation y centro-affine guardan matrix; scaling guarda factors
    (k_1..k_{n+1}); translation guarda vector. La función soporte cambia como
    h₂(Y) = h₁(MᵀY) + ⟨b, Y⟩.
    """
    kind: str
    matrix: Optional[np.ndarray] = field(default=None, compare=False)
    factors: Optional[Tuple[float, ...]] = None
    vector: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in BODY_KINDS:
            raise ValueError(f"unknown body transform: {self.kind}")
        if self.kind == 'scaling' and any(k <= 0 for k in self.factors):
            raise ValueError("scaling factors must be positive")

    @property
    def dimension(self) -> int:
        if self.matrix is not None:
            return self.matrix.shape[0]
        return len(self.factors if self.factors is not None else self.vector)

    def as_matrix(self) -> np.ndarray:
        if self.kind == 'scaling':
            return np.diag(self.factors)
        if self.kind == 'translation':
            return np.eye(self.dimension)
        return np.array(self.matrix, dtype=float)

    def offset(self) -> np.ndarray:
        if self.kind == 'translation':
            return np.array(self.vector, dtype=float)
        return np.zeros(self.dimension)

    def apply_to_points(self, Z: np.ndarray) -> np.ndarray:
        """Vectores posición W = M·Z + b (Z con un punto por columna)."""
        Z = np.asarray(Z, dtype=float)
        shift = self.offset()
        return self.as_matrix() @ Z + (shift[:, None] if Z.ndim == 2 else shift)

    def support(self, h: Callable[[np.ndarray], float]) -> Callable[[np.ndarray], float]:
        """Función soporte del cuerpo transformado a partir de la de K₁."""
        M, b = self.as_matrix(), self.offset()
        return lambda Y: float(h(M.T @ np.asarray(Y, dtype=float)) + b @ np.asarray(Y, dtype=float))

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {'kind': self.kind}
        if self.matrix is not None:
            result['matrix'] = np.asarray(self.matrix).tolist()
        if self.factors is not None:
            result['factors'] = list(self.factors)
        if self.vector is not None:
            result['vector'] = list(self.vector)
        return result


Resolution = Union[BodyTransform, List[BodyTransform]]


def _embed(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    M = np.eye(n + 1)
    M[:n, :n] = A
    return M


def shear_matrix(n: int, axis: int, eps: float) -> np.ndarray:
    """H_ε: identidad con ε en la fila n+1, columna i."""
    H = np.eye(n + 1)
    H[n, axis] = eps
    return H


def projective_shear_matrix(n: int, axis: int, eps: float) -> np.ndarray:
    """Q_ε: identidad con −ε en la fila i, columna n+1."""
    Q = np.eye(n + 1)
    Q[axis, n] = -eps
    return Q


def plane_rotation_matrix(n: int, axis: int, eps: float) -> np.ndarray:
    """O_ε: rotación de ángulo ε en el plano (X_i, X_{n+1})."""
    O = np.eye(n + 1)
    c, s = math.cos(eps), math.sin(eps)
    O[axis, axis], O[axis, n] = c, -s
    O[n, axis], O[n, n] = s, c
    return O


def body_matrix(a: GroupAction) -> Tuple[np.ndarray, np.ndarray]:
    """
    Matriz M y traslación b tales que h_{K₂}(Y) = h_{K₁}(MᵀY) + ⟨b, Y⟩.

    Con la carta X = (x, −1)/√(1+|x|²) las traslaciones son b = −ε·e_{n+1}
    para g4 y b = +ε·e_i para g5, signos opuestos a stated_translation.

    Returns:
        (M de (n+1)×(n+1), b de longitud n+1)
    """
    n = a.n
    b = np.zeros(n + 1)
    if a.id == 'g1':
        return _embed(a.matrix_array), b
    if a.id == 'g6':
        return _embed(np.linalg.inv(a.matrix_array).T), b
    if a.id == 'g2':
        return a.eps * np.eye(n + 1), b
    if a.id == 'g3':
        return plane_rotation_matrix(n, a.axis, a.eps), b
    if a.id == 'g4':
        b[n] = -a.eps
        return np.eye(n + 1), b
    if a.id == 'g5':
        b[a.axis] = a.eps
        return np.eye(n + 1), b
    if a.id == 'g7':
        return np.diag(scaling_factors(a)), b
    if a.id == 'g8':
        return shear_matrix(n, a.axis, a.eps), b
    return projective_shear_matrix(n, a.axis, a.eps), b


def scaling_factors(a: GroupAction) -> Tuple[float, ...]:
    """k_1..k_{n+1} de g2 (uniforme) o de g7 (k_i = μ^{−n/(n+1)}, resto μ^{1/(n+1)}, μ = e^ε)."""
    if a.id == 'g2':
        return (a.eps,) * (a.n + 1)
    if a.id != 'g7':
        raise ValueError(f"{a.id} does not resolve into a scaling")
    mu = math.exp(a.eps)
    factors = [mu ** (1.0 / (a.n + 1))] * (a.n + 1)
    factors[a.axis] = mu ** (-a.n / (a.n + 1))
    return tuple(factors)


def stated_translation(a: GroupAction) -> np.ndarray:
    """
    Traslación tal como se enuncia en la resolución clásica de g4 y g5
    (+ε a lo largo del eje n+1, −ε a lo largo del eje i).
    """
    b = np.zeros(a.n + 1)
    if a.id == 'g4':
        b[a.n] = a.eps
    elif a.id == 'g5':
        b[a.axis] = -a.eps
    else:
        raise ValueError(f"{a.id} does not resolve into a translation")
    return b


def resolve(a: GroupAction) -> Resolution:
    """
    Transformación del cuerpo convexo que realiza la acción.

    g6 devuelve la lista de composición [rotación Q, escalamiento Λ⁻¹,
    rotación P] con A = P·Λ·Q; el resto devuelve una sola transformación.
    """
    kind = RESOLUTION_KINDS[a.id]
    if a.id == 'g6':
        P, lam, Q = sl_decompose(a.matrix_array)
        return [
            BodyTransform('rotation', matrix=_embed(Q)),
            BodyTransform('scaling', factors=tuple(1.0 / lam) + (1.0,)),
            BodyTransform('rotation', matrix=_embed(P)),
        ]
    if kind == 'scaling':
        return BodyTransform('scaling', factors=scaling_factors(a))
    M, b = body_matrix(a)
    if kind == 'translation':
        return BodyTransform('translation', vector=tuple(b))
    return BodyTransform(kind, matrix=M)


def compose_transforms(resolution: Resolution) -> Tuple[np.ndarray, np.ndarray]:
    """Matriz y traslación totales de una resolución (la lista se aplica en orden)."""
    steps = resolution if isinstance(resolution, list) else [resolution]
    M = np.eye(steps[0].dimension)
    b = np.zeros(steps[0].dimension)
    for step in steps:
        M = step.as_matrix() @ M
        b = step.as_matrix() @ b + step.offset()
    return M, b


def listed_actions(n: int, p) -> List[str]:
    """Acciones que son simetría para (n, p); g1 y g6 se omiten con n = 1."""
    p = as_rat(p)
    if p == n + 1:
        ids = ['g1', 'g2', 'g3']
    elif p == 1:
        ids = ['g1', 'g3', 'g4', 'g5']
    elif p == -n - 1:
        ids = ['g1', 'g3', 'g6', 'g7', 'g8', 'g9']
    else:
        ids = ['g1', 'g3']
    if n == 1:
        ids = [i for i in ids if i not in MATRIX_ACTIONS]
    return ids


def body_classification(n: int, p) -> List[str]:
    """Tipos de transformación de cuerpos convexos realizados en (n, p)."""
    kinds = {RESOLUTION_KINDS[i] for i in listed_actions(n, p)}
    kinds.add('rotation')
    return [kind for kind in BODY_KINDS if kind in kinds]


def scaling_commutes_with_rotation(k: Union[float, Sequence[float]], R: np.ndarray) -> bool:
    """Conmutación exacta de diag(k) con la rotación R; exacta para k uniforme."""
    R = np.asarray(R, dtype=float)
    K = np.diag(np.broadcast_to(np.asarray(k, dtype=float), (R.shape[0],)))
    return bool(np.array_equal(R @ K, K @ R))


# ============================================================================
# IDENTIDADES DE FUNCIONES SOPORTE
# ============================================================================

def lemma_matrix(lemma: str, n: int, params: Dict[str, Any]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Matriz M y traslación b del cuerpo transformado para cada identidad.

    params: '4.1' {'matrix'}, '4.2' {'factors'}, '5.1' {'vector'},
    '6.2' y '6.3' {'eps', 'axis' (base 0)}.
    """
    b = np.zeros(n + 1)
    if lemma == '4.1':
        M = np.asarray(params['matrix'], dtype=float)
        return M, b
    if lemma == '4.2':
        return np.diag(np.asarray(params['factors'], dtype=float)), b
    if lemma == '5.1':
        return np.eye(n + 1), np.asarray(params['vector'], dtype=float)
    if lemma == '6.2':
        return shear_matrix(n, params['axis'], params['eps']), b
    if lemma == '6.3':
        return projective_shear_matrix(n, params['axis'], params['eps']), b
    raise ValueError(f"unknown lemma: {lemma}")


def lemma_preimage(lemma: str, Y: np.ndarray, params: Dict[str, Any]) -> np.ndarray:
    """Dirección unitaria X = MᵀY/|MᵀY| en la que se evalúa h₁."""
    Y = np.asarray(Y, dtype=float)
    M, _ = lemma_matrix(lemma, Y.shape[0] - 1, params)
    image = M.T @ Y
    return image / np.linalg.norm(image)


def support_transform(lemma: str, h: float, Y: Sequence[float], params: Dict[str, Any],
                      variant: str = 'derived') -> float:
    """
    Forma cerrada q(Y) de la función soporte transformada.

    Args:
        lemma: '4.1', '4.2', '5.1', '6.2' o '6.3'
        h: Valor h₁(X) en X = lemma_preimage(lemma, Y, params) (en Y para '5.1')
        Y: Dirección unitaria de R^{n+1}
        params: Ver lemma_matrix
        variant: Para '6.3', 'derived' (ε²Y_i²) o 'stated' (ε²Y²_{n+1})

    Example:
        >>> Y = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)
        >>> round(support_transform('6.2', 1.0, Y, {'eps': 1.0, 'axis': 0}) ** 2, 12)
        2.5
    """
    Y = np.asarray(Y, dtype=float)
    if abs(np.linalg.norm(Y) - 1.0) > TOLERANCES['ON_MANIFOLD']:
        raise ValueError("Y must be a unit vector")
    if lemma == '4.1':
        return float(h)
    if lemma == '4.2':
        k = np.asarray(params['factors'], dtype=float)
        return float(h) * math.sqrt(float(np.sum(k ** 2 * Y ** 2)))
    if lemma == '5.1':
        return float(h) + float(np.asarray(params['vector'], dtype=float) @ Y)
    eps, i = float(params['eps']), params['axis']
    cross = Y[i] * Y[-1]
    if lemma == '6.2':
        return float(h) * math.sqrt(1.0 + 2.0 * eps * cross + eps ** 2 * Y[-1] ** 2)
    if lemma == '6.3':
        if variant == 'derived':
            return float(h) * math.sqrt(1.0 - 2.0 * eps * cross + eps ** 2 * Y[i] ** 2)
        if variant == 'stated':
            return float(h) * math.sqrt(1.0 - 2.0 * eps * cross + eps ** 2 * Y[-1] ** 2)
        raise ValueError(f"unknown variant: {variant}")
    raise ValueError(f"unknown lemma: {lemma}")


# ============================================================================
# DESCOMPOSICIÓN EN SL(n)
# ============================================================================

def jacobi_eigh(S: Sequence[Sequence[float]], tol: float = TOLERANCES['JACOBI'],
                max_sweeps: int = SAMPLING['JACOBI_MAX_SWEEPS']) -> Tuple[np.ndarray, np.ndarray]:
    """
    Autovalores y autovectores de una matriz simétrica por Jacobi cíclico.

    Returns:
        (autovalores en orden descendente, matriz ortogonal con los autovectores en columnas)

    Raises:
        ValueError: si S no es simétrica
    """
    a = np.array(S, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if np.max(np.abs(a - a.T), initial=0.0) > TOLERANCES['SYMMETRIC'] * scale:
        raise ValueError("matrix must be symmetric")
    a = 0.5 * (a + a.T)
    m = a.shape[0]
    V = np.eye(m)

    for sweep in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.tril(a, -1) ** 2)))
        if off <= tol * max(float(np.linalg.norm(a)), np.finfo(float).tiny):
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                J = np.eye(m)
                J[p, p], J[q, q], J[p, q], J[q, p] = c, c, s, -s
                a = J.T @ a @ J
                V = V @ J
    else:
        logger.warning(f"Jacobi no convergió en {max_sweeps} barridos")

    values = np.diag(a).copy()
    order = np.argsort(-values, kind='stable')
    return values[order], V[:, order]


def _orthogonalize_columns(W: np.ndarray, V: np.ndarray, tol: float, max_sweeps: int):
    """Jacobi unilateral: rota pares de columnas de W (y de V) hasta hacerlas ortogonales."""
    m = W.shape[1]
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(m - 1):
            for q in range(p + 1, m):
                alpha = float(W[:, p] @ W[:, p])
                beta = float(W[:, q] @ W[:, q])
                gamma = float(W[:, p] @ W[:, q])
                if abs(gamma) <= tol * math.sqrt(alpha * beta) or gamma == 0.0:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                for M in (W, V):
                    left, right = M[:, p].copy(), M[:, q].copy()
                    M[:, p] = c * left - s * right
                    M[:, q] = s * left + c * right
        if not rotated:
            return


def sl_decompose(A: Sequence[Sequence[float]]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    A = P·diag(λ)·Q con P, Q ∈ SO(n), λ_i > 0 y Πλ_i = 1.

    Se diagonaliza AᵀA = V·diag(λ²)·Vᵀ con jacobi_eigh, se refinan las columnas
    de W = A·V con Jacobi unilateral y se toma λ = |columnas de W|, P = W/λ, Q = Vᵀ.

    Raises:
        ValueError: "not special linear" si det A ≠ 1
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if abs(np.linalg.det(A) - 1.0) > TOLERANCES['UNIMODULAR']:
        raise ValueError("not special linear")

    _, V = jacobi_eigh(A.T @ A)
    V = V.copy()
    if np.linalg.det(V) < 0:
        V[:, -1] = -V[:, -1]
    W = A @ V
    _orthogonalize_columns(W, V, TOLERANCES['JACOBI'], SAMPLING['JACOBI_MAX_SWEEPS'])

    lam = np.linalg.norm(W, axis=0)
    order = np.argsort(-lam, kind='stable')
    lam, W, V = lam[order], W[:, order], V[:, order]
    if np.linalg.det(V) < 0:
        V[:, -1] = -V[:, -1]
        W[:, -1] = -W[:, -1]
    P = W / lam
    logger.debug(f"Descomposición SL(n): λ = {lam}")
    return P, lam, V.T
