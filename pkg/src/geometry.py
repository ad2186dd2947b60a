"""
Módulo de geometría de la carta semiesférica.

Incluye:
- Jet2: escalares de modo directo con valor, gradiente y hessiano exactos
- ScalarField y un catálogo de campos con derivadas cerradas
- Proyección semiesférica, métrica inducida y símbolos de Christoffel
- Residuos de la ecuación proyectada y de la ecuación sobre la esfera
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

_SCALARS = (int, float, Fraction, np.integer, np.floating)


# ============================================================================
# JET DE SEGUNDO ORDEN
# ============================================================================

class Jet2:
    """
    Escalar con derivadas de primer y segundo orden respecto de m variables.

    Las operaciones propagan la regla de la cadena de segundo orden de forma
    exacta, de modo que los campos del catálogo se derivan a precisión de máquina.

    Example:
        >>> x = Jet2.variable(2.0, 0, 1)
        >>> (x * x).hess
        array([[2.]])
    """

    __slots__ = ('value', 'grad', 'hess')

    # Los escalares numpy delegan en los métodos reflejados de Jet2
    __array_ufunc__ = None

    def __init__(self, value: float, grad: np.ndarray, hess: np.ndarray):
        self.value = float(value)
        self.grad = grad
        self.hess = hess

    @classmethod
    def variable(cls, value: float, index: int, size: int) -> 'Jet2':
        grad = np.zeros(size)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((size, size)))

    @classmethod
    def constant(cls, value: float, size: int) -> 'Jet2':
        return cls(value, np.zeros(size), np.zeros((size, size)))

    @property
    def size(self) -> int:
        return self.grad.shape[0]

    def _lift(self, other: Any) -> Optional['Jet2']:
        if isinstance(other, Jet2):
            return other
        if isinstance(other, _SCALARS):
            return Jet2.constant(float(other), self.size)
        return None

    def _chain(self, f0: float, f1: float, f2: float) -> 'Jet2':
        """Composición g(self) con g, g', g'' evaluadas en self.value."""
        return Jet2(f0, f1 * self.grad, f1 * self.hess + f2 * np.outer(self.grad, self.grad))

    def __add__(self, other: Any) -> 'Jet2':
        if isinstance(other, _SCALARS):
            return Jet2(self.value + float(other), self.grad, self.hess)
        if not isinstance(other, Jet2):
            return NotImplemented
        return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)

    __radd__ = __add__

    def __neg__(self) -> 'Jet2':
        return Jet2(-self.value, -self.grad, -self.hess)

    def __sub__(self, other: Any) -> 'Jet2':
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> 'Jet2':
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> 'Jet2':
        if isinstance(other, _SCALARS):
            c = float(other)
            return Jet2(self.value * c, self.grad * c, self.hess * c)
        if not isinstance(other, Jet2):
            return NotImplemented
        cross = np.outer(self.grad, other.grad)
        return Jet2(self.value * other.value,
                    self.value * other.grad + other.value * self.grad,
                    self.value * other.hess + other.value * self.hess + cross + cross.T)

    __rmul__ = __mul__

    def reciprocal(self) -> 'Jet2':
        b = self.value
        if b == 0.0:
            raise ZeroDivisionError("division by a jet with zero value")
        return self._chain(1.0 / b, -1.0 / b ** 2, 2.0 / b ** 3)

    def __truediv__(self, other: Any) -> 'Jet2':
        if isinstance(other, _SCALARS):
            return self * (1.0 / float(other))
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other: Any) -> 'Jet2':
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    def __pow__(self, exponent: Any) -> 'Jet2':
        k = float(exponent)
        b = self.value
        if k.is_integer() and k >= 0:
            power = int(k)
            if power == 0:
                return Jet2.constant(1.0, self.size)
            f0 = b ** power
            f1 = power * b ** (power - 1)
            f2 = power * (power - 1) * b ** (power - 2) if power >= 2 else 0.0
            return self._chain(f0, f1, f2)
        if b <= 0.0:
            raise ValueError("positivity violated")
        f0 = math.exp(k * math.log(b))
        return self._chain(f0, k * f0 / b, k * (k - 1.0) * f0 / b ** 2)

    def sqrt(self) -> 'Jet2':
        b = self.value
        if b <= 0.0:
            raise ValueError("positivity violated")
        r = math.sqrt(b)
        return self._chain(r, 0.5 / r, -0.25 / (r * b))

    def exp(self) -> 'Jet2':
        e = math.exp(self.value)
        return self._chain(e, e, e)

    def log(self) -> 'Jet2':
        b = self.value
        if b <= 0.0:
            raise ValueError("positivity violated")
        return self._chain(math.log(b), 1.0 / b, -1.0 / b ** 2)

    def __repr__(self) -> str:
        return f"Jet2(value={self.value!r}, grad={self.grad!r}, hess={self.hess!r})"


def value_of(z: Any) -> float:
    """Valor numérico de un Jet2 o de un escalar."""
    return z.value if isinstance(z, Jet2) else float(z)


def jsqrt(z: Any) -> Any:
    return z.sqrt() if isinstance(z, Jet2) else math.sqrt(z)


def jexp(z: Any) -> Any:
    return z.exp() if isinstance(z, Jet2) else math.exp(z)


def jlog(z: Any) -> Any:
    return z.log() if isinstance(z, Jet2) else math.log(z)


def jet_norm(components: Sequence[Any]) -> Any:
    total = components[0] * components[0]
    for c in components[1:]:
        total = total + c * c
    return jsqrt(total)


def rhs_density(p: Any, n: int, weight: float, u: float) -> float:
    """s = (1+|x|²)^{−(p+n+1)/2} u^{p−1}, con potencias vía exp/log."""
    if u <= 0:
        raise ValueError("positivity violated")
    p = float(p)
    return math.exp(-(p + n + 1) / 2.0 * math.log(weight) + (p - 1.0) * math.log(u))


# ============================================================================
# CAMPOS ESCALARES
# ============================================================================

@dataclass(frozen=True)
class ScalarField:
    """
    Función escalar dos veces diferenciable en la carta.

    fn recibe la lista de coordenadas (Jet2 o float) y devuelve el valor en
    el mismo tipo. kind y params describen el campo para reportes.
    """
    n: int
    fn: Callable[[List[Any]], Any]
    kind: str = 'custom'
    params: Dict[str, Any] = field(default_factory=dict)

    def jet(self, x: Sequence[float]) -> Jet2:
        """Valor, gradiente y hessiano exactos en x."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected a point of dimension {self.n}")
        result = self.fn([Jet2.variable(x[i], i, self.n) for i in range(self.n)])
        if not isinstance(result, Jet2):
            result = Jet2.constant(float(result), self.n)
        return result

    def value(self, x: Sequence[float]) -> float:
        return self.jet(x).value

    def gradient(self, x: Sequence[float]) -> np.ndarray:
        return self.jet(x).grad

    def hessian(self, x: Sequence[float]) -> np.ndarray:
        return self.jet(x).hess

    def __add__(self, other: 'ScalarField') -> 'ScalarField':
        if other.n != self.n:
            raise ValueError("fields of different dimension")
        return ScalarField(self.n, lambda xs: self.fn(xs) + other.fn(xs), 'sum',
                           {'terms': [self.kind, other.kind]})

    def describe(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'n': self.n, **self.params}


def _one_plus_r2(xs: List[Any]) -> Any:
    total = 1.0
    for x in xs:
        total = x * x + total
    return total


def unit_ball(n: int) -> ScalarField:
    """u₀(x) = √(1+|x|²), compañera proyectiva de la bola unidad (h ≡ 1)."""
    return ScalarField(n, lambda xs: jsqrt(_one_plus_r2(xs)), 'unit_ball')


def constant_field(n: int, c: float) -> ScalarField:
    return ScalarField(n, lambda xs: float(c) + 0.0 * xs[0], 'constant', {'c': float(c)})


def quadratic_field(n: int) -> ScalarField:
    """½|x|² + 1."""
    return ScalarField(n, lambda xs: 0.5 * (_one_plus_r2(xs) - 1.0) + 1.0, 'quadratic')


def scaled_field(u: ScalarField, c: float) -> ScalarField:
    return ScalarField(u.n, lambda xs: u.fn(xs) * float(c), 'scaled',
                       {'base': u.kind, 'c': float(c)})


def ellipsoid_field(A: np.ndarray, center: Optional[Sequence[float]] = None) -> ScalarField:
    """
    Compañera proyectiva del cuerpo K = A·B + c:
    u(x) = |Aᵀ(x, −1)| + ⟨c, (x, −1)⟩.
    """
    A = np.asarray(A, dtype=float)
    size = A.shape[0]
    if A.shape != (size, size) or size < 2:
        raise ValueError("ellipsoid matrix must be square of size n+1")
    if abs(np.linalg.det(A)) < 1e-14:
        raise ValueError("singular ellipsoid matrix")
    c = np.zeros(size) if center is None else np.asarray(center, dtype=float)

    def fn(xs):
        point = list(xs) + [-1.0]
        image = []
        for col in range(size):
            entry = 0.0
            for row in range(size):
                if A[row, col] != 0.0:
                    entry = point[row] * A[row, col] + entry
            image.append(entry)
        result = jet_norm(image)
        for k in range(size):
            if c[k] != 0.0:
                result = result + point[k] * c[k]
        return result

    return ScalarField(size - 1, fn, 'ellipsoid', {'A': A.tolist(), 'center': c.tolist()})


def ellipsoid_support(A: np.ndarray, center: Optional[Sequence[float]] = None) -> Callable[[np.ndarray], float]:
    """Función soporte de K = A·B + c sobre vectores de R^{n+1}: |AᵀY| + ⟨c, Y⟩."""
    A = np.asarray(A, dtype=float)
    c = np.zeros(A.shape[0]) if center is None else np.asarray(center, dtype=float)
    return lambda Y: float(np.linalg.norm(A.T @ Y) + c @ Y)


# ============================================================================
# CARTA SEMIESFÉRICA Y MÉTRICA
# ============================================================================

def project(X: Sequence[float]) -> np.ndarray:
    """Proyección semiesférica T: X ↦ −X'/X_{n+1} sobre el hemisferio sur."""
    X = np.asarray(X, dtype=float)
    if X[-1] >= 0:
        raise ValueError("outside southern chart")
    return -X[:-1] / X[-1]


def unproject(x: Sequence[float]) -> np.ndarray:
    """X(x) = (x, −1)/√(1+|x|²)."""
    x = np.asarray(x, dtype=float)
    return np.append(x, -1.0) / math.sqrt(1.0 + float(x @ x))


@dataclass(frozen=True)
class MetricData:
    g: np.ndarray
    g_inv: np.ndarray
    det_g: float
    christoffel: np.ndarray  # christoffel[k, i, j] = Γ^k_ij


def metric_at(x: Sequence[float]) -> MetricData:
    """
    Métrica inducida en forma cerrada.

    g_ij = (δ_ij − x^ix^j/(1+|x|²))/(1+|x|²),  g^{ij} = (1+|x|²)(δ_ij + x^ix^j),
    det g = (1+|x|²)^{−(n+1)},  Γ^k_ij = −(δ_jk x^i + δ_ik x^j)/(1+|x|²).
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    w = 1.0 + float(x @ x)
    eye = np.eye(n)
    outer = np.outer(x, x)
    g = (eye - outer / w) / w
    g_inv = w * (eye + outer)
    gamma = np.zeros((n, n, n))
    for k in range(n):
        gamma[k] = -(np.outer(x, eye[k]) + np.outer(eye[k], x)) / w
    return MetricData(g, g_inv, w ** (-(n + 1)), gamma)


def embedding_metric_fd(x: Sequence[float], step: float = 1e-6) -> np.ndarray:
    """g = JᵀJ con J = ∂X/∂x por diferencias centrales de unproject."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    jac = np.zeros((n + 1, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        jac[:, i] = (unproject(x + e) - unproject(x - e)) / (2.0 * step)
    return jac.T @ jac


def finite_difference_christoffel(x: Sequence[float], step: float = 1e-5) -> np.ndarray:
    """Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij) con ∂g por diferencias centrales."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    dg = np.zeros((n, n, n))  # dg[l] = ∂_l g
    for l in range(n):
        e = np.zeros(n)
        e[l] = step
        dg[l] = (metric_at(x + e).g - metric_at(x - e).g) / (2.0 * step)
    g_inv = np.linalg.inv(metric_at(x).g)
    gamma = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                gamma[k, i, j] = 0.5 * sum(
                    g_inv[k, l] * (dg[i][j, l] + dg[j][i, l] - dg[l][i, j]) for l in range(n))
    return gamma


def support_from_projective(u: ScalarField) -> ScalarField:
    """h(X(x)) = u(x)/√(1+|x|²), como campo en la carta."""
    return ScalarField(u.n, lambda xs: u.fn(xs) / jsqrt(_one_plus_r2(xs)), 'support',
                       {'projective': u.kind})


def projective_from_support(h: ScalarField) -> ScalarField:
    """Inversa de support_from_projective: u(x) = h(X(x))·√(1+|x|²)."""
    return ScalarField(h.n, lambda xs: h.fn(xs) * jsqrt(_one_plus_r2(xs)), 'projective',
                       {'support': h.kind})


def sphere_hessian(h: ScalarField, x: Sequence[float]) -> np.ndarray:
    """∇²_ij h = ∂²h/∂x^i∂x^j − Γ^k_ij ∂h/∂x^k en coordenadas de la carta."""
    jet = h.jet(x)
    gamma = metric_at(x).christoffel
    return jet.hess - np.einsum('kij,k->ij', gamma, jet.grad)


# ============================================================================
# RESIDUOS
# ============================================================================

def plane_terms(u: ScalarField, p: Any, x: Sequence[float]) -> Tuple[float, float]:
    """
    Lados de la ecuación proyectada en x: (det D²u, (1+|x|²)^{−(p+n+1)/2} u^{p−1}).

    Raises:
        ValueError: "positivity violated" si u(x) ≤ 0
    """
    x = np.asarray(x, dtype=float)
    jet = u.jet(x)
    if jet.value <= 0:
        raise ValueError("positivity violated")
    det = float(np.linalg.det(jet.hess))
    return det, rhs_density(p, u.n, 1.0 + float(x @ x), jet.value)


def residual_plane(u: ScalarField, p: Any, x: Sequence[float]) -> float:
    """det D²u − (1+|x|²)^{−(p+n+1)/2} u^{p−1} en x."""
    det, rhs = plane_terms(u, p, x)
    return det - rhs


def residual_sphere(h: ScalarField, p: Any, x: Sequence[float]) -> float:
    """det(∇²h + h·g)/det g − h^{p−1} en el punto de la carta x."""
    jet = h.jet(x)
    if jet.value <= 0:
        raise ValueError("positivity violated")
    metric = metric_at(x)
    matrix = sphere_hessian(h, x) + jet.value * metric.g
    power = math.exp((float(p) - 1.0) * math.log(jet.value))
    return float(np.linalg.det(matrix)) / metric.det_g - power
