"""
Módulo de certificación numérica.

Transporta soluciones del catálogo bajo cada acción y mide el residuo de la
ecuación proyectada (controles positivos y negativos), contrasta cada
identidad de funciones soporte con el oráculo |(MA)ᵀY| sobre elipsoides y
comprueba de punta a punta que la resolución de cada acción reproduce la
solución transportada.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

from config import SAMPLING, SKIP_RATIO_LIMIT, TOLERANCES

from .actions import (ACTION_IDS, MATRIX_ACTIONS, ActionDomainError, GroupAction,
                      compose_transforms, lemma_matrix, lemma_preimage, listed_actions,
                      make_action, resolve, stated_translation, support_transform)
from .exact import as_rat
from .geometry import (ScalarField, ellipsoid_field, ellipsoid_support, plane_terms,
                       residual_sphere, scaled_field, support_from_projective, unit_ball,
                       unproject)

logger = logging.getLogger(__name__)

CONFIRMED = 'confirmed'
REFUTED = 'refuted'
INCONCLUSIVE = 'inconclusive'

# Puntos usados para el residuo de la ecuación sobre la esfera (solo informativo)
SPHERE_PROBES = 16


# ============================================================================
# PLAN DE MUESTREO
# ============================================================================

@dataclass(frozen=True)
class SamplePlan:
    """
    Puntos uniformes en la bola de radio R de la carta, reproducibles por semilla.

    Example:
        >>> plan = SamplePlan(n=2, samples=3, seed=7)
        >>> plan.points().shape
        (3, 2)
    """
    n: int
    radius: float = SAMPLING['RADIUS']
    samples: int = SAMPLING['SAMPLES']
    seed: int = SAMPLING['SEED']

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.samples < 1:
            raise ValueError("sample count must be >= 1")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def points(self) -> np.ndarray:
        """N puntos uniformes en la bola: dirección gaussiana normalizada y radio R·U^{1/n}."""
        rng = np.random.default_rng(self.seed)
        directions = rng.standard_normal((self.samples, self.n))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        radii = self.radius * rng.random(self.samples) ** (1.0 / self.n)
        return directions * radii[:, None]

    def directions(self) -> np.ndarray:
        """N direcciones unitarias de R^{n+1} para las identidades de funciones soporte."""
        rng = np.random.default_rng(self.seed)
        Y = rng.standard_normal((self.samples, self.n + 1))
        return Y / np.linalg.norm(Y, axis=1)[:, None]

    def describe(self) -> Dict[str, Any]:
        return {'n': self.n, 'radius': self.radius, 'samples': self.samples, 'seed': self.seed}


# ============================================================================
# REPORTE
# ============================================================================

@dataclass(frozen=True)
class ResidualReport:
    """
    Resultado inmutable de una certificación.

    kind es 'action', 'lemma' o 'resolution'. El veredicto de una acción es
    symmetry-confirmed / symmetry-refuted; el de identidades y resoluciones
    identity-confirmed / identity-refuted; ambos pueden ser 'inconclusive'.

    En las acciones max_residual es el máximo de |det D²v − f| / max(1, |f|)
    (absoluto donde |f| ≤ 1) y max_abs el de |det D²v − f|; en identidades y
    resoluciones ambos son la desviación absoluta. tolerance se compara con
    max_residual.
    """
    kind: str
    subject: Dict[str, Any]
    n: int
    p: Optional[Fraction]
    max_abs: float
    max_residual: float
    mean_residual: float
    samples: int
    skipped: int
    tolerance: float
    refute_threshold: float
    verdict: str
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def skip_ratio(self) -> float:
        return self.skipped / self.samples if self.samples else 0.0

    @property
    def outcome(self) -> str:
        """'confirmed', 'refuted' o 'inconclusive' sin el prefijo del tipo."""
        return self.verdict.split('-')[-1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind,
            'subject': self.subject,
            'n': self.n,
            'p': self.p,
            'max_abs': self.max_abs,
            'max_residual': self.max_residual,
            'mean_residual': self.mean_residual,
            'samples': self.samples,
            'skipped': self.skipped,
            'skip_ratio': self.skip_ratio,
            'tolerance': self.tolerance,
            'refute_threshold': self.refute_threshold,
            'verdict': self.verdict,
            'details': self.details,
        }


def _verdict(prefix: str, residuals: Sequence[float], skipped: int, samples: int,
             tolerance: float, refute: float) -> str:
    if not residuals or skipped / samples > SKIP_RATIO_LIMIT:
        outcome = INCONCLUSIVE
    elif max(residuals) <= tolerance:
        outcome = CONFIRMED
    elif max(residuals) >= refute:
        outcome = REFUTED
    else:
        outcome = INCONCLUSIVE
    return outcome if outcome == INCONCLUSIVE else f"{prefix}-{outcome}"


def _statistics(values: Sequence[float]) -> tuple:
    if not values:
        return float('nan'), float('nan')
    return float(max(values)), float(np.mean(values))


# ============================================================================
# CERTIFICACIÓN DE ACCIONES
# ============================================================================

def _scaled_residual(u: ScalarField, p: Fraction, x: np.ndarray) -> tuple:
    """(|det D²u − f|, |det D²u − f| / max(1, |f|)): absoluto si |f| ≤ 1, relativo si no."""
    det, rhs = plane_terms(u, p, x)
    absolute = abs(det - rhs)
    return absolute, absolute / max(1.0, abs(rhs))


def check_solution(u: ScalarField, p, plan: SamplePlan) -> float:
    """
    Máximo residuo escalado de u en los puntos del plan.

    Raises:
        ValueError: "base field fails PDE" si supera TOLERANCES['BASE_SOLUTION']
    """
    p = as_rat(p)
    worst = 0.0
    for x in plan.points():
        try:
            _, scaled = _scaled_residual(u, p, x)
        except ValueError:
            raise ValueError("base field fails PDE")
        worst = max(worst, scaled)
    if not worst <= TOLERANCES['BASE_SOLUTION']:
        raise ValueError("base field fails PDE")
    return worst


def certify_action(a: GroupAction, p, u: ScalarField, plan: SamplePlan) -> ResidualReport:
    """
    Transporta u bajo a y evalúa el residuo de la ecuación en los puntos del plan.

    Los puntos fuera del dominio de la acción, o donde la imagen deja de ser
    positiva, se omiten y se cuentan.

    Args:
        a: Acción de grupo
        p: Exponente racional
        u: Solución de partida (se verifica antes de transportar)
        plan: Plan de muestreo

    Returns:
        ResidualReport con veredicto según el residuo escalado máximo
    """
    p = as_rat(p)
    if plan.n != a.n or u.n != a.n:
        raise ValueError("plan, field and action must share the dimension")
    check_solution(u, p, plan)
    v = a.transport(u)

    absolute: List[float] = []
    scaled: List[float] = []
    sphere: List[float] = []
    skipped = 0
    for x in plan.points():
        try:
            abs_res, scaled_res = _scaled_residual(v, p, x)
        except ActionDomainError:
            skipped += 1
            continue
        except ValueError as e:
            if str(e) != "positivity violated":
                raise
            skipped += 1
            continue
        absolute.append(abs_res)
        scaled.append(scaled_res)
        if len(sphere) < SPHERE_PROBES:
            sphere.append(abs(residual_sphere(support_from_projective(v), p, x)))

    if skipped:
        logger.warning(f"{a.label()}: {skipped} de {plan.samples} puntos fuera del dominio")
    max_scaled, mean_scaled = _statistics(scaled)
    verdict = _verdict('symmetry', scaled, skipped, plan.samples,
                       TOLERANCES['CONFIRM'], TOLERANCES['REFUTE'])
    if verdict == INCONCLUSIVE:
        logger.warning(f"{a.label()} con p={p}: veredicto inconcluso (máximo {max_scaled:.3e})")
    return ResidualReport(
        kind='action',
        subject={'action': a.describe(), 'field': u.describe()},
        n=a.n,
        p=p,
        max_abs=max(absolute) if absolute else float('nan'),
        max_residual=max_scaled,
        mean_residual=mean_scaled,
        samples=plan.samples,
        skipped=skipped,
        tolerance=TOLERANCES['CONFIRM'],
        refute_threshold=TOLERANCES['REFUTE'],
        verdict=verdict,
        details={'sphere_residual_max': max(sphere) if sphere else None},
    )


def expected_verdict(action_id: str, n: int, p) -> str:
    """Veredicto esperado según la tabla de acciones de cada caso de p."""
    if action_id not in ACTION_IDS:
        raise ValueError(f"unknown action: {action_id}")
    if n == 1 and action_id in MATRIX_ACTIONS:
        raise ValueError(f"{action_id} is trivial for n = 1")
    listed = action_id in listed_actions(n, p)
    return f"symmetry-{CONFIRMED if listed else REFUTED}"


def non_round_solution(n: int, p) -> Optional[ScalarField]:
    """
    Solución no redonda del catálogo para p especiales: bola escalada (p=n+1),
    bola trasladada (p=1) y elipsoide de determinante 1 (p=−n−1).
    """
    p = as_rat(p)
    if p == n + 1:
        return scaled_field(unit_ball(n), 2.0)
    if p == 1:
        center = np.zeros(n + 1)
        center[0] = 0.3
        return ellipsoid_field(np.eye(n + 1), center)
    if p == -n - 1:
        A = np.eye(n + 1)
        A[0, 0], A[n, n] = 2.0, 0.5
        return ellipsoid_field(A)
    return None


# ============================================================================
# IDENTIDADES DE FUNCIONES SOPORTE
# ============================================================================

def certify_lemma(lemma: str, body: Sequence[Sequence[float]], params: Dict[str, Any],
                  plan: SamplePlan, center: Optional[Sequence[float]] = None,
                  variant: str = 'derived') -> ResidualReport:
    """
    Compara la forma cerrada de support_transform con el oráculo directo.

    Para K₁ = A·B + c y K₂ = M·K₁ + b el oráculo es
    q(Y) = |(MA)ᵀY| + ⟨Mc + b, Y⟩.

    Args:
        lemma: '4.1', '4.2', '5.1', '6.2' o '6.3'
        body: Matriz A de (n+1)×(n+1), no singular
        params: Parámetros de la transformación (ver actions.lemma_matrix)
        plan: Plan; se usan plan.samples direcciones de R^{n+1}
        center: Centro c del elipsoide
        variant: Variante de '6.3' usada para el veredicto
    """
    A = np.asarray(body, dtype=float)
    n = A.shape[0] - 1
    if A.shape != (n + 1, n + 1) or n != plan.n:
        raise ValueError(f"body matrix must be {plan.n + 1}x{plan.n + 1}")
    if abs(np.linalg.det(A)) < 1e-14:
        raise ValueError("singular ellipsoid matrix")
    c = np.zeros(n + 1) if center is None else np.asarray(center, dtype=float)
    h1 = ellipsoid_support(A, c)
    M, b = lemma_matrix(lemma, n, params)
    oracle = ellipsoid_support(M @ A, M @ c + b)

    variants = ['derived', 'stated'] if lemma == '6.3' else [variant]
    deviations: Dict[str, List[float]] = {name: [] for name in variants}
    for Y in plan.directions():
        X = Y if lemma == '5.1' else lemma_preimage(lemma, Y, params)
        expected = oracle(Y)
        for name in variants:
            q = support_transform(lemma, h1(X), Y, params, name)
            deviations[name].append(abs(q - expected))

    selected = deviations[variant]
    max_dev, mean_dev = _statistics(selected)
    details: Dict[str, Any] = {'variant': variant if lemma == '6.3' else None}
    if lemma == '6.3':
        details['variant_max_deviation'] = {name: max(values) for name, values in deviations.items()}
    verdict = _verdict('identity', selected, 0, plan.samples,
                       TOLERANCES['LEMMA'], TOLERANCES['REFUTE'])
    logger.info(f"Identidad {lemma}: desviación máxima {max_dev:.3e}")
    return ResidualReport(
        kind='lemma',
        subject={'lemma': lemma, 'body': A.tolist(), 'center': c.tolist(),
                 'params': {k: (np.asarray(v).tolist() if isinstance(v, (list, tuple, np.ndarray)) else v)
                            for k, v in params.items()}},
        n=n,
        p=None,
        max_abs=max_dev,
        max_residual=max_dev,
        mean_residual=mean_dev,
        samples=plan.samples,
        skipped=0,
        tolerance=TOLERANCES['LEMMA'],
        refute_threshold=TOLERANCES['REFUTE'],
        verdict=verdict,
        details=details,
    )


# ============================================================================
# RESOLUCIONES
# ============================================================================

def certify_resolution(a: GroupAction, plan: SamplePlan,
                       body: Optional[Sequence[Sequence[float]]] = None,
                       center: Optional[Sequence[float]] = None) -> ResidualReport:
    """
    Comprobación de punta a punta de la resolución de a.

    Compara la función soporte de resolve(a) aplicada a K₁ con
    support_from_projective(transport(a, u_{K₁})) en Y = unproject(y) para los
    puntos y del plan. En details se registran las formas cerradas de g8 y g9
    (ambas variantes) y, para g4 y g5, la desviación del signo enunciado de la
    traslación.
    """
    n = a.n
    if plan.n != n:
        raise ValueError("plan and action must share the dimension")
    A = np.eye(n + 1) if body is None else np.asarray(body, dtype=float)
    c = np.zeros(n + 1) if center is None else np.asarray(center, dtype=float)
    h1 = ellipsoid_support(A, c)
    v = a.transport(ellipsoid_field(A, c))
    resolution = resolve(a)
    M, b = compose_transforms(resolution)

    stated_b = stated_translation(a) if a.id in ('g4', 'g5') else None
    lemma = {'g8': '6.2', 'g9': '6.3'}.get(a.id)
    variants = ['derived', 'stated'] if lemma == '6.3' else ['derived']
    closed: Dict[str, List[float]] = {name: [] for name in variants}
    stated: List[float] = []

    deviations: List[float] = []
    skipped = 0
    for y in plan.points():
        try:
            transported = v.value(y) / np.sqrt(1.0 + float(y @ y))
        except ActionDomainError:
            skipped += 1
            continue
        Y = unproject(y)
        resolved = h1(M.T @ Y) + float(b @ Y)
        deviations.append(abs(resolved - transported))
        if stated_b is not None:
            stated.append(abs(h1(Y) + float(stated_b @ Y) - transported))
        if lemma is not None:
            params = {'eps': a.eps, 'axis': a.axis}
            X = lemma_preimage(lemma, Y, params)
            for name in variants:
                q = support_transform(lemma, h1(X), Y, params, name)
                closed[name].append(abs(q - transported))

    details: Dict[str, Any] = {
        'resolution': [t.to_dict() for t in resolution] if isinstance(resolution, list)
        else resolution.to_dict(),
    }
    if stated_b is not None:
        details['translation'] = b.tolist()
        details['stated_translation'] = stated_b.tolist()
        details['stated_translation_max_deviation'] = max(stated) if stated else None
    if lemma is not None:
        details['closed_form_max_deviation'] = {name: (max(values) if values else None)
                                                for name, values in closed.items()}

    max_dev, mean_dev = _statistics(deviations)
    verdict = _verdict('identity', deviations, skipped, plan.samples,
                       TOLERANCES['RESOLUTION'], TOLERANCES['REFUTE'])
    logger.info(f"Resolución de {a.label()}: desviación máxima {max_dev:.3e}")
    return ResidualReport(
        kind='resolution',
        subject={'action': a.describe(), 'body': A.tolist(), 'center': c.tolist()},
        n=n,
        p=None,
        max_abs=max_dev,
        max_residual=max_dev,
        mean_residual=mean_dev,
        samples=plan.samples,
        skipped=skipped,
        tolerance=TOLERANCES['RESOLUTION'],
        refute_threshold=TOLERANCES['REFUTE'],
        verdict=verdict,
        details=details,
    )


# ============================================================================
# SUITE POR DEFECTO
# ============================================================================

def suite_exponents(n: int) -> List[Fraction]:
    """Los tres exponentes especiales y uno genérico (5/2)."""
    return [Fraction(n + 1), Fraction(1), Fraction(-n - 1), Fraction(5, 2)]


def default_lemma_params(lemma: str, n: int) -> Dict[str, Any]:
    """Parámetros de transformación usados por la suite para cada identidad."""
    if lemma == '4.1':
        eps = 0.4
        M = np.eye(n + 1)
        M[0, 0], M[0, n] = np.cos(eps), -np.sin(eps)
        M[n, 0], M[n, n] = np.sin(eps), np.cos(eps)
        return {'matrix': M}
    if lemma == '4.2':
        return {'factors': [1.5 + 0.25 * k for k in range(n + 1)]}
    if lemma == '5.1':
        vector = np.zeros(n + 1)
        vector[0], vector[n] = -0.2, 0.5
        return {'vector': vector}
    if lemma in ('6.2', '6.3'):
        return {'eps': 0.2, 'axis': 0}
    raise ValueError(f"unknown lemma: {lemma}")


def default_body(n: int) -> np.ndarray:
    """Elipsoide genérico de prueba: diagonal dominante con un término cruzado."""
    A = np.diag([1.0 + 0.5 * k for k in range(n + 1)])
    A[0, n] = 0.3
    return A


def default_suite(n: int, plan: Optional[SamplePlan] = None) -> List[ResidualReport]:
    """
    Todos los controles positivos y negativos de una dimensión.

    Para cada p de suite_exponents y cada acción aplicable se certifica u₀;
    las acciones listadas también se certifican sobre la solución no redonda.
    Se añaden las cinco identidades y la resolución de cada acción.
    """
    plan = plan or SamplePlan(n=n, radius=SAMPLING['ACCEPTANCE_RADIUS'])
    reports: List[ResidualReport] = []
    base = unit_ball(n)
    ids = [i for i in ACTION_IDS if not (n == 1 and i in MATRIX_ACTIONS)]

    for p in suite_exponents(n):
        listed = listed_actions(n, p)
        other = non_round_solution(n, p)
        for action_id in ids:
            action = make_action(action_id, n)
            reports.append(certify_action(action, p, base, plan))
            if other is not None and action_id in listed:
                reports.append(certify_action(action, p, other, plan))

    for lemma in ('4.1', '4.2', '5.1', '6.2', '6.3'):
        reports.append(certify_lemma(lemma, default_body(n), default_lemma_params(lemma, n), plan))

    for action_id in ids:
        reports.append(certify_resolution(make_action(action_id, n), plan))

    mismatches = [r for r in reports if r.kind == 'action'
                  and r.verdict != expected_verdict(r.subject['action']['id'], n, r.p)]
    if mismatches:
        logger.error(f"{len(mismatches)} veredictos no coinciden con la tabla de acciones")
    return reports
