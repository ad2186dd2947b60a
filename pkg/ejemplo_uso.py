"""
Ejemplos de uso de la biblioteca de simetrías.

Este archivo contiene ejemplos prácticos de cómo usar el sistema
para los casos de uso más comunes.
"""

import numpy as np

# Importar módulos
from src.classify import classify, contains_field, reference_generators, scan
from src.actions import make_action, resolve, sl_decompose, support_transform
from src.geometry import unit_ball
from src.verify import SamplePlan, certify_action, certify_resolution


def ejemplo_1_clasificacion():
    """
    EJEMPLO 1: Álgebra de simetrías para n = 2, p = −3.
    """
    print("\n" + "=" * 60)
    print("EJEMPLO 1: Clasificación del álgebra (n=2, p=-3)")
    print("=" * 60 + "\n")

    basis = classify(2, "-3")
    print(f"Dimensión: {basis.dimension}")
    for generator, tag in zip(basis.generators, basis.tags):
        print(f"  [{tag}] {generator.render()}")

    # Los generadores de referencia pertenecen al espacio generado
    for name, field in reference_generators(2, "-3").items():
        print(f"  {name}: {'sí' if contains_field(basis, field) else 'NO'}")


def ejemplo_2_barrido():
    """
    EJEMPLO 2: Dimensión del álgebra a lo largo de p.
    """
    print("\n" + "=" * 60)
    print("EJEMPLO 2: Barrido en p")
    print("=" * 60 + "\n")

    for row in scan(2, ["-4", "-3", "1", "3", "5/2"]):
        print(f"  p={row['p']}: dim={row['dimension']} ({row['case']})")


def ejemplo_3_certificacion():
    """
    EJEMPLO 3: Certificar una acción y un control negativo.
    """
    print("\n" + "=" * 60)
    print("EJEMPLO 3: Certificación numérica")
    print("=" * 60 + "\n")

    plan = SamplePlan(n=2, radius=5.0, samples=200)
    scaling = make_action('g2', 2, eps=2.0)
    for p in ("3", "4"):
        report = certify_action(scaling, p, unit_ball(2), plan)
        print(f"  g2 con p={p}: {report.verdict} (max {report.max_residual:.2e})")


def ejemplo_4_resoluciones():
    """
    EJEMPLO 4: Resolución de acciones en transformaciones de cuerpos.
    """
    print("\n" + "=" * 60)
    print("EJEMPLO 4: Resoluciones")
    print("=" * 60 + "\n")

    plan = SamplePlan(n=2, radius=5.0, samples=200)
    for action_id in ('g3', 'g4', 'g8', 'g9'):
        action = make_action(action_id, 2)
        report = certify_resolution(action, plan)
        print(f"  {action.label()} -> {resolve(action).kind}: {report.verdict}")
        if 'closed_form_max_deviation' in report.details:
            print(f"     formas cerradas: {report.details['closed_form_max_deviation']}")

    Y = np.array([1.0, 0.0, 1.0]) / np.sqrt(2.0)
    q = support_transform('6.2', 1.0, Y, {'eps': 1.0, 'axis': 0})
    print(f"  q(Y) del cizallamiento H con eps=1: {q:.6f} (sqrt(5/2) = {np.sqrt(2.5):.6f})")


def ejemplo_5_descomposicion():
    """
    EJEMPLO 5: Descomposición A = P diag(lambda) Q de una matriz de SL(2).
    """
    print("\n" + "=" * 60)
    print("EJEMPLO 5: Descomposición en SL(2)")
    print("=" * 60 + "\n")

    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    P, lam, Q = sl_decompose(A)
    print(f"  lambda = {lam}")
    print(f"  error de reconstrucción = {np.max(np.abs(P @ np.diag(lam) @ Q - A)):.2e}")


def main():
    """Ejecuta todos los ejemplos."""
    ejemplo_1_clasificacion()
    ejemplo_2_barrido()
    ejemplo_3_certificacion()
    ejemplo_4_resoluciones()
    ejemplo_5_descomposicion()


if __name__ == '__main__':
    main()
