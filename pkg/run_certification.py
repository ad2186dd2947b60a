"""
Script principal para ejecutar la certificación completa.

Clasifica el álgebra de simetrías para n = 1, 2, 3 en los exponentes de la
suite, certifica todas las acciones (controles positivos y negativos), las
identidades de funciones soporte y las resoluciones, y guarda JSON y Excel
consolidados en data/output/.

Uso:
    python run_certification.py
"""

import os, sys
os.environ.setdefault('PYTHONIOENCODING', 'utf-8')
if hasattr(sys.stdout, 'reconfigure'):
    sys.stdout.reconfigure(encoding='utf-8', errors='replace')
import logging
from pathlib import Path
from datetime import datetime

import pandas as pd

# Agregar src al path
sys.path.append(str(Path(__file__).parent))

from src.classify import classify
from src.verify import SamplePlan, default_suite, expected_verdict, suite_exponents
from src.report_generator import ReportGenerator
from config import LOGS_DIR, MESSAGES, OUTPUT_FOLDER, SAMPLING

# Configurar logging
LOGS_DIR.mkdir(parents=True, exist_ok=True)
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.FileHandler(LOGS_DIR / f'certificacion_{datetime.now().strftime("%Y%m%d_%H%M%S")}.log'),
        logging.StreamHandler()
    ]
)
logger = logging.getLogger(__name__)

DIMENSIONS = (1, 2, 3)


def print_header():
    """Imprime encabezado del script."""
    print(MESSAGES['BIENVENIDA'])
    print(f"Fecha y hora: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")


def classify_dimension(n: int) -> list:
    """
    Clasifica el álgebra para cada exponente de la suite.

    Returns:
        list: Filas con p, dimensión obtenida y esperada, familias y cierre
    """
    rows = []
    for p in suite_exponents(n):
        print(f"  {MESSAGES['CLASIFICANDO'].format(n=n, p=p)}", end=" ")
        try:
            basis = classify(n, p)
            summary = basis.to_dict()
            rows.append({
                'n': n,
                'p': str(p),
                'case': summary['case'],
                'dimension': basis.dimension,
                'expected_dimension': summary['expected_dimension'],
                'closure': basis.checks['closure'],
                'families': ", ".join(f"{t} x{c}" for t, c in summary['tag_counts'].items()),
            })
            status = "[OK]" if basis.dimension == summary['expected_dimension'] else "[X]"
            print(f"{status} dim={basis.dimension}")
        except Exception as e:
            logger.error(f"Error clasificando n={n}, p={p}: {str(e)}", exc_info=True)
            print(f"[X] Error: {str(e)}")
    return rows


def certify_dimension(n: int) -> list:
    """Ejecuta la suite de certificación de una dimensión."""
    plan = SamplePlan(n=n, radius=SAMPLING['ACCEPTANCE_RADIUS'])
    print(f"  {MESSAGES['CERTIFICANDO'].format(n=n, samples=plan.samples, radius=plan.radius)}")
    reports = default_suite(n, plan)
    mismatches = 0
    for report in reports:
        if report.kind == 'action':
            expected = expected_verdict(report.subject['action']['id'], n, report.p)
            ok = report.verdict == expected
        else:
            ok = report.outcome == 'confirmed'
        mismatches += 0 if ok else 1
    print(f"    [OK] {len(reports) - mismatches}/{len(reports)} reportes según lo esperado")
    if mismatches:
        print(f"    [!]  {mismatches} reportes con veredicto inesperado")
    return reports


def main():
    """Función principal."""
    print_header()
    OUTPUT_FOLDER.mkdir(parents=True, exist_ok=True)
    generator = ReportGenerator()

    print("=" * 60)
    print("CLASIFICACIÓN")
    print("=" * 60 + "\n")
    classification = []
    for n in DIMENSIONS:
        classification.extend(classify_dimension(n))

    print("\n" + "=" * 60)
    print("CERTIFICACIÓN NUMÉRICA")
    print("=" * 60 + "\n")
    reports = []
    for n in DIMENSIONS:
        try:
            reports.extend(certify_dimension(n))
        except Exception as e:
            logger.error(f"Error certificando n={n}: {str(e)}", exc_info=True)
            print(f"    [X] Error: {str(e)}")

    # Reportes consolidados
    report_dicts = [r.to_dict() for r in reports]
    envelope = generator.build_envelope(
        'certification',
        {'dimensions': list(DIMENSIONS), 'sampling': SAMPLING},
        {'classification': classification, 'reports': report_dicts},
    )
    json_path = generator.generate_json_report(envelope, str(OUTPUT_FOLDER / 'certificacion.json'))
    excel_path = generator.generate_excel(
        {
            'Clasificacion': pd.DataFrame(classification),
            'Certificacion': generator.reports_dataframe(report_dicts),
        },
        str(OUTPUT_FOLDER / 'certificacion.xlsx'),
    )

    # Resumen final
    print("\n" + "=" * 60)
    print("RESUMEN FINAL")
    print("=" * 60)
    wrong_dims = [row for row in classification if row['dimension'] != row['expected_dimension']]
    print(f"\n[OK] Clasificaciones: {len(classification)} ({len(wrong_dims)} con dimensión inesperada)")
    by_verdict = pd.Series([r.verdict for r in reports]).value_counts() if reports else {}
    for verdict, count in dict(by_verdict).items():
        print(f"   - {verdict}: {count}")
    print(f"\n{MESSAGES['SUITE_COMPLETA'].format(output_path=OUTPUT_FOLDER)}")
    print(f"   - JSON: {json_path}")
    print(f"   - Excel: {excel_path}")


if __name__ == '__main__':
    main()
