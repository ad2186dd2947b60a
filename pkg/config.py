"""
Configuración global del proyecto de simetrías de la ecuación L_p-Minkowski proyectada.

Este archivo contiene todas las configuraciones centralizadas para:
- Rutas de archivos y carpetas
- Tolerancias numéricas de certificación
- Parámetros de muestreo y de clasificación
- Configuración de logging
- Exportación de resultados
"""

from pathlib import Path

# ============================================================================
# RUTAS DEL PROYECTO
# ============================================================================

# Directorio base del proyecto
BASE_DIR = Path(__file__).parent.absolute()

# Directorios de datos
DATA_DIR = BASE_DIR / "data"
OUTPUT_FOLDER = DATA_DIR / "output"

# Registros de ejecución
LOGS_DIR = BASE_DIR / "logs"

# ============================================================================
# TOLERANCIAS NUMÉRICAS
# ============================================================================

TOLERANCES = {
    # Veredictos de certificación de acciones (residuo relativo máximo)
    'CONFIRM': 1e-9,
    'REFUTE': 1e-3,
    # Identidades de funciones soporte (desviación absoluta máxima)
    'LEMMA': 1e-10,
    'RESOLUTION': 1e-10,
    # Precondición: el campo base debe resolver la ecuación
    'BASE_SOLUTION': 1e-10,
    # Muestras sobre la variedad solución (det H = s)
    'ON_MANIFOLD': 1e-9,
    # Álgebra lineal numérica
    'SYMMETRIC': 1e-12,
    'ORTHOGONAL': 1e-12,
    'UNIMODULAR': 1e-10,
    'JACOBI': 1e-15,
    # Denominadores de g3 y g9: por debajo el punto se omite
    'DOMAIN_MARGIN': 1e-2,
}

# Fracción máxima de puntos omitidos antes de declarar el reporte inconcluso
SKIP_RATIO_LIMIT = 0.5

# ============================================================================
# MUESTREO
# ============================================================================

SAMPLING = {
    'RADIUS': 10.0,
    'ACCEPTANCE_RADIUS': 5.0,
    'SAMPLES': 1000,
    'SEED': 20240517,
    'JACOBI_MAX_SWEEPS': 64,
}

# Parámetro por defecto de cada acción cuando no se indica --eps
DEFAULT_EPS = {
    'g1': 0.4,
    'g2': 2.0,
    'g3': 0.3,
    'g4': 0.5,
    'g5': 0.5,
    'g6': 0.4,
    'g7': 0.3,
    'g8': 0.2,
    'g9': 0.2,
}

# ============================================================================
# CLASIFICACIÓN
# ============================================================================

CLASSIFY_CONFIG = {
    'ANSATZ_DEGREE': 3,
    'MIN_ANSATZ_DEGREE': 2,
}

# Identificadores de los lemas de funciones soporte
LEMMA_IDS = ['4.1', '4.2', '5.1', '6.2', '6.3']

# Variantes de la forma cerrada del lema del cizallamiento Q
LEMMA_VARIANTS = ['derived', 'stated']

# ============================================================================
# CONFIGURACIÓN DE PROCESAMIENTO
# ============================================================================

CONFIG = {
    # Rutas
    'OUTPUT_FOLDER': str(OUTPUT_FOLDER),

    # Logging
    'LOG_LEVEL': 'WARNING',  # DEBUG, INFO, WARNING, ERROR, CRITICAL

    # Procesamiento paralelo (solo scan)
    'PARALLEL_PROCESSING': False,
    'MAX_WORKERS': 4,

    # Exportación
    'EXPORT_FORMATS': ['text', 'json', 'csv', 'xlsx'],
    'JSON_SCHEMA': 1,
}

# ============================================================================
# MENSAJES Y TEXTOS
# ============================================================================

MESSAGES = {
    'BIENVENIDA': """
    ===============================================================
       SIMETRIAS DE LIE DE LA ECUACION L_p-MINKOWSKI PROYECTADA
       det D^2 u = (1+|x|^2)^(-(p+n+1)/2) u^(p-1)
    ===============================================================
    """,
    'CLASIFICANDO': 'Clasificando álgebra de simetrías: n={n}, p={p}...',
    'CERTIFICANDO': 'Certificando n={n} con {samples} puntos (R={radius})...',
    'SUITE_COMPLETA': 'Suite completada. Resultados guardados en {output_path}.',
}

# ============================================================================
# VALIDACIÓN DE CONFIGURACIÓN
# ============================================================================

def validate_config():
    """Valida que la configuración sea correcta."""
    errors = []

    if TOLERANCES['CONFIRM'] >= TOLERANCES['REFUTE']:
        errors.append("La tolerancia de confirmación debe ser menor que el umbral de refutación")

    if not 0 < SKIP_RATIO_LIMIT < 1:
        errors.append(f"SKIP_RATIO_LIMIT debe estar en (0, 1) (actual: {SKIP_RATIO_LIMIT})")

    if SAMPLING['RADIUS'] <= 0 or SAMPLING['ACCEPTANCE_RADIUS'] <= 0:
        errors.append("Los radios de muestreo deben ser positivos")

    if CLASSIFY_CONFIG['ANSATZ_DEGREE'] < CLASSIFY_CONFIG['MIN_ANSATZ_DEGREE']:
        errors.append("El grado del ansatz por defecto no contiene los generadores conocidos")

    if errors:
        raise ValueError("Errores en configuración:\n" + "\n".join(errors))

    return True

# Ejecutar validación al importar
try:
    validate_config()
except ValueError as e:
    print(f"ADVERTENCIA: {e}")

if __name__ == '__main__':
    print("Configuración del proyecto:")
    print(f"BASE_DIR: {BASE_DIR}")
    print(f"OUTPUT_FOLDER: {OUTPUT_FOLDER}")
    print(f"\nTolerancias configuradas: {len(TOLERANCES)}")
    for nombre, valor in TOLERANCES.items():
        print(f"  - {nombre}: {valor:g}")
