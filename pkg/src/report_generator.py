"""
Módulo de generación de reportes.

Genera reportes en múltiples formatos:
- JSON (sobre versionado {schema, command, inputs, results, timing_ms})
- Texto legible para la terminal
- CSV y Excel (tablas de barrido y de certificación)
"""

import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

import sys
sys.path.append(str(Path(__file__).parent.parent))

from config import CONFIG, OUTPUT_FOLDER

logger = logging.getLogger(__name__)


def convert_to_native_types(obj: Any) -> Any:
    """
    Convierte tipos numpy y Fraction a tipos nativos de Python para serialización JSON.

    Las fracciones se escriben como cadenas "a/b" (o "a" si son enteras) y los
    NaN como null.

    Args:
        obj: Objeto a convertir

    Returns:
        Objeto con tipos nativos de Python
    """
    if isinstance(obj, dict):
        return {str(k): convert_to_native_types(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [convert_to_native_types(item) for item in obj]
    elif isinstance(obj, Fraction):
        return str(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return convert_to_native_types(float(obj))
    elif isinstance(obj, float) and math.isnan(obj):
        return None
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.ndarray):
        return convert_to_native_types(obj.tolist())
    else:
        return obj


class ReportGenerator:
    """
    Generador de reportes en múltiples formatos.

    Example:
        >>> generator = ReportGenerator()
        >>> envelope = generator.build_envelope('scan', {'n': 2}, [])
        >>> sorted(envelope)
        ['command', 'inputs', 'results', 'schema', 'timing_ms']
    """

    def __init__(self, output_folder: Optional[str] = None):
        """
        Inicializa el generador de reportes.

        Args:
            output_folder: Carpeta de salida para reportes (se crea al escribir)
        """
        self.output_folder = Path(output_folder or OUTPUT_FOLDER)
        logger.debug(f"ReportGenerator inicializado. Output: {self.output_folder}")

    def _resolve(self, output_path: str) -> Path:
        path = Path(output_path)
        if not path.is_absolute() and path.parent == Path('.'):
            path = self.output_folder / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    # ------------------------------------------------------------------
    # JSON
    # ------------------------------------------------------------------

    def build_envelope(self, command: str, inputs: Dict, results: Any,
                       timing_ms: Optional[float] = None) -> Dict[str, Any]:
        """Sobre versionado; timing_ms queda en null salvo que se pida."""
        return convert_to_native_types({
            'schema': CONFIG['JSON_SCHEMA'],
            'command': command,
            'inputs': inputs,
            'results': results,
            'timing_ms': timing_ms,
        })

    @staticmethod
    def to_json_text(envelope: Dict[str, Any]) -> str:
        return json.dumps(convert_to_native_types(envelope), ensure_ascii=False,
                          indent=2, sort_keys=True) + "\n"

    def generate_json_report(self, envelope: Dict[str, Any], output_path: str) -> str:
        """
        Guarda el sobre JSON.

        Returns:
            str: Ruta del archivo generado
        """
        logger.info("Generando reporte JSON")
        output_path = self._resolve(output_path)
        with open(output_path, 'w', encoding='utf-8') as f:
            f.write(self.to_json_text(envelope))
        logger.info(f"Reporte JSON generado: {output_path}")
        return str(output_path)

    # ------------------------------------------------------------------
    # Tablas
    # ------------------------------------------------------------------

    @staticmethod
    def scan_dataframe(rows: List[Dict[str, Any]]) -> pd.DataFrame:
        """Tabla p / dimension / case / expected_dimension con p como texto exacto."""
        df = pd.DataFrame(convert_to_native_types(rows),
                          columns=['p', 'dimension', 'case', 'expected_dimension'])
        return df

    @staticmethod
    def reports_dataframe(reports: List[Dict[str, Any]]) -> pd.DataFrame:
        """Una fila por ResidualReport.to_dict()."""
        rows = []
        for report in convert_to_native_types(reports):
            subject = report['subject']
            action = subject.get('action') or {}
            rows.append({
                'kind': report['kind'],
                'subject': action.get('id') or subject.get('lemma'),
                'axis': action.get('axis'),
                'eps': action.get('eps'),
                'field': (subject.get('field') or {}).get('kind'),
                'n': report['n'],
                'p': report['p'],
                'max_residual': report['max_residual'],
                'mean_residual': report['mean_residual'],
                'samples': report['samples'],
                'skipped': report['skipped'],
                'tolerance': report['tolerance'],
                'verdict': report['verdict'],
            })
        return pd.DataFrame(rows)

    def generate_csv(self, df: pd.DataFrame, output_path: str) -> str:
        output_path = self._resolve(output_path)
        df.to_csv(output_path, index=False)
        logger.info(f"CSV generado: {output_path}")
        return str(output_path)

    def generate_excel(self, sheets: Dict[str, pd.DataFrame], output_path: str) -> str:
        """
        Genera un Excel con una hoja por tabla y anchos de columna ajustados.

        Args:
            sheets (Dict[str, pd.DataFrame]): Nombre de hoja → tabla
            output_path (str): Ruta de salida del Excel

        Returns:
            str: Ruta del archivo generado
        """
        logger.info(f"Generando Excel con {len(sheets)} hojas")
        output_path = self._resolve(output_path)

        with pd.ExcelWriter(output_path, engine='openpyxl') as writer:
            for sheet_name, df in sheets.items():
                df.to_excel(writer, sheet_name=sheet_name[:31], index=False)
                worksheet = writer.sheets[sheet_name[:31]]

                # Auto-ajustar anchos de columna
                for column in worksheet.columns:
                    max_length = max((len(str(cell.value)) for cell in column
                                      if cell.value is not None), default=0)
                    adjusted_width = min(max_length + 2, 50)
                    worksheet.column_dimensions[column[0].column_letter].width = adjusted_width

        logger.info(f"Excel generado: {output_path}")
        return str(output_path)

    # ------------------------------------------------------------------
    # Texto
    # ------------------------------------------------------------------

    def render_text(self, envelope: Dict[str, Any]) -> str:
        """Resumen legible del sobre para la terminal."""
        envelope = convert_to_native_types(envelope)
        command = envelope['command']
        results = envelope['results']
        if command == 'classify':
            lines = self._classify_lines(results)
        elif command == 'scan':
            lines = ["p\tdimension\tcase\texpected"]
            lines += [f"{r['p']}\t{r['dimension']}\t{r['case']}\t{r['expected_dimension']}"
                      for r in results]
        elif command in ('verify', 'lemma', 'resolve'):
            lines = self._report_lines(results)
        elif command == 'decompose':
            lines = [
                f"lambda = {results['lambda']}",
                f"P = {results['P']}",
                f"Q = {results['Q']}",
                f"error de reconstruccion = {results['reconstruction_error']:.3e}",
            ]
        else:
            lines = [json.dumps(results, ensure_ascii=False, sort_keys=True)]
        if envelope.get('timing_ms') is not None:
            lines.append(f"tiempo: {envelope['timing_ms']:.1f} ms")
        return "\n".join(lines) + "\n"

    @staticmethod
    def _classify_lines(results: Dict[str, Any]) -> List[str]:
        system = results['linear_system']
        lines = [
            f"n = {results['n']}, p = {results['p']} ({results['case']})",
            f"dimension = {results['dimension']} (esperada {results['expected_dimension']})",
            f"sistema lineal: {system['rows']} filas, {system['unknowns']} incognitas, "
            f"rango {system['rank']}",
        ]
        for k, generator in enumerate(results['generators'], start=1):
            lines.append(f"  v{k} [{generator['tag']}]: {generator['field']}")
        counts = ", ".join(f"{tag} x{count}" for tag, count in results['tag_counts'].items())
        lines.append(f"familias: {counts}")
        return lines

    @staticmethod
    def _report_lines(results: Any) -> List[str]:
        reports = results if isinstance(results, list) else [results]
        lines = []
        for report in reports:
            subject = report['subject']
            label = (subject.get('action') or {}).get('id') or subject.get('lemma')
            p = f" p={report['p']}" if report['p'] is not None else ""
            maximum = report['max_residual']
            maximum = "nan" if maximum is None else f"{maximum:.3e}"
            lines.append(f"{report['kind']} {label}{p}: {report['verdict']} "
                         f"(max {maximum}, omitidos {report['skipped']}/{report['samples']})")
            for key, value in sorted(report['details'].items()):
                if value is not None and key != 'resolution':
                    lines.append(f"    {key}: {value}")
        return lines
