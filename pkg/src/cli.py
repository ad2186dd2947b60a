"""
Interfaz de línea de comandos.

Subcomandos: classify, scan, verify, resolve, decompose y lemma. Cada uno
produce un sobre JSON versionado que se muestra como texto, JSON, CSV o Excel.

Códigos de salida: 0 éxito, 1 error de uso o de entrada, 2 veredicto inesperado.

Uso:
    simetria-lp classify --n 2 --p -3
    simetria-lp scan --n 2 --p-from -4 --p-to 4 --step 1 --format csv
    simetria-lp verify --n 2 --p 3 --action g2 --eps 2
"""

import argparse
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

sys.path.append(str(Path(__file__).parent.parent))

from config import CLASSIFY_CONFIG, CONFIG, LEMMA_IDS, LEMMA_VARIANTS, SAMPLING

from .actions import ACTION_IDS, make_action, plane_rotation_matrix, sl_decompose
from .classify import classify, scan
from .exact import as_rat
from .geometry import unit_ball
from .report_generator import ReportGenerator
from .verify import (SamplePlan, certify_action, certify_lemma, certify_resolution,
                     default_body, default_lemma_params, expected_verdict)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2


class UsageError(Exception):
    """Argumentos inválidos en la línea de comandos."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ============================================================================
# PARSEO
# ============================================================================

def parse_rational(text: str) -> Fraction:
    """Racional exacto desde "a/b" o un decimal en base 10."""
    return as_rat(text)


def parse_matrix(text: str) -> np.ndarray:
    """Matriz desde "a,b;c,d" (las entradas admiten "a/b")."""
    try:
        rows = [[float(as_rat(entry)) for entry in row.split(',')] for row in text.split(';')]
    except ValueError:
        raise ValueError(f"invalid matrix: {text!r}")
    if len({len(row) for row in rows}) != 1:
        raise ValueError("matrix rows must be rectangular")
    return np.array(rows)


def p_range(p_from: Fraction, p_to: Fraction, step: Fraction) -> List[Fraction]:
    if step <= 0:
        raise ValueError("step must be positive")
    if p_from > p_to:
        raise ValueError("empty p range")
    values = []
    p = p_from
    while p <= p_to:
        values.append(p)
        p += step
    return values


# Opciones cuyos valores pueden empezar por '-' (racionales y matrices negativas)
VALUE_FLAGS = ('--p', '--p-list', '--p-from', '--p-to', '--step', '--eps', '--matrix', '--body')


def join_negative_values(argv: Sequence[str]) -> List[str]:
    """Une '--p -3/1' en '--p=-3/1' para que argparse no lo tome como opción."""
    joined: List[str] = []
    tokens = list(argv)
    k = 0
    while k < len(tokens):
        token = tokens[k]
        following = tokens[k + 1] if k + 1 < len(tokens) else None
        if token in VALUE_FLAGS and following is not None and following.startswith('-') \
                and not following.startswith('--'):
            joined.append(f"{token}={following}")
            k += 2
            continue
        joined.append(token)
        k += 1
    return joined


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='simetria-lp',
                     description='Simetrías de Lie de la ecuación L_p-Minkowski proyectada')
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)

    def common(p: argparse.ArgumentParser, with_p: bool = True):
        p.add_argument('--n', type=int, required=True, help='Dimensión n >= 1')
        if with_p:
            p.add_argument('--p', type=parse_rational, required=True, help='Exponente "a/b"')
        p.add_argument('--format', choices=CONFIG['EXPORT_FORMATS'], default='text')
        p.add_argument('--out', help='Archivo de salida')
        p.add_argument('--timing', action='store_true', help='Registrar timing_ms')

    def sampling(p: argparse.ArgumentParser):
        p.add_argument('--samples', type=int, default=SAMPLING['SAMPLES'])
        p.add_argument('--radius', type=float, default=SAMPLING['ACCEPTANCE_RADIUS'])
        p.add_argument('--seed', type=int, default=SAMPLING['SEED'])

    def action_args(p: argparse.ArgumentParser):
        p.add_argument('--action', required=True, choices=ACTION_IDS)
        p.add_argument('--eps', type=float)
        p.add_argument('--axis', type=int, help='Eje i (1..n)')
        p.add_argument('--matrix', type=parse_matrix, help='Matriz "a,b;c,d" para g1/g6')

    expect = ['confirmed', 'refuted', 'inconclusive']

    p_classify = sub.add_parser('classify', help='Álgebra de simetrías para (n, p)')
    common(p_classify)
    p_classify.add_argument('--ansatz-degree', type=int, default=CLASSIFY_CONFIG['ANSATZ_DEGREE'])

    p_scan = sub.add_parser('scan', help='Dimensión del álgebra a lo largo de p')
    common(p_scan, with_p=False)
    p_scan.add_argument('--p-list', help='Lista "a/b,c/d,..."')
    p_scan.add_argument('--p-from', type=parse_rational)
    p_scan.add_argument('--p-to', type=parse_rational)
    p_scan.add_argument('--step', type=parse_rational, default=Fraction(1))
    p_scan.add_argument('--ansatz-degree', type=int, default=CLASSIFY_CONFIG['ANSATZ_DEGREE'])

    p_verify = sub.add_parser('verify', help='Certifica una acción sobre la bola unidad')
    common(p_verify)
    sampling(p_verify)
    action_args(p_verify)
    p_verify.add_argument('--expect', choices=expect)

    p_resolve = sub.add_parser('resolve', help='Resolución de una acción en un cuerpo convexo')
    common(p_resolve, with_p=False)
    sampling(p_resolve)
    action_args(p_resolve)
    p_resolve.add_argument('--body', type=parse_matrix, help='Matriz del elipsoide (n+1)x(n+1)')
    p_resolve.add_argument('--expect', choices=expect, default='confirmed')

    p_decompose = sub.add_parser('decompose', help='A = P diag(lambda) Q en SL(n)')
    p_decompose.add_argument('--matrix', type=parse_matrix, required=True)
    p_decompose.add_argument('--format', choices=['text', 'json'], default='text')
    p_decompose.add_argument('--out')
    p_decompose.add_argument('--timing', action='store_true')

    p_lemma = sub.add_parser('lemma', help='Identidad de funciones soporte contra el oráculo')
    common(p_lemma, with_p=False)
    sampling(p_lemma)
    p_lemma.add_argument('--lemma', required=True, choices=LEMMA_IDS)
    p_lemma.add_argument('--eps', type=float)
    p_lemma.add_argument('--axis', type=int, default=1)
    p_lemma.add_argument('--body', type=parse_matrix)
    p_lemma.add_argument('--variant', choices=LEMMA_VARIANTS, default='derived')
    p_lemma.add_argument('--expect', choices=expect, default='confirmed')
    return parser


# ============================================================================
# COMANDOS
# ============================================================================

def _axis(args) -> Optional[int]:
    return None if args.axis is None else args.axis - 1


def _action(args):
    return make_action(args.action, args.n, args.eps, _axis(args), args.matrix)


def _plan(args) -> SamplePlan:
    return SamplePlan(n=args.n, radius=args.radius, samples=args.samples, seed=args.seed)


def cmd_classify(args):
    basis = classify(args.n, args.p, args.ansatz_degree)
    return basis.to_dict(), EXIT_OK


def cmd_scan(args):
    if args.p_list:
        values = [parse_rational(text) for text in args.p_list.split(',') if text.strip()]
    elif args.p_from is not None and args.p_to is not None:
        values = p_range(args.p_from, args.p_to, args.step)
    else:
        raise UsageError("scan needs --p-list or --p-from/--p-to")
    return scan(args.n, values, args.ansatz_degree), EXIT_OK


def cmd_verify(args):
    report = certify_action(_action(args), args.p, unit_ball(args.n), _plan(args))
    wanted = args.expect or expected_verdict(args.action, args.n, args.p).split('-')[-1]
    return report.to_dict(), EXIT_OK if report.outcome == wanted else EXIT_MISMATCH


def cmd_resolve(args):
    report = certify_resolution(_action(args), _plan(args), args.body)
    return report.to_dict(), EXIT_OK if report.outcome == args.expect else EXIT_MISMATCH


def cmd_lemma(args):
    n, axis = args.n, args.axis - 1
    if not 0 <= axis < n:
        raise ValueError(f"axis must be in 1..{n}")
    params = default_lemma_params(args.lemma, n)
    if args.eps is not None:
        if args.lemma in ('6.2', '6.3'):
            params = {'eps': args.eps, 'axis': axis}
        elif args.lemma == '4.1':
            params = {'matrix': plane_rotation_matrix(n, axis, args.eps)}
        elif args.lemma == '4.2':
            params = {'factors': [args.eps] * (n + 1)}
        else:
            vector = np.zeros(n + 1)
            vector[axis] = args.eps
            params = {'vector': vector}
    elif args.lemma in ('6.2', '6.3'):
        params['axis'] = axis
    body = default_body(n) if args.body is None else args.body
    report = certify_lemma(args.lemma, body, params, _plan(args), variant=args.variant)
    return report.to_dict(), EXIT_OK if report.outcome == args.expect else EXIT_MISMATCH


def cmd_decompose(args):
    A = args.matrix
    P, lam, Q = sl_decompose(A)
    results = {
        'P': P,
        'lambda': lam,
        'Q': Q,
        'reconstruction_error': float(np.max(np.abs(P @ np.diag(lam) @ Q - A))),
        'det_P': float(np.linalg.det(P)),
        'det_Q': float(np.linalg.det(Q)),
    }
    return results, EXIT_OK


COMMANDS = {
    'classify': cmd_classify,
    'scan': cmd_scan,
    'verify': cmd_verify,
    'resolve': cmd_resolve,
    'decompose': cmd_decompose,
    'lemma': cmd_lemma,
}


def _inputs(args) -> Dict[str, Any]:
    skip = {'command', 'format', 'out', 'timing'}
    return {key: value for key, value in sorted(vars(args).items()) if key not in skip}


def _emit(generator: ReportGenerator, envelope: Dict[str, Any], fmt: str, out: Optional[str]):
    if fmt in ('csv', 'xlsx'):
        if envelope['command'] != 'scan':
            raise UsageError(f"--format {fmt} is only available for scan")
        df = generator.scan_dataframe(envelope['results'])
        if fmt == 'xlsx':
            if not out:
                raise UsageError("--format xlsx needs --out")
            generator.generate_excel({'scan': df}, out)
        elif out:
            generator.generate_csv(df, out)
        else:
            sys.stdout.write(df.to_csv(index=False))
        return
    if fmt == 'json':
        text = generator.to_json_text(envelope)
    else:
        text = generator.render_text(envelope)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Punto de entrada; devuelve el código de salida."""
    logging.basicConfig(
        level=CONFIG['LOG_LEVEL'],
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    parser = build_parser()
    try:
        args = parser.parse_args(join_negative_values(sys.argv[1:] if argv is None else argv))
        if args.command is None:
            raise UsageError("a subcommand is required")
        start = time.perf_counter()
        results, code = COMMANDS[args.command](args)
        elapsed = (time.perf_counter() - start) * 1000.0 if args.timing else None
        generator = ReportGenerator()
        envelope = generator.build_envelope(args.command, _inputs(args), results, elapsed)
        _emit(generator, envelope, args.format, args.out)
    except UsageError as e:
        logger.error(f"Uso incorrecto: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except ValueError as e:
        logger.error(f"Entrada inválida: {e}", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    if code == EXIT_MISMATCH:
        sys.stderr.write("veredicto inesperado\n")
    return code


if __name__ == '__main__':
    sys.exit(main())
