"""
Tests de la interfaz de línea de comandos.

Ejecutar con:
    pytest tests/test_cli.py -v
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

import pandas as pd
import pytest

# Agregar src al path
sys.path.append(str(Path(__file__).parent.parent))

from src.cli import (EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, join_negative_values, main,
                     parse_matrix, p_range)


def run_json(capsys, *argv):
    code = main(list(argv) + ['--format', 'json'])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_join_negative_values():
    """Test valores negativos unidos a su opción."""
    assert join_negative_values(['classify', '--n', '2', '--p', '-3/1']) == \
        ['classify', '--n', '2', '--p=-3/1']
    assert join_negative_values(['--p', '--n']) == ['--p', '--n']
    assert join_negative_values(['--n', '-1']) == ['--n', '-1']


def test_p_range_and_matrix():
    """Test rango de exponentes y lectura de matrices."""
    assert p_range(Fraction(-1), Fraction(1), Fraction(1, 2)) == \
        [Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1)]
    with pytest.raises(ValueError, match="step must be positive"):
        p_range(Fraction(0), Fraction(1), Fraction(0))
    assert parse_matrix("1,1/2;0,1").tolist() == [[1.0, 0.5], [0.0, 1.0]]
    with pytest.raises(ValueError):
        parse_matrix("1,2;3")


def test_classify_json_envelope(capsys):
    """Test sobre JSON de classify."""
    code, envelope = run_json(capsys, 'classify', '--n', '1', '--p', '2')
    assert code == EXIT_OK
    assert sorted(envelope) == ['command', 'inputs', 'results', 'schema', 'timing_ms']
    assert envelope['schema'] == 1
    assert envelope['command'] == 'classify'
    assert envelope['timing_ms'] is None
    assert envelope['inputs']['p'] == '2'
    assert envelope['results']['dimension'] == 2
    assert envelope['results']['case'] == 'p=n+1'


def test_classify_negative_exponent_text(capsys):
    """Test exponente negativo y salida de texto."""
    code = main(['classify', '--n', '2', '--p', '-3/1'])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "dimension = 8 (esperada 8)" in out
    assert "trace-scaling" in out


def test_timing(capsys):
    """Test timing_ms solo con --timing."""
    code, envelope = run_json(capsys, 'classify', '--n', '1', '--p', '5/2', '--timing')
    assert code == EXIT_OK
    assert envelope['timing_ms'] >= 0


def test_verify_exit_codes(capsys):
    """Test códigos de salida de verify."""
    base = ['verify', '--n', '2', '--action', 'g2', '--eps', '2', '--samples', '50']
    code, envelope = run_json(capsys, *base, '--p', '3')
    assert code == EXIT_OK
    assert envelope['results']['verdict'] == 'symmetry-confirmed'

    assert main(base + ['--p', '2', '--expect', 'confirmed']) == EXIT_MISMATCH
    assert "veredicto inesperado" in capsys.readouterr().err
    assert main(base + ['--p', '2', '--expect', 'refuted']) == EXIT_OK
    assert main(base + ['--p', '2']) == EXIT_OK


def test_resolve_and_lemma(capsys):
    """Test resolve y lemma con sus veredictos por defecto."""
    code, envelope = run_json(capsys, 'resolve', '--n', '2', '--action', 'g9', '--eps', '0.2',
                              '--samples', '50')
    assert code == EXIT_OK
    assert envelope['results']['verdict'] == 'identity-confirmed'
    assert envelope['results']['details']['resolution']['kind'] == 'centro-affine'

    assert main(['lemma', '--n', '2', '--lemma', '6.3', '--variant', 'stated',
                 '--expect', 'refuted', '--samples', '50']) == EXIT_OK
    capsys.readouterr()
    assert main(['lemma', '--n', '2', '--lemma', '6.2', '--eps', '-0.4', '--axis', '2',
                 '--samples', '50']) == EXIT_OK


def test_decompose(capsys):
    """Test decompose de la matriz de cizallamiento."""
    code, envelope = run_json(capsys, 'decompose', '--matrix', '1,1;0,1')
    assert code == EXIT_OK
    lam = envelope['results']['lambda']
    assert lam[0] == pytest.approx((1 + 5 ** 0.5) / 2)
    assert envelope['results']['reconstruction_error'] < 1e-12
    assert main(['decompose', '--matrix', '2,0;0,1']) == EXIT_USAGE


def test_scan_csv_to_stdout(capsys):
    """Test barrido en CSV."""
    code = main(['scan', '--n', '1', '--p-from', '-2', '--p-to', '2', '--format', 'csv'])
    lines = capsys.readouterr().out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "p,dimension,case,expected_dimension"
    assert len(lines) == 6
    assert lines[1].startswith("-2,3,p=-n-1")


def test_scan_xlsx(tmp_path, capsys):
    """Test barrido exportado a Excel."""
    out = tmp_path / 'scan.xlsx'
    code = main(['scan', '--n', '1', '--p-list', '1,2,5/2', '--format', 'xlsx', '--out', str(out)])
    assert code == EXIT_OK
    df = pd.read_excel(out, sheet_name='scan')
    assert list(df['dimension']) == [3, 2, 1]


def test_json_to_file(tmp_path, capsys):
    """Test sobre JSON escrito en --out."""
    out = tmp_path / 'nested' / 'classify.json'
    assert main(['classify', '--n', '1', '--p', '1', '--format', 'json', '--out', str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text(encoding='utf-8'))['results']['dimension'] == 3


@pytest.mark.parametrize("argv", [
    [],
    ['classify', '--p', '2'],
    ['classify', '--n', '2', '--p', 'abc'],
    ['classify', '--n', '1', '--p', '2', '--format', 'csv'],
    ['scan', '--n', '2'],
    ['scan', '--n', '1', '--p-list', '1', '--format', 'xlsx'],
    ['verify', '--n', '2', '--p', '3', '--action', 'g10'],
    ['verify', '--n', '2', '--p', '3', '--action', 'g3', '--axis', '5', '--samples', '10'],
    ['classify', '--n', '0', '--p', '2'],
])
def test_usage_errors(argv, capsys):
    """Test entradas inválidas devuelven 1."""
    assert main(argv) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err
