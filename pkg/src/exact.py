"""
Módulo de aritmética exacta.

Provee la capa simbólica sobre la que se ensambla todo el sistema determinante:
- Racionales de precisión arbitraria (fractions.Fraction)
- Tabla de variables con roles (base, dependiente, derivadas, cofactores, incógnitas)
- Polinomios multivariados dispersos con coeficientes racionales (MPoly)
- Matrices racionales y núcleo exacto por eliminación libre de fracciones
"""

import logging
import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement
from math import gcd
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

Rat = Fraction
Number = Union[int, Fraction]

ROLES = ('base', 'dependent', 'first', 'second', 'third', 'cofactor', 'unknown')

# Clave de coefficient_split: pares (nombre, exponente); () es el monomio constante
MonomialKey = Tuple[Tuple[str, int], ...]


def as_rat(value: Any) -> Fraction:
    """
    Convierte enteros, cadenas "a/b", decimales en texto o Fraction a Rat.

    Los float se rechazan: un racional exacto nunca debe nacer de un binario.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"invalid rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"invalid rational: {value!r}")
    raise ValueError(f"invalid rational: {value!r}")


# ============================================================================
# TABLA DE VARIABLES
# ============================================================================

def base_name(i: int) -> str:
    return f"x{i}"


def first_name(k: int) -> str:
    return f"u_{k}"


def second_name(k: int, l: int) -> str:
    a, b = sorted((k, l))
    return f"u_{a}_{b}"


def third_name(k: int, l: int, m: int) -> str:
    a, b, c = sorted((k, l, m))
    return f"u_{a}_{b}_{c}"


def cofactor_name(i: int, j: int) -> str:
    a, b = sorted((i, j))
    return f"U_{a}_{b}"


def unknown_name(m: int) -> str:
    return f"k{m}"


@dataclass(frozen=True)
class VarTable:
    """
    Lista ordenada de variables con nombre y rol.

    Los símbolos de cofactor U_i_j y de derivadas u_k_l se almacenan solo con
    índices ordenados; la simetría se canoniza al construir el nombre.

    Example:
        >>> table = VarTable.jet(2)
        >>> table.index('u_1')
        3
    """
    names: Tuple[str, ...]
    roles: Tuple[str, ...]
    labels: Tuple[str, ...] = ()
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.roles):
            raise ValueError("names and roles must have the same length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        for role in self.roles:
            if role not in ROLES:
                raise ValueError(f"unknown role: {role}")
        if not self.labels:
            object.__setattr__(self, 'labels', tuple('' for _ in self.names))
        object.__setattr__(self, '_index', {name: i for i, name in enumerate(self.names)})

    @classmethod
    def jet(cls, n: int, unknown_labels: Sequence[str] = ()) -> 'VarTable':
        """
        Construye la tabla del espacio de jets de segundo orden en dimensión n.

        Args:
            n: Número de variables independientes
            unknown_labels: Etiqueta legible de cada coeficiente incógnita

        Returns:
            VarTable con x, u, u_k, u_kl, u_klm, U_ij y k0, k1, ...
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        entries: List[Tuple[str, str, str]] = []
        indices = range(1, n + 1)
        entries += [(base_name(i), 'base', '') for i in indices]
        entries.append(('u', 'dependent', ''))
        entries += [(first_name(k), 'first', '') for k in indices]
        entries += [(second_name(k, l), 'second', '')
                    for k, l in combinations_with_replacement(indices, 2)]
        entries += [(third_name(k, l, m), 'third', '')
                    for k, l, m in combinations_with_replacement(indices, 3)]
        entries += [(cofactor_name(i, j), 'cofactor', '')
                    for i, j in combinations_with_replacement(indices, 2)]
        entries += [(unknown_name(m), 'unknown', label)
                    for m, label in enumerate(unknown_labels)]
        names, roles, labels = zip(*entries)
        return cls(tuple(names), tuple(roles), tuple(labels))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable: {name}")

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def role(self, name: str) -> str:
        return self.roles[self.index(name)]

    def names_with_role(self, *roles: str) -> List[str]:
        """Nombres de las variables cuyo rol está en roles, en orden de tabla."""
        return [name for name, role in zip(self.names, self.roles) if role in roles]

    def label(self, name: str) -> str:
        return self.labels[self.index(name)]


# ============================================================================
# POLINOMIOS MULTIVARIADOS
# ============================================================================

def _power(base: Any, exponent: int) -> Any:
    result = base
    for _ in range(exponent - 1):
        result = result * base
    return result


def _graded_key(exponent: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...]]:
    return (sum(exponent), exponent)


class MPoly:
    """
    Polinomio disperso: exponente denso → coeficiente racional.

    Inmutable. No almacena coeficientes nulos, de modo que dos polinomios
    sobre la misma tabla son iguales si y solo si sus mapas de términos lo son.

    Example:
        >>> table = VarTable.jet(1)
        >>> p = MPoly.from_string(table, "(x1 + u)*(x1 - u)")
        >>> str(p)
        'x1^2 - u^2'
    """

    __slots__ = ('table', '_terms')

    def __init__(self, table: VarTable, terms: Optional[Mapping[Tuple[int, ...], Any]] = None):
        self.table = table
        clean: Dict[Tuple[int, ...], Fraction] = {}
        width = len(table)
        for exponent, coeff in (terms or {}).items():
            if len(exponent) != width:
                raise ValueError("exponent length does not match variable table")
            coeff = as_rat(coeff)
            if coeff:
                clean[tuple(exponent)] = coeff
        self._terms = clean

    @classmethod
    def _raw(cls, table: VarTable, terms: Dict[Tuple[int, ...], Fraction]) -> 'MPoly':
        poly = cls.__new__(cls)
        poly.table = table
        poly._terms = terms
        return poly

    # ------------------------------------------------------------------
    # Constructores
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, table: VarTable) -> 'MPoly':
        return cls._raw(table, {})

    @classmethod
    def constant(cls, table: VarTable, value: Number) -> 'MPoly':
        value = as_rat(value)
        if not value:
            return cls.zero(table)
        return cls._raw(table, {(0,) * len(table): value})

    @classmethod
    def monomial(cls, table: VarTable, powers: Mapping[str, int], coeff: Number = 1) -> 'MPoly':
        exponent = [0] * len(table)
        for name, power in powers.items():
            if power < 0:
                raise ValueError("negative exponent")
            exponent[table.index(name)] += power
        return cls(table, {tuple(exponent): coeff})

    @classmethod
    def variable(cls, table: VarTable, name: str) -> 'MPoly':
        return cls.monomial(table, {name: 1})

    @classmethod
    def from_string(cls, table: VarTable, text: str) -> 'MPoly':
        """
        Interpreta una expresión polinomial con +, -, *, ^ (o **), paréntesis,
        enteros y fracciones literales como 3/2.
        """
        return _PolyParser(table, text).parse()

    # ------------------------------------------------------------------
    # Acceso
    # ------------------------------------------------------------------

    def terms(self) -> List[Tuple[Tuple[int, ...], Fraction]]:
        """Términos en orden lexicográfico graduado descendente."""
        return sorted(self._terms.items(), key=lambda item: _graded_key(item[0]), reverse=True)

    def coefficient(self, powers: Mapping[str, int]) -> Fraction:
        exponent = [0] * len(self.table)
        for name, power in powers.items():
            exponent[self.table.index(name)] = power
        return self._terms.get(tuple(exponent), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.table), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def variables(self) -> List[str]:
        """Nombres de variables con exponente no nulo en algún término."""
        used = set()
        for exponent in self._terms:
            used.update(i for i, e in enumerate(exponent) if e)
        return [self.table.names[i] for i in sorted(used)]

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, names: Iterable[str]) -> int:
        """Grado total restringido a las variables dadas (-1 para el cero)."""
        idxs = [self.table.index(name) for name in names]
        if not self._terms:
            return -1
        return max(sum(e[i] for i in idxs) for e in self._terms)

    # ------------------------------------------------------------------
    # Aritmética
    # ------------------------------------------------------------------

    def _check(self, other: 'MPoly'):
        if other.table is not self.table and other.table != self.table:
            raise ValueError("incompatible variable tables")

    def _coerce(self, other: Any) -> Optional['MPoly']:
        if isinstance(other, MPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MPoly.constant(self.table, other)
        return None

    def __add__(self, other: Any) -> 'MPoly':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for exponent, coeff in other._terms.items():
            total = terms.get(exponent, 0) + coeff
            if total:
                terms[exponent] = total
            else:
                terms.pop(exponent, None)
        return MPoly._raw(self.table, terms)

    __radd__ = __add__

    def __neg__(self) -> 'MPoly':
        return MPoly._raw(self.table, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> 'MPoly':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> 'MPoly':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other: Any) -> 'MPoly':
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponent = tuple(map(operator.add, e1, e2))
                terms[exponent] = terms.get(exponent, 0) + c1 * c2
        return MPoly._raw(self.table, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> 'MPoly':
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = MPoly.constant(self.table, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def scale(self, factor: Number) -> 'MPoly':
        factor = as_rat(factor)
        if not factor:
            return MPoly.zero(self.table)
        return MPoly._raw(self.table, {e: c * factor for e, c in self._terms.items()})

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = MPoly.constant(self.table, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        if other.table is not self.table and other.table != self.table:
            return False
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # ------------------------------------------------------------------
    # Cálculo y descomposición
    # ------------------------------------------------------------------

    def diff(self, name: str) -> 'MPoly':
        """Derivada parcial formal exacta respecto de la variable name."""
        i = self.table.index(name)
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for exponent, coeff in self._terms.items():
            power = exponent[i]
            if power:
                terms[exponent[:i] + (power - 1,) + exponent[i + 1:]] = coeff * power
        return MPoly._raw(self.table, terms)

    def coefficient_split(self, over: Iterable[str]) -> Dict[MonomialKey, 'MPoly']:
        """
        Separa el polinomio según los monomios en las variables de over.

        Args:
            over: Subconjunto de variables de la tabla

        Returns:
            Dict monomio-en-over → polinomio en las variables restantes. La suma
            de clave·valor reconstruye el polinomio exactamente.

        Example:
            >>> p = MPoly.from_string(table, "x1*u_1 + x2*u_1 + u_2")
            >>> p.coefficient_split(['u_1', 'u_2'])
            {(('u_1', 1),): x1 + x2, (('u_2', 1),): 1}
        """
        names = list(over)
        idxs = [self.table.index(name) for name in names]
        groups: Dict[MonomialKey, Dict[Tuple[int, ...], Fraction]] = {}
        for exponent, coeff in self._terms.items():
            key = tuple((self.table.names[i], exponent[i]) for i in idxs if exponent[i])
            rest = list(exponent)
            for i in idxs:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = coeff
        return {key: MPoly._raw(self.table, terms) for key, terms in groups.items()}

    def substitute(self, values: Mapping[str, Number]) -> 'MPoly':
        """Sustitución exacta de un subconjunto de variables por racionales."""
        pairs = [(self.table.index(name), as_rat(value)) for name, value in values.items()]
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for exponent, coeff in self._terms.items():
            rest = list(exponent)
            for i, value in pairs:
                if rest[i]:
                    coeff = coeff * value ** rest[i]
                    rest[i] = 0
            if coeff:
                key = tuple(rest)
                terms[key] = terms.get(key, 0) + coeff
        return MPoly._raw(self.table, {e: c for e, c in terms.items() if c})

    def evaluate(self, values: Mapping[str, Any]) -> Any:
        """
        Evalúa el polinomio. Los valores pueden ser Fraction, float o cualquier
        objeto con + y * (por ejemplo Jet2 de geometry).
        """
        names = self.table.names
        total: Any = Fraction(0)
        for exponent, coeff in self._terms.items():
            term: Any = coeff
            for i, power in enumerate(exponent):
                if power:
                    try:
                        value = values[names[i]]
                    except KeyError:
                        raise ValueError(f"missing value for variable {names[i]}")
                    term = term * _power(value, power)
            total = total + term
        return total

    # ------------------------------------------------------------------
    # Representación
    # ------------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for exponent, coeff in self.terms():
            factors = []
            for i, power in enumerate(exponent):
                if power == 1:
                    factors.append(self.table.names[i])
                elif power > 1:
                    factors.append(f"{self.table.names[i]}^{power}")
            magnitude = abs(coeff)
            if factors and magnitude == 1:
                body = "*".join(factors)
            elif factors:
                body = f"{magnitude}*" + "*".join(factors)
            else:
                body = str(magnitude)
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return str(self)


def mpoly_arith(a: MPoly, b: MPoly, op: str) -> MPoly:
    """Operación binaria con nombre: 'add', 'sub' o 'mul'."""
    operations = {'add': operator.add, 'sub': operator.sub, 'mul': operator.mul}
    if op not in operations:
        raise ValueError(f"unknown operation: {op}")
    a._check(b)
    return operations[op](a, b)


def mpoly_diff(a: MPoly, name: str) -> MPoly:
    return a.diff(name)


def coefficient_split(a: MPoly, over: Iterable[str]) -> Dict[MonomialKey, MPoly]:
    return a.coefficient_split(over)


def monomial_label(key: MonomialKey) -> str:
    """Representación legible de una clave de coefficient_split."""
    if not key:
        return "1"
    return "*".join(name if power == 1 else f"{name}^{power}" for name, power in key)


class _PolyParser:
    """Descenso recursivo mínimo para escribir polinomios en tests y ejemplos."""

    _TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")

    def __init__(self, table: VarTable, text: str):
        self.table = table
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> List[Tuple[str, str]]:
        tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            match = self._TOKEN.match(text, pos)
            if not match or match.end() == pos:
                raise ValueError(f"cannot parse polynomial near: {text[pos:]!r}")
            number, name, symbol = match.groups()
            if number is not None:
                tokens.append(('num', number))
            elif name is not None:
                tokens.append(('name', name))
            else:
                tokens.append(('op', '^' if symbol == '**' else symbol))
            pos = match.end()
        return tokens

    def _peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> Tuple[str, str]:
        token = self._peek()
        if token is None:
            raise ValueError("unexpected end of polynomial")
        self.pos += 1
        return token

    def parse(self) -> MPoly:
        if not self.tokens:
            raise ValueError("empty polynomial")
        result = self._expression()
        if self._peek() is not None:
            raise ValueError(f"unexpected token: {self._peek()[1]!r}")
        return result

    def _expression(self) -> MPoly:
        result = self._term()
        while self._peek() in (('op', '+'), ('op', '-')):
            symbol = self._take()[1]
            right = self._term()
            result = result + right if symbol == '+' else result - right
        return result

    def _term(self) -> MPoly:
        result = self._factor()
        while self._peek() in (('op', '*'), ('op', '/')):
            symbol = self._take()[1]
            if symbol == '*':
                result = result * self._factor()
            else:
                kind, value = self._take()
                if kind != 'num' or int(value) == 0:
                    raise ValueError("division only by non-zero integer literals")
                result = result.scale(Fraction(1, int(value)))
        return result

    def _factor(self) -> MPoly:
        if self._peek() == ('op', '-'):
            self._take()
            return -self._factor()
        base = self._primary()
        if self._peek() == ('op', '^'):
            self._take()
            kind, value = self._take()
            if kind != 'num':
                raise ValueError("exponent must be an integer literal")
            base = base ** int(value)
        return base

    def _primary(self) -> MPoly:
        kind, value = self._take()
        if kind == 'num':
            return MPoly.constant(self.table, int(value))
        if kind == 'name':
            return MPoly.variable(self.table, value)
        if value == '(':
            inner = self._expression()
            if self._take() != ('op', ')'):
                raise ValueError("unbalanced parenthesis")
            return inner
        raise ValueError(f"unexpected token: {value!r}")


# ============================================================================
# ÁLGEBRA LINEAL EXACTA
# ============================================================================

def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def primitive_integer_vector(vector: Sequence[Number]) -> Tuple[int, ...]:
    """
    Escala un vector racional a enteros coprimos con primera entrada no nula positiva.
    """
    values = [as_rat(v) for v in vector]
    if not any(values):
        return tuple(0 for _ in values)
    denominator = reduce(_lcm, (v.denominator for v in values), 1)
    integers = [int(v * denominator) for v in values]
    divisor = reduce(gcd, (abs(v) for v in integers if v), 0)
    integers = [v // divisor for v in integers]
    leading = next(v for v in integers if v)
    if leading < 0:
        integers = [-v for v in integers]
    return tuple(integers)


def _primitive_row(row: Dict[int, int]) -> Dict[int, int]:
    divisor = reduce(gcd, (abs(v) for v in row.values()), 0)
    if divisor > 1:
        row = {c: v // divisor for c, v in row.items()}
    if row and row[min(row)] < 0:
        row = {c: -v for c, v in row.items()}
    return row


def _integer_rows(rows: Iterable[Sequence[Number]]) -> List[Dict[int, int]]:
    unique = {}
    for row in rows:
        values = [as_rat(v) for v in row]
        if not any(values):
            continue
        denominator = reduce(_lcm, (v.denominator for v in values if v), 1)
        sparse = {c: int(v * denominator) for c, v in enumerate(values) if v}
        sparse = _primitive_row(sparse)
        unique[tuple(sorted(sparse.items()))] = sparse
    return [unique[key] for key in sorted(unique)]


def _gauss_jordan(rows: List[Dict[int, int]], cols: int) -> List[Tuple[int, Dict[int, int]]]:
    """
    Gauss-Jordan libre de fracciones sobre filas enteras dispersas.

    Cada paso combina filas con coeficientes enteros y divide por el mcd, de
    modo que los enteros se mantienen acotados. Devuelve pares (columna pivote,
    fila) ya reducidos: cada fila pivote es nula en las demás columnas pivote.
    """
    active = list(rows)
    pivots: List[Tuple[int, Dict[int, int]]] = []
    for col in range(cols):
        candidates = [r for r in active if col in r]
        if not candidates:
            continue
        pivot = min(candidates, key=lambda r: (len(r), sorted(r.items())))
        active = [r for r in active if r is not pivot]
        a = pivot[col]

        def eliminate(row: Dict[int, int]) -> Dict[int, int]:
            b = row.get(col)
            if not b:
                return row
            combined: Dict[int, int] = {c: a * v for c, v in row.items()}
            for c, v in pivot.items():
                total = combined.get(c, 0) - b * v
                if total:
                    combined[c] = total
                else:
                    combined.pop(c, None)
            return _primitive_row(combined)

        active = [r for r in (eliminate(r) for r in active) if r]
        pivots = [(c, eliminate(r)) for c, r in pivots]
        pivots.append((col, pivot))
    return pivots


@dataclass(frozen=True)
class RatMatrix:
    """
    Matriz racional rectangular inmutable.

    Example:
        >>> m = RatMatrix.from_rows([[1, 2, 3]])
        >>> m.nullspace()
        [(Fraction(-2, 1), Fraction(1, 1), Fraction(0, 1)), (Fraction(-3, 1), Fraction(0, 1), Fraction(1, 1))]
    """
    rows: Tuple[Tuple[Fraction, ...], ...]
    cols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]], cols: Optional[int] = None) -> 'RatMatrix':
        converted = tuple(tuple(as_rat(v) for v in row) for row in rows)
        if cols is None:
            if not converted:
                raise ValueError("column count required for an empty matrix")
            cols = len(converted[0])
        for row in converted:
            if len(row) != cols:
                raise ValueError("matrix rows must be rectangular")
        return cls(converted, cols)

    @classmethod
    def identity(cls, size: int) -> 'RatMatrix':
        return cls.from_rows([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows), self.cols)

    def transpose(self) -> 'RatMatrix':
        return RatMatrix(tuple(zip(*self.rows)) if self.rows else (), len(self.rows))

    def apply(self, vector: Sequence[Number]) -> Tuple[Fraction, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        vector = [as_rat(v) for v in vector]
        return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in self.rows)

    def __matmul__(self, other: 'RatMatrix') -> 'RatMatrix':
        if self.cols != len(other.rows):
            raise ValueError("incompatible matrix shapes")
        columns = list(zip(*other.rows))
        return RatMatrix(tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0))
                                     for col in columns) for row in self.rows), other.cols)

    def rank(self) -> int:
        return len(_gauss_jordan(_integer_rows(self.rows), self.cols))

    def nullspace(self) -> List[Tuple[Fraction, ...]]:
        return nullspace(self)

    def inverse(self) -> 'RatMatrix':
        """Inversa exacta por Gauss-Jordan; matriz singular → ValueError."""
        size = len(self.rows)
        if size != self.cols:
            raise ValueError("only square matrices can be inverted")
        work = [list(row) + [Fraction(int(i == j)) for j in range(size)]
                for i, row in enumerate(self.rows)]
        for col in range(size):
            pivot = next((r for r in range(col, size) if work[r][col]), None)
            if pivot is None:
                raise ValueError("singular matrix")
            work[col], work[pivot] = work[pivot], work[col]
            lead = work[col][col]
            work[col] = [v / lead for v in work[col]]
            for r in range(size):
                factor = work[r][col]
                if r != col and factor:
                    work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return RatMatrix(tuple(tuple(row[size:]) for row in work), size)


def rank(m: RatMatrix) -> int:
    return m.rank()


def nullspace(m: RatMatrix) -> List[Tuple[Fraction, ...]]:
    """
    Base exacta del núcleo de m.

    Los vectores salen en forma escalonada reducida: un vector por columna
    libre, con 1 en su columna libre y 0 en las demás columnas libres.

    Args:
        m: Matriz racional

    Returns:
        Lista de vectores (tuplas de Fraction); su número es cols - rank(m)
    """
    pivots = _gauss_jordan(_integer_rows(m.rows), m.cols)
    pivot_cols = {c for c, _ in pivots}
    free_cols = [c for c in range(m.cols) if c not in pivot_cols]
    logger.debug(f"Núcleo: {len(m.rows)} filas, {m.cols} columnas, rango {len(pivots)}")
    basis = []
    for free in free_cols:
        vector = [Fraction(0)] * m.cols
        vector[free] = Fraction(1)
        for col, row in pivots:
            entry = row.get(free)
            if entry:
                vector[col] = Fraction(-entry, row[col])
        basis.append(tuple(vector))
    return basis


def in_span(vectors: Sequence[Sequence[Number]], candidate: Sequence[Number]) -> bool:
    """Pertenencia racional exacta de candidate al espacio generado por vectors."""
    if not any(as_rat(v) for v in candidate):
        return True
    if not vectors:
        return False
    cols = len(candidate)
    base = RatMatrix.from_rows(vectors, cols)
    extended = RatMatrix.from_rows(list(vectors) + [candidate], cols)
    return base.rank() == extended.rank()
