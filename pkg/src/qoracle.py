# src/qoracle.py — Exact Q(q) Modules and their Crystal Limits
"""
Symbolic oracle for the rank-one and rank-two tensor rules.

Responsibilities:
    1. LaurentRational: exact elements of Q(q) with leading terms at q = ∞
    2. q-symbols: [n], [n]!, q-binomials, {a}, [k_i;a], {k_i;a}
    3. build_rank_two_module: V^ı(n) for a = 2, 0 and V^ı(n_-, n_+) for
       a = -1, with every defining relation checked at build time
    4. module_norms / lt_case_table: (v_k, v_k) and its leading term
    5. tensor_module: V^ı ⊗ V through the coproduct
    6. oracle_crystal_limit: decomposition, normalization and the
       q -> ∞ limit of the B-operators, as an ICrystalGraph
    7. compare_oracle and the parameter sweeps

Operators are sparse sympy DomainMatrix objects over Q(q) behind QMatrix.
Matrices act on column vectors: rows[r][c] is the coefficient of basis
vector r in the image of basis vector c.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy import latex
from sympy.polys.domains import QQ
from sympy.polys.fields import field as fraction_field
from sympy.polys.matrices import DomainMatrix
from tqdm import tqdm

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import NORM_MAX_N_MINUS, ORACLE_MAX_N_MINUS, ORACLE_P_RANGE

from src.crystal import CheckReport, CrystalGraph, natural_crystal, string_crystal
from src.icrystal import (
    ICrystalGraph, Row, minus_one_icrystal, rank_one_icrystal, string_icrystal,
)
from src.itensor import compare_under, grid_crystal, tensor_icrystal_crystal
from src.rootdata import CartanSatakeDatum, load_datum, project_weight
from src.sqrt2 import ONE, ZERO, Sqrt2Scalar

logger = logging.getLogger(__name__)

_FIELD, _Q = fraction_field("q", QQ)

ORACLE_CASES = (2, 0, -1)
DEFAULT_DATUMS = {2: 'a1', 0: 'a1xa1', -1: 'a2_flip'}
SQRT2 = Sqrt2Scalar.sqrt2_power(1)


class OracleError(ValueError):
    """Division by zero, failed relation check or failed decomposition."""


# ──────────────────────────────────────────────────────────────
# LaurentRational
# ──────────────────────────────────────────────────────────────

class LaurentRational:
    """
    Exact element of Q(q), kept in lowest terms.

    Leading terms are taken at q = ∞: degree is deg(numerator) -
    deg(denominator) and the leading coefficient is the ratio of the
    leading coefficients.
    """

    __slots__ = ('value',)

    def __init__(self, value=0):
        if isinstance(value, LaurentRational):
            value = value.value
        elif isinstance(value, Fraction):
            value = _FIELD(value.numerator) * _FIELD(value.denominator) ** -1
        elif isinstance(value, int):
            value = _FIELD(value)
        self.value = value

    @classmethod
    def q_power(cls, n: int) -> 'LaurentRational':
        return cls(_Q ** n)

    @property
    def numerator(self):
        return self.value.numer

    @property
    def denominator(self):
        return self.value.denom

    def degree(self) -> Optional[int]:
        """Order of growth at q = ∞; None for zero."""
        if not self:
            return None
        return self.value.numer.degree() - self.value.denom.degree()

    def leading_coefficient(self) -> Fraction:
        if not self:
            return Fraction(0)
        c = self.value.numer.LC / self.value.denom.LC
        return Fraction(int(c.numerator), int(c.denominator))

    # ─── field operations ───

    @staticmethod
    def _coerce(other) -> Optional['LaurentRational']:
        if isinstance(other, LaurentRational):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentRational(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else LaurentRational(self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else LaurentRational(self.value - other.value)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else LaurentRational(other.value - self.value)

    def __mul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else LaurentRational(self.value * other.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other:
            raise OracleError(f"division of {self} by the zero polynomial")
        return LaurentRational(self.value * other.value ** -1)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else other / self

    def __neg__(self):
        return LaurentRational(-self.value)

    def __pow__(self, n: int):
        if n < 0 and not self:
            raise OracleError("negative power of zero")
        return LaurentRational(self.value ** n)

    def __bool__(self) -> bool:
        return bool(self.value.numer)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return not (self.value - other.value).numer

    def __hash__(self) -> int:
        return hash((str(self.value.numer), str(self.value.denom)))

    def __repr__(self) -> str:
        return f"LaurentRational({self})"

    def __str__(self) -> str:
        return str(self.value)

    def latex(self) -> str:
        return latex(self.value.as_expr())


ZERO_Q = LaurentRational(0)
ONE_Q = LaurentRational(1)


# ──────────────────────────────────────────────────────────────
# q-symbols
# ──────────────────────────────────────────────────────────────

def q_power(n: int) -> LaurentRational:
    return LaurentRational.q_power(n)


def q_int(n: int) -> LaurentRational:
    """[n] = (q^n - q^-n) / (q - q^-1); [0] = 0, [-n] = -[n]."""
    if n == 0:
        return ZERO_Q
    sign = 1 if n > 0 else -1
    # q^(n-1) + q^(n-3) + ... + q^(1-n)
    return sign * sum((q_power(abs(n) - 1 - 2 * j) for j in range(abs(n))), ZERO_Q)


def qfact(n: int) -> LaurentRational:
    if n < 0:
        raise OracleError(f"[n]! needs n >= 0, got {n}")
    out = ONE_Q
    for k in range(1, n + 1):
        out = out * q_int(k)
    return out


def qbinom(m: int, k: int) -> LaurentRational:
    """[m choose k] = prod_{l=1..k} [m-l+1]/[l]; any integer m, zero for k < 0."""
    if k < 0:
        return ZERO_Q
    out = ONE_Q
    for l in range(1, k + 1):
        out = out * q_int(m - l + 1) / q_int(l)
    return out


def brace(a: int) -> LaurentRational:
    """{a} = q^a + q^-a; {0} = 2."""
    return q_power(a) + q_power(-a)


def bracket_k(e: int, a: int) -> LaurentRational:
    """[k_i; a] on a vector where k_i acts by q^e."""
    return q_int(e + a)


def brace_k(e: int, a: int) -> LaurentRational:
    """{k_i; a} on a vector where k_i acts by q^e."""
    return brace(e + a)


Q_SYMBOLS: Dict[str, Callable[..., LaurentRational]] = {
    'qint': q_int,
    'qfact': qfact,
    'qbinom': qbinom,
    'brace': brace,
    'bracket_k': bracket_k,
    'brace_k': brace_k,
}


def q_symbols(kind: str, *params: int) -> LaurentRational:
    if kind not in Q_SYMBOLS:
        raise OracleError(f"unknown q-symbol '{kind}' (expected one of {', '.join(Q_SYMBOLS)})")
    return Q_SYMBOLS[kind](*params)


def q_arith(x: LaurentRational, y: LaurentRational, op: str) -> LaurentRational:
    ops = {'+': lambda: x + y, '-': lambda: x - y, '*': lambda: x * y, '/': lambda: x / y}
    if op not in ops:
        raise OracleError(f"unknown operation '{op}'")
    return ops[op]()


# ──────────────────────────────────────────────────────────────
# Sparse matrices over Q(q)
# ──────────────────────────────────────────────────────────────

QVector = Dict[int, LaurentRational]

# Q(q) as a sympy domain; its elements are the values LaurentRational wraps
Q_DOMAIN = _FIELD.to_domain()


class QMatrix:
    """
    Square matrix over Q(q), stored as a sparse sympy DomainMatrix.

    The wrapper only converts between LaurentRational and domain elements;
    all arithmetic is DomainMatrix arithmetic.
    """

    __slots__ = ('rep',)

    def __init__(self, rep: DomainMatrix):
        self.rep = rep

    @classmethod
    def zeros(cls, n: int) -> 'QMatrix':
        return cls(DomainMatrix.zeros((n, n), Q_DOMAIN))

    @classmethod
    def identity(cls, n: int) -> 'QMatrix':
        return cls(DomainMatrix.eye(n, Q_DOMAIN))

    @classmethod
    def from_entries(cls, n: int, entries: Dict[Tuple[int, int], LaurentRational]) -> 'QMatrix':
        """entries[(r, c)] is entry (r, c); zero entries are dropped."""
        rows: Dict[int, Dict] = {}
        for (r, c), value in entries.items():
            if value:
                rows.setdefault(r, {})[c] = value.value
        return cls(DomainMatrix(rows, (n, n), Q_DOMAIN))

    @classmethod
    def diagonal(cls, values: Sequence[LaurentRational]) -> 'QMatrix':
        return cls.from_entries(len(values), {(r, r): v for r, v in enumerate(values)})

    @property
    def size(self) -> int:
        return self.rep.shape[0]

    def _sparse(self) -> Dict[int, Dict]:
        return self.rep.to_sparse().rep

    @property
    def rows(self) -> List[QVector]:
        """rows[r] = {c: entry (r, c)} over the non-zero entries."""
        sparse = self._sparse()
        return [{c: LaurentRational(v) for c, v in sparse.get(r, {}).items()} for r in range(self.size)]

    def entry(self, r: int, c: int) -> LaurentRational:
        return LaurentRational(self.rep[r, c].element)

    def __add__(self, other: 'QMatrix') -> 'QMatrix':
        return QMatrix(self.rep + other.rep)

    def __sub__(self, other: 'QMatrix') -> 'QMatrix':
        return QMatrix(self.rep - other.rep)

    def __matmul__(self, other: 'QMatrix') -> 'QMatrix':
        return QMatrix(self.rep.matmul(other.rep))

    def scale(self, x) -> 'QMatrix':
        return QMatrix(self.rep.scalarmul(LaurentRational(x).value))

    def kron(self, other: 'QMatrix') -> 'QMatrix':
        n = other.size
        mine, theirs = self._sparse(), other._sparse()
        rows: Dict[int, Dict] = {}
        for r1, ra in mine.items():
            for r2, rb in theirs.items():
                rows[r1 * n + r2] = {c1 * n + c2: a * b for c1, a in ra.items() for c2, b in rb.items()}
        return QMatrix(DomainMatrix(rows, (self.size * n, self.size * n), Q_DOMAIN))

    def apply(self, vector: QVector) -> QVector:
        column = DomainMatrix({r: {0: v.value} for r, v in vector.items() if v}, (self.size, 1), Q_DOMAIN)
        image = self.rep.matmul(column).to_sparse().rep
        return {r: LaurentRational(row[0]) for r, row in image.items() if row.get(0)}

    def is_zero(self) -> bool:
        return self.rep.is_zero_matrix

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.rep.shape == other.rep.shape and (self - other).is_zero()


def scale_vector(vector: QVector, x: LaurentRational) -> QVector:
    return {c: v * x for c, v in vector.items() if v * x}


def nullspace(equations: Sequence[QVector], cols: Sequence[int]) -> List[QVector]:
    """
    Basis of {x supported on cols : eq . x = 0 for every equation}, one
    vector per free column, read off the reduced row echelon form.
    """
    position = {c: j for j, c in enumerate(cols)}
    rows = {}
    for eq in equations:
        row = {position[c]: v.value for c, v in eq.items() if v and c in position}
        if row:
            rows[len(rows)] = row
    if not rows:
        return [{c: ONE_Q} for c in cols]
    kernel = DomainMatrix(rows, (len(rows), len(cols)), Q_DOMAIN).nullspace().to_sparse().rep
    return [{cols[j]: LaurentRational(v) for j, v in kernel[r].items()} for r in sorted(kernel)]


# ──────────────────────────────────────────────────────────────
# Modules
# ──────────────────────────────────────────────────────────────

@dataclass
class RankTwoModule:
    """
    A finite-dimensional U^ı-module for the orbit {i, tau(i)}.

    k_exp[b] is the exponent e with k_i b = q^e b (always 0 for a = 2).
    lt[b] = (c, h) says the basis vector b has norm with leading term
    c^2 q^h, so its crystal-basis rescaling is b / (c q^(h/2)).
    """
    case: int
    params: Tuple[int, ...]
    datum: CartanSatakeDatum
    node: int
    labels: List[str]
    b_i: QMatrix
    b_tau: QMatrix
    k_exp: List[int]
    lt: List[Tuple[Sqrt2Scalar, int]]
    name: str = ''
    factors: Tuple = ()

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def s_i(self) -> int:
        return self.datum.s[self.node]

    def k_diag(self, shift: int = 0, sign: int = 1) -> QMatrix:
        return QMatrix.diagonal([q_power(sign * e + shift) for e in self.k_exp])

    def bracket_k(self, a: int) -> QMatrix:
        return QMatrix.diagonal([bracket_k(e, a) for e in self.k_exp])

    def brace_k(self, a: int) -> QMatrix:
        return QMatrix.diagonal([brace_k(e, a) for e in self.k_exp])

    def t(self) -> QMatrix:
        """t = B_tau B_i - q B_i B_tau - [k_i; -s_i]  (a = -1)."""
        q = q_power(1)
        return self.b_tau @ self.b_i - (self.b_i @ self.b_tau).scale(q) - self.bracket_k(-self.s_i)

    def divided_power(self, k: int) -> QMatrix:
        out = QMatrix.identity(self.dim)
        for j in range(1, k + 1):
            out = (self.b_i @ out).scale(ONE_Q / q_int(j))
        return out


@dataclass
class UModule:
    """
    A U-module on the same datum, aligned with a crystal: basis vector b
    corresponds to crystal element b and has weight B.wt[b].
    """
    crystal: CrystalGraph
    f: List[QMatrix]
    e: List[QMatrix]
    name: str = ''

    @property
    def dim(self) -> int:
        return len(self.crystal)

    def k_diag(self, node: int, sign: int = 1) -> QMatrix:
        return QMatrix.diagonal([q_power(sign * self.crystal.wt[b][node]) for b in self.crystal.elements])


def _resolve(case: int, datum: Optional[CartanSatakeDatum]) -> Tuple[CartanSatakeDatum, int]:
    if case not in ORACLE_CASES:
        raise OracleError(f"case must be one of {ORACLE_CASES}, got {case}")
    datum = datum or load_datum(DEFAULT_DATUMS[case])
    if any(x != 1 for x in datum.d):
        raise OracleError(f"datum '{datum.name}' is not simply laced with d = 1")
    node = datum.i_tau[0]
    if datum.a_tau(node) != case:
        raise OracleError(f"datum '{datum.name}' has a_(i,τ(i)) = {datum.a_tau(node)}, not {case}")
    return datum, node


def build_rank_two_module(case: int, params: Sequence[int],
                          datum: Optional[CartanSatakeDatum] = None) -> RankTwoModule:
    """
    The irreducible module V^ı(n) (a = 2, 0) or V^ı(n_-, n_+) (a = -1).

    a = 2:  one-dimensional, B_i v = [n] v.
    a = 0:  v_0..v_n with B_i v_k = [k+1] v_{k+1},
            B_tau v_k = [n-k+1] v_{k-1}, k_i v_k = q^(n-2k) v_k.
    a = -1: v_0..v_{n_-} with B_i v_k = [k+1] v_{k+1},
            B_tau v_k = [n_- - k + 1] {n_+ - s_i - k + 1} v_{k-1},
            k_i v_k = q^(n_- + n_+ - 3k) v_k.

    Raises:
        OracleError: On bad parameters or a failed relation check.
    """
    datum, i = _resolve(case, datum)
    params = tuple(int(x) for x in params)
    if case == 2:
        if len(params) != 1:
            raise OracleError(f"a = 2 module takes (n,), got {params}")
        n, = params
        b = QMatrix.diagonal([q_int(n)])
        module = RankTwoModule(case, params, datum, i, ['v'], b, b, [0], [(ONE, 0)],
                               name=f"Vı({n})")
        logger.debug(f"✓ Built {module.name}")
        return module

    if case == 0:
        if len(params) != 1 or params[0] < 0:
            raise OracleError(f"a = 0 module takes (n,) with n >= 0, got {params}")
        n_minus, = params
        top = n_minus
        down = [q_int(n_minus - k + 1) for k in range(n_minus + 1)]
        k_exp = [n_minus - 2 * k for k in range(n_minus + 1)]
        name = f"Vı({n_minus})"
    else:
        if len(params) != 2 or params[0] < 0:
            raise OracleError(f"a = -1 module takes (n-, n+) with n- >= 0, got {params}")
        n_minus, n_plus = params
        top = n_minus
        p = n_plus - datum.s[i]
        down = [q_int(n_minus - k + 1) * brace(p - k + 1) for k in range(n_minus + 1)]
        k_exp = [n_minus + n_plus - 3 * k for k in range(n_minus + 1)]
        name = f"Vı({n_minus},{n_plus})"

    b_i = QMatrix.from_entries(top + 1, {(k + 1, k): q_int(k + 1) for k in range(top)})
    b_tau = QMatrix.from_entries(top + 1, {(k - 1, k): down[k] for k in range(1, top + 1)})
    module = RankTwoModule(case, params, datum, i, [f"v_{k}" for k in range(top + 1)],
                           b_i, b_tau, k_exp, [(ONE, 0)] * (top + 1), name=name)
    if case == -1:
        module.lt = [(c, h) for _, _, c, h in module_norms(module)]
    report = check_relations(module, divided_powers=True)
    if not report.ok:
        v = report.violations[0]
        raise OracleError(f"{name} fails relation {v.clause}: {v.detail}")
    logger.debug(f"✓ Built {name} ({module.dim} dims, {report.checked} relations)")
    return module


def check_relations(m: RankTwoModule, divided_powers: bool = False) -> CheckReport:
    """
    Defining relations of the rank-two ıquantum group, as matrix identities.

    a = 0:  k_i B_i = q^-2 B_i k_i, k_i B_tau = q^2 B_tau k_i,
            B_tau B_i - B_i B_tau = [k_i; 0].
    a = -1: k_i B_i = q^-3 B_i k_i, k_i B_tau = q^3 B_tau k_i, the two
            q-Serre type relations, and optionally
            B_tau B_i^(k) = B_i^(k-1)(t + [k_i; -s_i - 2(k-1)]) + q^k B_i^(k) B_tau
            together with t v_0 = [n_- - n_+ + s_i] v_0 on V^ı(n_-, n_+).
    """
    report = CheckReport(f"relations {m.name}")
    if m.case == 2:
        return report
    shift = 2 if m.case == 0 else 3
    k = m.k_diag()

    def expect(clause: str, lhs: QMatrix, rhs: QMatrix):
        report.checked += 1
        if lhs != rhs:
            report.add(clause, f"matrix identity fails on {m.name}")

    expect('k B_i', k @ m.b_i, (m.b_i @ k).scale(q_power(-shift)))
    expect('k B_tau', k @ m.b_tau, (m.b_tau @ k).scale(q_power(shift)))
    if m.case == 0:
        expect('commutator', m.b_tau @ m.b_i - m.b_i @ m.b_tau, m.bracket_k(0))
        return report

    s = m.s_i
    bi, bt = m.b_i, m.b_tau
    two = q_int(2)
    lhs = bi @ bi @ bt - (bi @ bt @ bi).scale(two) + bt @ bi @ bi
    expect('serre B_i', lhs, (bi @ m.brace_k(-1 - s)).scale(-two))
    lhs = bt @ bt @ bi - (bt @ bi @ bt).scale(two) + bi @ bt @ bt
    expect('serre B_tau', lhs, (m.brace_k(-1 - s) @ bt).scale(-two))
    if divided_powers:
        t = m.t()
        for j in range(1, m.dim + 1):
            bij = m.divided_power(j)
            rhs = m.divided_power(j - 1) @ (t + m.bracket_k(-s - 2 * (j - 1))) + (bij @ bt).scale(q_power(j))
            expect(f'B_tau B_i^({j})', bt @ bij, rhs)
        if not m.factors:
            n_minus, n_plus = m.params
            report.checked += 1
            eigen = q_int(n_minus - n_plus + s)
            if t.apply({0: ONE_Q}) != ({0: eigen} if eigen else {}):
                report.add('t v_0', f"t v_0 ≠ [{n_minus - n_plus + s}] v_0 on {m.name}")
    return report


# ──────────────────────────────────────────────────────────────
# Norms
# ──────────────────────────────────────────────────────────────

def _leading(x: LaurentRational) -> Tuple[Sqrt2Scalar, int]:
    """(c, h) with x ~ c^2 q^h at q = ∞, for x with leading coefficient 1 or 2."""
    lc = x.leading_coefficient()
    if lc == 1:
        return ONE, x.degree()
    if lc == 2:
        return SQRT2, x.degree()
    raise OracleError(f"norm {x} has leading coefficient {lc}, expected 1 or 2")


def module_norms(m: RankTwoModule) -> List[Tuple[int, LaurentRational, Sqrt2Scalar, int]]:
    """
    (k, (v_k, v_k), c, h) for V^ı(n_-, n_+), where lt(v_k) = c q^(h/2).

    The norms come from the recursion
        (v_k, v_k) = q^(-n_- - n_+ + 3k + s_i - 2) [n_- - k + 1] {p - k + 1} / [k] (v_{k-1}, v_{k-1})
    with p = n_+ - s_i; see closed_form_norm for the product formula.

    Raises:
        OracleError: For modules other than V^ı(n_-, n_+).
    """
    if m.case != -1 or m.factors:
        raise OracleError(f"norms are tabulated for irreducible a = -1 modules, not {m.name}")
    n_minus, n_plus = m.params
    s = m.s_i
    p = n_plus - s
    out = []
    norm = ONE_Q
    for k in range(n_minus + 1):
        if k > 0:
            norm = norm * q_power(-n_minus - n_plus + 3 * k + s - 2) * q_int(n_minus - k + 1) \
                * brace(p - k + 1) / q_int(k)
        c, h = _leading(norm)
        out.append((k, norm, c, h))
    return out


def closed_form_norm(n_minus: int, n_plus: int, s: int, k: int) -> LaurentRational:
    """q^(k(-n_- - n_+ + s) + k(3k-1)/2) [n_- choose k] prod_{l=1..k} {p - l + 1}."""
    p = n_plus - s
    out = q_power(k * (-n_minus - n_plus + s) + k * (3 * k - 1) // 2) * qbinom(n_minus, k)
    for l in range(1, k + 1):
        out = out * brace(p - l + 1)
    return out


def lt_case_table(n_minus: int, n_plus: int, s: int, k: int) -> Tuple[Sqrt2Scalar, int]:
    """
    Leading term of v_k as (c, h), meaning c q^(h/2), read off by cases
    on p = n_+ - s.
    """
    p = n_plus - s
    if p >= n_minus or (-1 < p < n_minus and k < p + 1):
        return ONE, 0
    if -1 < p < n_minus:
        return SQRT2, (k - p - 1) * (k - p)
    return ONE, k * (k - 2 * p - 1)


# ──────────────────────────────────────────────────────────────
# Tensor products through the coproduct
# ──────────────────────────────────────────────────────────────

def natural_module(datum: CartanSatakeDatum) -> UModule:
    """V_natural: F_j u = u' exactly when f_j(b) = b' in the natural crystal."""
    B = natural_crystal(datum)
    return _minuscule_module(B, 'V♮')


def _minuscule_module(B: CrystalGraph, name: str) -> UModule:
    f, e = [], []
    for j in B.datum.indices:
        moves = [(b, B.f[b][j]) for b in B.elements if B.f[b][j] is not None]
        f.append(QMatrix.from_entries(len(B), {(t, b): ONE_Q for b, t in moves}))
        e.append(QMatrix.from_entries(len(B), {(b, t): ONE_Q for b, t in moves}))
    return UModule(B, f, e, name=name)


def string_module(datum: CartanSatakeDatum, m: int, node: Optional[int] = None) -> UModule:
    """V(m) along one node: F v_k = [k+1] v_{k+1}, E v_k = [m-k+1] v_{k-1}."""
    node = datum.i_tau[0] if node is None else node
    B = string_crystal(datum, m, node)
    f = [QMatrix.zeros(m + 1) for _ in datum.indices]
    e = [QMatrix.zeros(m + 1) for _ in datum.indices]
    f[node] = QMatrix.from_entries(m + 1, {(k + 1, k): q_int(k + 1) for k in range(m)})
    e[node] = QMatrix.from_entries(m + 1, {(k - 1, k): q_int(m - k + 1) for k in range(1, m + 1)})
    return UModule(B, f, e, name=f"V({m})")


def grid_module(datum: CartanSatakeDatum, m_tau: int, m_i: int) -> UModule:
    """V(m_tau, m_i) for a = 0: the tau(i)-string times the i-string."""
    i = datum.i_tau[0]
    ti = datum.tau[i]
    left = string_module(datum, m_tau, ti)
    right = string_module(datum, m_i, i)
    eye_l, eye_r = QMatrix.identity(left.dim), QMatrix.identity(right.dim)
    f = [QMatrix.zeros(left.dim * right.dim) for _ in datum.indices]
    e = [QMatrix.zeros(left.dim * right.dim) for _ in datum.indices]
    f[ti], e[ti] = left.f[ti].kron(eye_r), left.e[ti].kron(eye_r)
    f[i], e[i] = eye_l.kron(right.f[i]), eye_l.kron(right.e[i])
    return UModule(grid_crystal(datum, m_tau, m_i), f, e, name=f"V({m_tau},{m_i})")


def default_partner(m: RankTwoModule, partner: Optional[Sequence[int]] = None) -> UModule:
    """
    The second tensor factor: V_natural for a = -1, V(m) for a = 2
    (default m = 1), V(m_tau, m_i) for a = 0 (default (0, 1)).
    """
    if m.case == -1:
        if partner:
            raise OracleError("a = -1 modules are tensored with V_natural only")
        return natural_module(m.datum)
    if m.case == 2:
        (size,) = tuple(partner) if partner else (1,)
        return string_module(m.datum, size, m.node)
    m_tau, m_i = tuple(partner) if partner else (0, 1)
    return grid_module(m.datum, m_tau, m_i)


def tensor_module(m: RankTwoModule, V: UModule) -> RankTwoModule:
    """
    M ⊗ V with
        B_j -> B_j ⊗ K_j^-1 + 1 ⊗ F_j + k_j^-1 ⊗ ς_j E_tau(j) K_j^-1,
        k_i -> k_i ⊗ K_i K_tau(i)^-1,
    where ς_j = q^-1 for a = 2 and q^(s_j) otherwise, and k_tau(i) = k_i^-1.

    Raises:
        OracleError: If the result fails a defining relation.
    """
    d = m.datum
    i, ti = m.node, d.tau[m.node]
    eye_m = QMatrix.identity(m.dim)

    def varsigma(j: int) -> LaurentRational:
        return q_power(-1 if m.case == 2 else d.s[j])

    def coproduct(bj: QMatrix, j: int, k_sign: int) -> QMatrix:
        tj = d.tau[j]
        return (bj.kron(V.k_diag(j, -1))
                + eye_m.kron(V.f[j])
                + m.k_diag(sign=k_sign).kron((V.e[tj] @ V.k_diag(j, -1)).scale(varsigma(j))))

    b_i = coproduct(m.b_i, i, -1)
    b_tau = b_i if m.case == 2 else coproduct(m.b_tau, ti, 1)
    k_exp, lt, labels = [], [], []
    for a in range(m.dim):
        for b in V.crystal.elements:
            wt = V.crystal.wt[b]
            k_exp.append(0 if m.case == 2 else m.k_exp[a] + wt[i] - wt[ti])
            lt.append(m.lt[a])
            labels.append(f"{m.labels[a]}⊗{V.crystal.labels[b]}")
    out = RankTwoModule(m.case, m.params, d, i, labels, b_i, b_tau, k_exp, lt,
                        name=f"{m.name}⊗{V.name}", factors=(m, V))
    report = check_relations(out)
    if not report.ok:
        v = report.violations[0]
        raise OracleError(f"{out.name} fails relation {v.clause}: {v.detail}")
    return out


# ──────────────────────────────────────────────────────────────
# Decomposition and the q -> ∞ limit
# ──────────────────────────────────────────────────────────────

@dataclass
class Component:
    """An irreducible summand: its parameters and vectors w_0, w_1, ..."""
    params: Tuple[int, ...]
    vectors: List[QVector] = field(default_factory=list)


def _restricted(mat: QMatrix, cols: Sequence[int]) -> List[QVector]:
    allowed = set(cols)
    return [{c: v for c, v in row.items() if c in allowed} for row in mat.rows]


def _string_components(M: RankTwoModule) -> List[Component]:
    """
    Highest-weight vectors are the kernel of B_tau in each k_i-eigenspace,
    split further by the eigenvalue of t when a = -1; each spans a B_i-string.
    """
    by_weight: Dict[int, List[int]] = {}
    for b, e in enumerate(M.k_exp):
        by_weight.setdefault(e, []).append(b)
    t = M.t() if M.case == -1 else None
    s = M.s_i
    comps = []
    for e in sorted(by_weight, reverse=True):
        cols = by_weight[e]
        kernel_eqs = _restricted(M.b_tau, cols)
        if M.case == 0:
            candidates = [((e,), kernel_eqs)] if e >= 0 else []
        else:
            candidates = []
            for n_minus in range(M.dim):
                n_plus = e - n_minus
                shifted = _restricted(t - QMatrix.identity(M.dim).scale(q_int(n_minus - n_plus + s)), cols)
                candidates.append(((n_minus, n_plus), kernel_eqs + shifted))
        for params, eqs in candidates:
            highest = nullspace(eqs, cols)
            if len(highest) > 1:
                raise OracleError(f"{M.name}: type {params} occurs with multiplicity {len(highest)}")
            if not highest:
                continue
            length = params[0]
            comp = Component(params, [highest[0]])
            for k in range(1, length + 1):
                comp.vectors.append(scale_vector(M.b_i.apply(comp.vectors[-1]), ONE_Q / q_int(k)))
            if any(not w for w in comp.vectors) or M.b_i.apply(comp.vectors[-1]):
                raise OracleError(f"{M.name}: highest-weight vector of type {params} "
                                  f"does not span a string of length {length}")
            comps.append(comp)
    return comps


def _eigen_components(M: RankTwoModule) -> List[Component]:
    """a = 2: B_i is diagonalizable with eigenvalues [n'], |n'| ≤ bound."""
    bound = abs(M.params[0]) + M.dim
    cols = list(range(M.dim))
    comps = []
    for n in range(-bound, bound + 1):
        eqs = (M.b_i - QMatrix.identity(M.dim).scale(q_int(n))).rows
        vectors = nullspace(eqs, cols)
        if len(vectors) > 1:
            raise OracleError(f"{M.name}: eigenvalue [{n}] has multiplicity {len(vectors)}")
        if vectors:
            comps.append(Component((n,), vectors))
    return comps


def decompose(M: RankTwoModule) -> List[Component]:
    """
    Irreducible summands of M.

    Raises:
        OracleError: If the summands found do not fill M.
    """
    comps = _eigen_components(M) if M.case == 2 else _string_components(M)
    found = sum(len(c.vectors) for c in comps)
    if found != M.dim:
        raise OracleError(f"{M.name}: summands span {found} of {M.dim} dimensions (not semisimple here)")
    logger.debug(f"✓ {M.name} = " + " ⊕ ".join(f"Vı{c.params}" for c in comps))
    return comps


def _sqrt_split(x: Fraction) -> Tuple[int, Fraction]:
    """(e, r) with x = 2^e r^2, r > 0 having odd numerator and denominator."""
    num, den, e = x.numerator, x.denominator, 0
    while num % 2 == 0:
        num //= 2
        e += 1
    while den % 2 == 0:
        den //= 2
        e -= 1
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise OracleError(f"leading norm {x} is not 2^e times a rational square")
    return e, Fraction(rn, rd)


def crystal_limit(M: RankTwoModule, w: QVector) -> Dict[int, Sqrt2Scalar]:
    """
    ev(w / lt(w)) in the crystal basis of M.

    Coordinates on the crystal basis are g_b = w_b c_b q^(h_b/2); only the
    terms of top degree survive, and they are divided by the square root
    of the sum of their squared leading coefficients.
    """
    top = None
    terms = {}
    for b, x in w.items():
        c, h = M.lt[b]
        d2 = 2 * x.degree() + h
        terms[b] = (d2, x.leading_coefficient(), c)
        top = d2 if top is None else max(top, d2)
    lead = {b: (lc, c) for b, (d2, lc, c) in terms.items() if d2 == top}
    total = sum((lc * lc * c.norm_squared() for lc, c in lead.values()), Fraction(0))
    e, r = _sqrt_split(total)
    out = {}
    for b, (lc, c) in lead.items():
        try:
            out[b] = Sqrt2Scalar.from_fraction(lc / r) * c * Sqrt2Scalar.sqrt2_power(-e)
        except ValueError as exc:
            raise OracleError(f"{M.name}: limit coefficient {lc / r} is not dyadic") from exc
    return out


def _counterpart_factors(M: RankTwoModule) -> Tuple[ICrystalGraph, CrystalGraph]:
    m, V = M.factors
    d = M.datum
    if M.case == 2:
        return rank_one_icrystal(d, m.params[0], m.node), V.crystal
    if M.case == 0:
        return string_icrystal(d, m.params[0], m.node), V.crystal
    return minus_one_icrystal(d, m.params[0], m.params[1], m.node), V.crystal


def _component_beta(M: RankTwoModule, comp: Component, k: int) -> Tuple:
    d = M.datum
    if M.case == 2:
        return rank_one_icrystal(d, comp.params[0], M.node).beta[0]
    if M.case == 0:
        return string_icrystal(d, comp.params[0], M.node).beta[k]
    return minus_one_icrystal(d, comp.params[0], comp.params[1], M.node).beta[k]


def oracle_crystal_limit(m: RankTwoModule, partner: Optional[Sequence[int]] = None) -> ICrystalGraph:
    """
    The ıcrystal of m ⊗ V obtained from the q-module itself.

    Args:
        m: V^ı module from build_rank_two_module, or an already
           tensored module from tensor_module.
        partner: Parameters of V when m is not tensored yet (see
                 default_partner).

    Returns:
        ICrystalGraph with the keys, labels and wt^ı of the combinatorial
        product; beta and B-matrices come from the decomposition.

    Raises:
        OracleError: On a failed decomposition, a non-orthonormal limit
                     basis, or beta not constant on a basis element.
    """
    M = m if m.factors else tensor_module(m, default_partner(m, partner))
    d = M.datum
    i, ti = M.node, d.tau[M.node]
    comps = decompose(M)

    # columns of the limit change-of-basis matrix, one per (component, k)
    columns: List[Dict[int, Sqrt2Scalar]] = []
    col_beta: List[Tuple] = []
    strings: List[List[int]] = []
    signs: List[int] = []
    for comp in comps:
        ids = []
        for k, w in enumerate(comp.vectors):
            ids.append(len(columns))
            columns.append(crystal_limit(M, w))
            col_beta.append(_component_beta(M, comp, k))
            signs.append((comp.params[0] > 0) - (comp.params[0] < 0))
        strings.append(ids)

    for x, cx in enumerate(columns):
        for y in range(x, len(columns)):
            dot = sum((a * columns[y][b] for b, a in cx.items() if b in columns[y]), ZERO)
            if dot != (ONE if x == y else ZERO):
                raise OracleError(f"{M.name}: limit vectors {x}, {y} are not orthonormal (pairing {dot})")

    beta = []
    for b in range(M.dim):
        seen = {col_beta[x] for x, col in enumerate(columns) if b in col}
        if len(seen) != 1:
            raise OracleError(f"{M.name}: beta is not constant on {M.labels[b]} ({sorted(seen)})")
        beta.append(seen.pop())

    btil: List[List[Row]] = [[{} for _ in range(M.dim)] for _ in d.indices]

    def add(j: int, src: Dict[int, Sqrt2Scalar], dst: Dict[int, Sqrt2Scalar], scale: int = 1):
        for c, a in src.items():
            row = btil[j][c]
            for t, amp in dst.items():
                row[t] = row.get(t, ZERO) + a * amp * scale

    if M.case == 2:
        for x, col in enumerate(columns):
            if signs[x]:
                add(i, col, col, signs[x])
    else:
        for ids in strings:
            for lo, hi in zip(ids, ids[1:]):
                add(i, columns[lo], columns[hi])
                add(ti, columns[hi], columns[lo])

    B1, B2 = _counterpart_factors(M)
    keys, labels, wti = [], [], []
    for b1 in B1.elements:
        for b2 in B2.elements:
            keys.append((b1, b2))
            labels.append(f"{B1.labels[b1]}⊗{B2.labels[b2]}")
            wti.append(B1.wti[b1] + project_weight(B2.wt[b2], d))
    out = ICrystalGraph(d, keys, labels, wti, beta, btil, name=f"lim {M.name}")
    logger.debug(f"✓ Crystal limit of {M.name}: {len(comps)} component(s)")
    return out


def combinatorial_counterpart(m: RankTwoModule, partner: Optional[Sequence[int]] = None) -> ICrystalGraph:
    M = m if m.factors else tensor_module(m, default_partner(m, partner))
    B1, B2 = _counterpart_factors(M)
    return tensor_icrystal_crystal(B1, B2)


def compare_oracle(m: RankTwoModule, partner: Optional[Sequence[int]] = None) -> CheckReport:
    """Oracle limit against the combinatorial tensor rule, element by element."""
    M = m if m.factors else tensor_module(m, default_partner(m, partner))
    report = CheckReport(f"oracle {M.name}")
    report.checked += 1
    try:
        limit = oracle_crystal_limit(M)
    except OracleError as exc:
        report.add('decomposition', str(exc))
        return report
    expected = combinatorial_counterpart(M)
    witness = compare_under(limit, expected, list(range(len(limit))))
    if witness:
        report.add('tensor rule', f"{M.name}: {witness}")
    return report


# ──────────────────────────────────────────────────────────────
# a = 2 eigenvalues on V(n) with kappa = [s]
# ──────────────────────────────────────────────────────────────

def expected_a2_eigenvalues(n: int, s: int) -> List[int]:
    """
    Integers x with B_i acting on V(n) by eigenvalues [x], sorted:
    sgn(s)[|s| - n + 2l] for max(n - |s| + 1, 0) ≤ l ≤ n, together with
    0, ±[2l] (n - |s| even) or ±[2l-1] (n - |s| odd) when n ≥ |s|.
    """
    sgn = (s > 0) - (s < 0)
    out = [sgn * (abs(s) - n + 2 * l) for l in range(max(n - abs(s) + 1, 0), n + 1)]
    if n >= abs(s):
        if (n - s) % 2 == 0:
            out.append(0)
            out += [x for l in range(1, (n - abs(s)) // 2 + 1) for x in (2 * l, -2 * l)]
        else:
            out += [x for l in range(1, (n - abs(s) + 1) // 2 + 1) for x in (2 * l - 1, -(2 * l - 1))]
    return sorted(out)


def a2_eigenvalues(n: int, s: int, datum: Optional[CartanSatakeDatum] = None) -> List[int]:
    """
    Eigenvalues of B_i = F_i + q^-1 E_i K_i^-1 + [s] K_i^-1 on V(n),
    computed as V^ı(s) ⊗ V(n).

    Raises:
        OracleError: If B_i is not diagonalizable with eigenvalues [x].
    """
    datum, _ = _resolve(2, datum)
    M = tensor_module(build_rank_two_module(2, (s,), datum), string_module(datum, n))
    return sorted(c.params[0] for c in decompose(M))


# ──────────────────────────────────────────────────────────────
# Sweeps
# ──────────────────────────────────────────────────────────────

def oracle_sweep(max_n_minus: int = ORACLE_MAX_N_MINUS, p_range: Tuple[int, int] = ORACLE_P_RANGE,
                 datum: Optional[CartanSatakeDatum] = None, progress: bool = False) -> CheckReport:
    """V^ı(n_-, n_+) ⊗ V_natural for 0 ≤ n_- ≤ max_n_minus, n_+ - s_i in p_range."""
    datum, i = _resolve(-1, datum)
    report = CheckReport("oracle sweep")
    points = [(n, p) for n in range(max_n_minus + 1) for p in range(p_range[0], p_range[1] + 1)]
    for n_minus, p in tqdm(points, desc="Oracle", unit="module", disable=not progress):
        report.extend(compare_oracle(build_rank_two_module(-1, (n_minus, p + datum.s[i]), datum)))
    logger.info(f"{'✓' if report.ok else '✗'} Oracle sweep: {len(points)} modules, "
                f"{len(report.violations)} discrepancy(ies)")
    return report


def norm_sweep(max_n_minus: int = NORM_MAX_N_MINUS, p_range: Tuple[int, int] = ORACLE_P_RANGE,
               datum: Optional[CartanSatakeDatum] = None) -> CheckReport:
    """Norm recursion against the closed form and the leading-term cases."""
    datum, i = _resolve(-1, datum)
    s = datum.s[i]
    report = CheckReport("norm sweep")
    for n_minus in range(max_n_minus + 1):
        for p in range(p_range[0], p_range[1] + 1):
            m = build_rank_two_module(-1, (n_minus, p + s), datum)
            for k, norm, c, h in module_norms(m):
                report.checked += 1
                if norm != closed_form_norm(n_minus, p + s, s, k):
                    report.add('closed form', f"(n-, p, k) = ({n_minus}, {p}, {k}): {norm}")
                if (c, h) != lt_case_table(n_minus, p + s, s, k):
                    report.add('leading term', f"(n-, p, k) = ({n_minus}, {p}, {k}): {c} q^({h}/2)")
    return report


def a2_eigen_sweep(max_n: int = ORACLE_MAX_N_MINUS, s_range: Tuple[int, int] = ORACLE_P_RANGE,
                   datum: Optional[CartanSatakeDatum] = None) -> CheckReport:
    report = CheckReport("a = 2 eigenvalues")
    for n in range(max_n + 1):
        for s in range(s_range[0], s_range[1] + 1):
            report.checked += 1
            try:
                got = a2_eigenvalues(n, s, datum)
            except OracleError as exc:
                report.add('eigenvalues', str(exc))
                continue
            if got != expected_a2_eigenvalues(n, s):
                report.add('eigenvalues', f"(n, s) = ({n}, {s}): {got} vs {expected_a2_eigenvalues(n, s)}")
    return report
