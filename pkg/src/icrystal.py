# src/icrystal.py — ıCrystals: Structure, Axioms, Families and Morphisms
"""
Finite ıcrystals over a CartanSatakeDatum.

Responsibilities:
    1. ICrystalGraph: wt^ı, beta_i and sparse B_i matrices over Z[1/√2]
    2. check_icrystal_axioms: every clause of the definition, the Hermitian
       property, and the derived properties for a = 0 and a = -1
    3. make_builtin_icrystal: the eight standard families
    4. ICrystalMorphism + check_icrystal_morphism classification
    5. builtin_equivalences: the three stated equivalences
    6. disjoint_union

B-matrices are stored row-wise: btil[i][b] = {b': (B_i b, b')}. The basis
is orthonormal, so (B_i b, b') is the coefficient of b' in B_i b.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from sympy import sqrt
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.crystal import CheckReport
from src.extint import (
    NEG_INF, NEG_INF_EV, NEG_INF_ODD, ExtInt, is_finite, parity,
)
from src.rootdata import CartanSatakeDatum, IWeight
from src.sqrt2 import INV_SQRT2, ONE, ZERO, Sqrt2Scalar

logger = logging.getLogger(__name__)

Row = Dict[int, Sqrt2Scalar]

QQ_SQRT2 = QQ.algebraic_field(sqrt(2))


class ICrystalError(ValueError):
    """Invalid ıcrystal construction request."""


# ──────────────────────────────────────────────────────────────
# ICrystalGraph
# ──────────────────────────────────────────────────────────────

class ICrystalGraph:
    """
    Explicit finite ıcrystal with elements 0..n-1.

    Args:
        datum: Cartan/Satake datum.
        keys: Hashable handle per element (pairs for tensor products).
        labels: Display label per element.
        wti: IWeight per element.
        beta: beta_i per element, one ExtInt per index.
        btil: btil[i][b] is the sparse row of B_i applied to b.
    """

    def __init__(self, datum: CartanSatakeDatum, keys: Sequence[Hashable], labels: Sequence[str],
                 wti: Sequence[IWeight], beta: Sequence[Tuple[ExtInt, ...]],
                 btil: Sequence[Sequence[Row]], name: str = ''):
        self.datum = datum
        self.keys = list(keys)
        self.labels = list(labels)
        self.wti = list(wti)
        self.beta = [tuple(row) for row in beta]
        self.btil = [[{t: a for t, a in row.items() if a} for row in rows] for rows in btil]
        self.name = name
        self.index = {k: b for b, k in enumerate(self.keys)}
        # overlapping tensor-rule branches, filled in by the tensor module
        self.notes: List[str] = []
        if len(self.btil) != datum.rank or any(len(rows) != len(self.keys) for rows in self.btil):
            raise ICrystalError(f"B-matrix shape does not match ıcrystal '{name}'")

    def __len__(self) -> int:
        return len(self.keys)

    def __repr__(self) -> str:
        return f"ICrystalGraph({self.name!r}, {len(self)} elements)"

    @property
    def elements(self) -> range:
        return range(len(self.keys))

    def wti_i(self, b: int, i: int) -> int:
        return self.datum.iweight_at(self.wti[b], i)

    def entry(self, i: int, b: int, target: int) -> Sqrt2Scalar:
        return self.btil[i][b].get(target, ZERO)

    def basis_image(self, b: int, i: int) -> Optional[int]:
        """B_i b when it is a single basis element with amplitude 1."""
        row = self.btil[i][b]
        if len(row) == 1:
            (t, amp), = row.items()
            if amp == ONE:
                return t
        return None

    def apply(self, i: int, vector: Row) -> Row:
        """B_i applied to a linear combination of basis elements."""
        out: Row = {}
        for b, c in vector.items():
            for t, a in self.btil[i][b].items():
                out[t] = out.get(t, ZERO) + c * a
        return {t: a for t, a in out.items() if a}

    def edges(self) -> List[Tuple[int, int, int, Sqrt2Scalar]]:
        """(i, source, target, amplitude) for i in I_tau, deterministic order."""
        out = []
        for i in self.datum.i_tau:
            for b in self.elements:
                for t in sorted(self.btil[i][b]):
                    out.append((i, b, t, self.btil[i][b][t]))
        return out


def disjoint_union(B1: ICrystalGraph, B2: ICrystalGraph, name: str = '') -> ICrystalGraph:
    """B1 ⊔ B2 with B1 first; keys become (0, k) and (1, k)."""
    if B1.datum != B2.datum:
        raise ICrystalError("datum mismatch in disjoint_union")
    shift = len(B1)
    keys = [(0, k) for k in B1.keys] + [(1, k) for k in B2.keys]
    btil = []
    for i in B1.datum.indices:
        rows = [dict(r) for r in B1.btil[i]]
        rows += [{t + shift: a for t, a in r.items()} for r in B2.btil[i]]
        btil.append(rows)
    return ICrystalGraph(B1.datum, keys, B1.labels + B2.labels, B1.wti + B2.wti,
                         B1.beta + B2.beta, btil, name=name or f"{B1.name}⊔{B2.name}")


# ──────────────────────────────────────────────────────────────
# Axiom checker
# ──────────────────────────────────────────────────────────────

def _cond_minus_one(B: ICrystalGraph, b: int, i: int) -> bool:
    """beta_i(b) = beta_tau(i)(b) + wt^ı_i(b) - s_i."""
    d = B.datum
    return B.beta[b][i] == B.beta[b][d.tau[i]] + B.wti_i(b, i) - d.s[i]


def _diff_is(x: ExtInt, y: ExtInt, k: int) -> bool:
    """x - y = k for finite values (infinite values never satisfy it)."""
    return is_finite(x) and is_finite(y) and x - y == k


def check_icrystal_axioms(B: ICrystalGraph) -> CheckReport:
    """
    Check every clause on every (element, i) pair.

    Returns:
        CheckReport with one violation per failed clause instance.
    """
    report = CheckReport(f"ıcrystal axioms: {B.name}")
    d = B.datum
    for i in d.indices:
        ti = d.tau[i]
        a = d.a_tau(i)
        s = d.s[i]
        alpha_bar = d.alpha_bar(i)
        # mirror[b][t] = (b, B_tau(i) t)
        mirror: List[Row] = [{} for _ in B.elements]
        for t in B.elements:
            for b2, amp in B.btil[ti][t].items():
                mirror[b2][t] = amp
        for b in B.elements:
            report.checked += 1
            lab = B.labels[b]
            beta = B.beta[b][i]
            row = B.btil[i][b]
            wti_i = B.wti_i(b, i)
            if not is_finite(beta) and row:
                report.add('(1)', f"beta_{i}({lab}) = {beta!r} but B_{i} {lab} ≠ 0")
            for t in row:
                if B.wti[t] != B.wti[b] - alpha_bar:
                    report.add('(2)', f"wt^ı({B.labels[t]}) ≠ wt^ı({lab}) - ᾱ_{i}")
            if row != mirror[b]:
                bad = sorted(set(row) ^ set(mirror[b]) | {t for t in row if mirror[b].get(t) != row[t]})
                report.add('(2.5)', f"(B_{i} {lab}, b') ≠ ({lab}, B_{ti} b') for b' in {[B.labels[t] for t in bad]}")
            target = B.basis_image(b, i)
            if target is not None and B.basis_image(target, ti) != b:
                report.add('(2.6)', f"B_{ti} B_{i} {lab} ≠ {lab}")

            if a == 2:
                if beta == NEG_INF or not (is_finite(beta) or beta in (NEG_INF_EV, NEG_INF_ODD)):
                    report.add('(3a)', f"beta_{i}({lab}) = {beta!r}")
                    continue
                if parity(beta + s) != wti_i % 2:
                    report.add('(3b)', f"parity of beta_{i}({lab}) + s_{i} ≠ wt^ı_{i}")
                for t in row:
                    if B.beta[t][i] != beta:
                        report.add('(3c)', f"beta_{i} changes along B_{i} at {lab}")
            elif a == 0:
                if not (is_finite(beta) or beta == NEG_INF):
                    report.add('(4a)', f"beta_{i}({lab}) = {beta!r}")
                    continue
                if beta != B.beta[b][ti] + wti_i:
                    report.add('(4b)', f"beta_{i}({lab}) ≠ beta_{ti} + wt^ı_{i}")
                for t in row:
                    if B.basis_image(b, i) != t or not _diff_is(B.beta[t][i], beta, -1):
                        report.add('(4c)', f"B_{i} {lab} is not a basis element with beta_{i} dropping by 1")
                    # derived property for a = 0
                    if B.wti_i(t, i) != wti_i - 2 or not _diff_is(B.beta[t][ti], B.beta[b][ti], 1):
                        report.add('a=0 property', f"wt^ı_{i} or beta_{ti} wrong at B_{i} {lab}")
            elif a == -1:
                if not (is_finite(beta) or beta == NEG_INF):
                    report.add('(5a)', f"beta_{i}({lab}) = {beta!r}")
                    continue
                base = B.beta[b][ti] + wti_i - s
                if beta != base and beta != base + 1:
                    report.add('(5b)', f"beta_{i}({lab}) = {beta!r} ∉ {{{base!r}, {base + 1!r}}}")
                cond_b = _cond_minus_one(B, b, i)
                for t in row:
                    cond_t = _cond_minus_one(B, t, i)
                    if not cond_b and (B.basis_image(b, i) != t or cond_t):
                        report.add('(5c)', f"B_{i} {lab} is not a basis element outside the equality case")
                    if not cond_t and not _diff_is(B.beta[t][i], beta, -1):
                        report.add('(5d)', f"beta_{i} does not drop by 1 at B_{i} {lab}")
                _check_minus_one_properties(B, b, i, report)
    return report


def _check_minus_one_properties(B: ICrystalGraph, b: int, i: int, report: CheckReport):
    """Element-wise consequences of the axioms when a_{i,tau(i)} = -1."""
    d = B.datum
    ti = d.tau[i]
    lab = B.labels[b]
    cond_b = _cond_minus_one(B, b, i)
    bi, bt = B.beta[b][i], B.beta[b][ti]
    w = B.wti_i(b, i)
    for t in B.btil[i][b]:
        cond_t = _cond_minus_one(B, t, i)
        if B.wti_i(t, i) != w - 3:
            report.add('a=-1 property (1)', f"wt^ı_{i} does not drop by 3 at B_{i} {lab}")
        if not cond_b:
            if B.basis_image(b, i) != t or not (_diff_is(B.beta[t][i], bi, -1) and _diff_is(B.beta[t][ti], bt, 2)):
                report.add('a=-1 property (2)', f"unexpected B_{i} step at {lab}")
        elif cond_t:
            if B.basis_image(b, i) != t or not (_diff_is(B.beta[t][ti], bt, 1) and _diff_is(B.beta[t][i], bi, -2)):
                report.add('a=-1 property (7)', f"unexpected B_{i} step at {lab}")
        elif not (_diff_is(B.beta[t][ti], bt, 1) and _diff_is(B.beta[t][i], bi, -1)):
            report.add('a=-1 property (8)', f"unexpected beta change along B_{i} at {lab}")
    for t in B.btil[ti][b]:
        cond_t = _cond_minus_one(B, t, i)
        if B.wti_i(t, i) != w + 3:
            report.add('a=-1 property (5)', f"wt^ı_{i} does not rise by 3 at B_{ti} {lab}")
        if cond_b:
            if B.basis_image(b, ti) != t or not (_diff_is(B.beta[t][ti], bt, -1) and _diff_is(B.beta[t][i], bi, 2)):
                report.add('a=-1 property (6)', f"unexpected B_{ti} step at {lab}")
        elif not cond_t:
            if B.basis_image(b, ti) != t or not (_diff_is(B.beta[t][i], bi, 1) and _diff_is(B.beta[t][ti], bt, -2)):
                report.add('a=-1 property (3)', f"unexpected B_{ti} step at {lab}")
        elif not (_diff_is(B.beta[t][i], bi, 1) and _diff_is(B.beta[t][ti], bt, -1)):
            report.add('a=-1 property (4)', f"unexpected beta change along B_{ti} at {lab}")


# ──────────────────────────────────────────────────────────────
# Built-in families
# ──────────────────────────────────────────────────────────────

def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def _empty_btil(datum: CartanSatakeDatum, n: int) -> List[List[Row]]:
    return [[{} for _ in range(n)] for _ in datum.indices]


def _iweight_for(datum: CartanSatakeDatum, node: int, value: int) -> IWeight:
    """IWeight whose wt^ı at `node` equals value and is 0 elsewhere."""
    values = [0] * len(datum.i_tau)
    pos = datum.rep_position(node)
    values[pos] = value if (node in datum.i_tau or datum.tau[node] == node) else -value
    return datum.make_iweight(values)


def trivial_icrystal(datum: CartanSatakeDatum) -> ICrystalGraph:
    """The one-element ıcrystal b_0 carried by the trivial module."""
    beta = []
    btil = _empty_btil(datum, 1)
    for i in datum.indices:
        a, s = datum.a_tau(i), datum.s[i]
        if a == 2:
            beta.append(abs(s))
            if s:
                btil[i][0] = {0: Sqrt2Scalar.from_int(_sgn(s))}
        elif a == 0:
            beta.append(0)
        else:
            beta.append(max(-s, 0))
    return ICrystalGraph(datum, [0], ['b_0'], [datum.zero_iweight()], [tuple(beta)], btil, name='trivial')


def t_zeta(datum: CartanSatakeDatum, zeta: IWeight) -> ICrystalGraph:
    """T_zeta: beta = -inf symbols, B = 0."""
    beta = []
    for i in datum.indices:
        if datum.a_tau(i) == 2:
            beta.append(NEG_INF_EV if datum.iweight_at(zeta, i) == datum.s[i] % 2 else NEG_INF_ODD)
        else:
            beta.append(NEG_INF)
    return ICrystalGraph(datum, [0], ['t'], [zeta], [tuple(beta)], _empty_btil(datum, 1), name=f"T{zeta}")


def _require_orbit(datum: CartanSatakeDatum, node: int, a: int, size: int) -> int:
    if node not in datum.indices:
        raise ICrystalError(f"node {node} outside datum")
    if datum.a_tau(node) != a:
        raise ICrystalError(f"family needs a_(i,τ(i)) = {a} at node {node}, got {datum.a_tau(node)}")
    if datum.rank != size:
        raise ICrystalError(f"family needs a rank-{size} datum, got rank {datum.rank}")
    return node


def rank_one_icrystal(datum: CartanSatakeDatum, n: int, node: Optional[int] = None) -> ICrystalGraph:
    """B^ı(n) for a = 2: one element, beta = |n|, B b = sgn(n) b."""
    i = _require_orbit(datum, datum.i_tau[0] if node is None else node, 2, 1)
    btil = _empty_btil(datum, 1)
    if n:
        btil[i][0] = {0: Sqrt2Scalar.from_int(_sgn(n))}
    wti = datum.make_iweight([(n + datum.s[i]) % 2])
    return ICrystalGraph(datum, [0], ['b'], [wti], [(abs(n),)], btil, name=f"Bı({n})")


def two_cycle_icrystal(datum: CartanSatakeDatum, n: int, node: Optional[int] = None) -> ICrystalGraph:
    """B^ı(n;-n), n > 0: b_+ and b_- swapped by B, beta = n."""
    i = _require_orbit(datum, datum.i_tau[0] if node is None else node, 2, 1)
    if n <= 0:
        raise ICrystalError(f"Bı(n;-n) needs n > 0, got {n}")
    wti = datum.make_iweight([(n + datum.s[i]) % 2])
    btil = _empty_btil(datum, 2)
    btil[i][0] = {1: ONE}
    btil[i][1] = {0: ONE}
    return ICrystalGraph(datum, ['+', '-'], ['b_+', 'b_-'], [wti, wti], [(n,), (n,)], btil,
                         name=f"Bı({n};{-n})")


def string_icrystal(datum: CartanSatakeDatum, n: int, node: Optional[int] = None) -> ICrystalGraph:
    """a = 0 family B^ı(n): b_0 -> b_1 -> ... -> b_n along B_i."""
    i = _require_orbit(datum, datum.i_tau[0] if node is None else node, 0, 2)
    ti = datum.tau[i]
    if n < 0:
        raise ICrystalError(f"Bı(n) needs n >= 0, got {n}")
    btil = _empty_btil(datum, n + 1)
    wti, beta = [], []
    for k in range(n + 1):
        wti.append(_iweight_for(datum, i, n - 2 * k))
        row = [0, 0]
        row[i], row[ti] = n - k, k
        beta.append(tuple(row))
        if k < n:
            btil[i][k] = {k + 1: ONE}
        if k > 0:
            btil[ti][k] = {k - 1: ONE}
    return ICrystalGraph(datum, list(range(n + 1)), [f"b_{k}" for k in range(n + 1)], wti, beta, btil,
                         name=f"Bı({n})")


def _minus_one_node(datum: CartanSatakeDatum, node: Optional[int]) -> Tuple[int, int]:
    i = _require_orbit(datum, datum.i_tau[0] if node is None else node, -1, 2)
    return i, datum.tau[i]


def _beta_pair(datum, i, ti, bi, bt) -> Tuple[int, int]:
    row = [0, 0]
    row[i], row[ti] = bi, bt
    return tuple(row)


def minus_one_icrystal(datum: CartanSatakeDatum, n_minus: int, n_plus: int,
                       node: Optional[int] = None) -> ICrystalGraph:
    """B^ı(n_-, n_+) for a = -1: a B_i-string of length n_-."""
    i, ti = _minus_one_node(datum, node)
    if n_minus < 0:
        raise ICrystalError(f"Bı(n-,n+) needs n- >= 0, got {n_minus}")
    p = n_plus - datum.s[i]
    btil = _empty_btil(datum, n_minus + 1)
    wti, beta = [], []
    for k in range(n_minus + 1):
        wti.append(_iweight_for(datum, i, n_minus + n_plus - 3 * k))
        beta.append(_beta_pair(datum, i, ti, n_minus - k + max(p - k, 0), k + max(k - p - 1, 0)))
        if k < n_minus:
            btil[i][k] = {k + 1: ONE}
        if k > 0:
            btil[ti][k] = {k - 1: ONE}
    return ICrystalGraph(datum, list(range(n_minus + 1)), [f"b_{k}" for k in range(n_minus + 1)],
                         wti, beta, btil, name=f"Bı({n_minus},{n_plus})")


def vee_icrystal(datum: CartanSatakeDatum, n_minus: int, n_plus: int,
                 node: Optional[int] = None) -> ICrystalGraph:
    """
    B^ı(n_-, n_+; ∨): two strings b_{k,±} (k ≤ p) merging into one string
    b_k (p < k ≤ n_-) with amplitude 1/√2, where p = n_+ - s_i.

    Raises:
        ICrystalError: Unless -1 < p < n_-.
    """
    i, ti = _minus_one_node(datum, node)
    p = n_plus - datum.s[i]
    if not -1 < p < n_minus:
        raise ICrystalError(f"Bı(n-,n+;∨) needs -1 < n+ - s_i < n-, got p={p}, n-={n_minus}")
    keys, labels, wti, beta = [], [], [], []
    for k in range(p + 1):
        for sign in '+-':
            keys.append((k, sign))
            labels.append(f"b_{k},{sign}")
            wti.append(_iweight_for(datum, i, n_minus + n_plus - 3 * k))
            beta.append(_beta_pair(datum, i, ti, n_minus + p - 2 * k, k))
    for k in range(p + 1, n_minus + 1):
        keys.append((k, ''))
        labels.append(f"b_{k}")
        wti.append(_iweight_for(datum, i, n_minus + n_plus - 3 * k))
        beta.append(_beta_pair(datum, i, ti, n_minus - k, 2 * k - p - 1))
    idx = {k: b for b, k in enumerate(keys)}
    btil = _empty_btil(datum, len(keys))
    for k in range(p + 1):
        for sign in '+-':
            src = idx[(k, sign)]
            if k < p:
                btil[i][src] = {idx[(k + 1, sign)]: ONE}
            else:
                btil[i][src] = {idx[(p + 1, '')]: INV_SQRT2}
            if k > 0:
                btil[ti][src] = {idx[(k - 1, sign)]: ONE}
    for k in range(p + 1, n_minus + 1):
        src = idx[(k, '')]
        if k < n_minus:
            btil[i][src] = {idx[(k + 1, '')]: ONE}
        if k == p + 1:
            btil[ti][src] = {idx[(p, '+')]: INV_SQRT2, idx[(p, '-')]: INV_SQRT2}
        else:
            btil[ti][src] = {idx[(k - 1, '')]: ONE}
    return ICrystalGraph(datum, keys, labels, wti, beta, btil, name=f"Bı({n_minus},{n_plus};∨)")


def wedge_icrystal(datum: CartanSatakeDatum, n_minus: int, n_plus: int,
                   node: Optional[int] = None) -> ICrystalGraph:
    """
    B^ı(n_-, n_+; ∧): one string b_k (k < m) splitting with amplitude 1/√2
    into two strings b_{k,±} (m ≤ k ≤ n_-), where m = n_+ + s_tau(i).

    Raises:
        ICrystalError: Unless 0 < m ≤ n_-.
    """
    i, ti = _minus_one_node(datum, node)
    m = n_plus + datum.s[ti]
    if not 0 < m <= n_minus:
        raise ICrystalError(f"Bı(n-,n+;∧) needs 0 < n+ + s_τ(i) ≤ n-, got m={m}, n-={n_minus}")
    p = m - 1
    keys, labels, wti, beta = [], [], [], []
    for k in range(m):
        keys.append((k, ''))
        labels.append(f"b_{k}")
        wti.append(_iweight_for(datum, i, n_minus + n_plus - 3 * k))
        beta.append(_beta_pair(datum, i, ti, n_minus + p - 2 * k, k))
    for k in range(m, n_minus + 1):
        for sign in '+-':
            keys.append((k, sign))
            labels.append(f"b_{k},{sign}")
            wti.append(_iweight_for(datum, i, n_minus + n_plus - 3 * k))
            beta.append(_beta_pair(datum, i, ti, n_minus - k, 2 * k - m))
    idx = {k: b for b, k in enumerate(keys)}
    btil = _empty_btil(datum, len(keys))
    for k in range(m):
        src = idx[(k, '')]
        if k < m - 1:
            btil[i][src] = {idx[(k + 1, '')]: ONE}
        else:
            btil[i][src] = {idx[(m, '+')]: INV_SQRT2, idx[(m, '-')]: INV_SQRT2}
        if k > 0:
            btil[ti][src] = {idx[(k - 1, '')]: ONE}
    for k in range(m, n_minus + 1):
        for sign in '+-':
            src = idx[(k, sign)]
            if k < n_minus:
                btil[i][src] = {idx[(k + 1, sign)]: ONE}
            if k == m:
                btil[ti][src] = {idx[(m - 1, '')]: INV_SQRT2}
            else:
                btil[ti][src] = {idx[(k - 1, sign)]: ONE}
    return ICrystalGraph(datum, keys, labels, wti, beta, btil, name=f"Bı({n_minus},{n_plus};∧)")


ICRYSTAL_FAMILIES = ('trivial', 't_zeta', 'bi_rank1', 'bi_two_cycle', 'bi_string',
                     'bi_minus', 'bi_vee', 'bi_wedge')


def make_builtin_icrystal(family: str, datum: CartanSatakeDatum, params: Dict) -> ICrystalGraph:
    """
    Dispatch to a built-in ıcrystal family.

    Families and params:
        trivial                      : none
        t_zeta                       : zeta (list, one entry per orbit)
        bi_rank1, bi_two_cycle       : n, optional node (a = 2)
        bi_string                    : n, optional node (a = 0)
        bi_minus, bi_vee, bi_wedge   : n_minus, n_plus, optional node (a = -1)

    Raises:
        ICrystalError: Unknown family or parameters out of range.
    """
    key = family.lower().replace('-', '_')
    node = params.get('node')
    try:
        if key == 'trivial':
            return trivial_icrystal(datum)
        if key == 't_zeta':
            return t_zeta(datum, datum.make_iweight(params.get('zeta', [0] * len(datum.i_tau))))
        if key == 'bi_rank1':
            return rank_one_icrystal(datum, int(params['n']), node)
        if key == 'bi_two_cycle':
            return two_cycle_icrystal(datum, int(params['n']), node)
        if key == 'bi_string':
            return string_icrystal(datum, int(params['n']), node)
        if key == 'bi_minus':
            return minus_one_icrystal(datum, int(params['n_minus']), int(params['n_plus']), node)
        if key == 'bi_vee':
            return vee_icrystal(datum, int(params['n_minus']), int(params['n_plus']), node)
        if key == 'bi_wedge':
            return wedge_icrystal(datum, int(params['n_minus']), int(params['n_plus']), node)
    except KeyError as e:
        raise ICrystalError(f"family '{family}' is missing parameter {e}")
    raise ICrystalError(f"unknown ıcrystal family '{family}'")


# ──────────────────────────────────────────────────────────────
# Morphisms
# ──────────────────────────────────────────────────────────────

@dataclass
class ICrystalMorphism:
    """Linear map; columns[b] is the image of source basis element b."""
    source: ICrystalGraph
    target: ICrystalGraph
    columns: List[Row]
    name: str = ''

    def image(self, vector: Row) -> Row:
        out: Row = {}
        for b, c in vector.items():
            for t, a in self.columns[b].items():
                out[t] = out.get(t, ZERO) + c * a
        return {t: a for t, a in out.items() if a}

    def to_json(self) -> Dict:
        return {
            'name': self.name,
            'source': self.source.name,
            'target': self.target.name,
            'columns': [
                [{'target': t, 'amplitude': col[t].to_json()} for t in sorted(col)]
                for col in self.columns
            ],
        }


@dataclass
class MorphismClassification:
    kind: str
    flags: Dict[str, bool] = field(default_factory=dict)
    witness: Optional[str] = None

    def to_json(self) -> Dict:
        return {'kind': self.kind, 'flags': self.flags, 'witness': self.witness}


def identity_icrystal_morphism(B: ICrystalGraph) -> ICrystalMorphism:
    return ICrystalMorphism(B, B, [{b: ONE} for b in B.elements], name=f"id_{B.name}")


def _is_invertible(m: ICrystalMorphism) -> bool:
    n = len(m.source)
    if n != len(m.target):
        return False
    if n == 0:
        return True
    # exact rank over Q(√2)
    rows = [[QQ_SQRT2.from_sympy(m.columns[b].get(t, ZERO).as_expr()) for b in range(n)] for t in range(n)]
    return DomainMatrix(rows, (n, n), QQ_SQRT2).rank() == n


def check_icrystal_morphism(m: ICrystalMorphism) -> MorphismClassification:
    """
    Classify a linear map between ıcrystals.

    Returns:
        MorphismClassification with kind one of 'none', 'morphism', 'strict',
        'very strict', 'equivalence', 'isomorphism' and the individual flags.
    """
    src, tgt = m.source, m.target
    if src.datum != tgt.datum:
        return MorphismClassification('none', witness='datum mismatch')
    if len(m.columns) != len(src):
        return MorphismClassification('none', witness='wrong number of columns')
    d = src.datum
    for b in src.elements:
        for t in m.columns[b]:
            if src.wti[b] != tgt.wti[t] or src.beta[b] != tgt.beta[t]:
                return MorphismClassification(
                    'none', witness=f"(1) fails: {src.labels[b]} and {tgt.labels[t]} differ in wt^ı or beta")
    for b in src.elements:
        for i in d.indices:
            nb = src.basis_image(b, i)
            if nb is None or not m.columns[b] or not m.columns[nb]:
                continue
            if m.columns[nb] != tgt.apply(i, m.columns[b]):
                return MorphismClassification('none', witness=f"(2) fails at {src.labels[b]}, i={i}")

    strict = True
    witness = None
    for b in src.elements:
        for i in d.indices:
            if m.image(src.btil[i][b]) != tgt.apply(i, m.columns[b]):
                strict = False
                witness = f"not strict at {src.labels[b]}, i={i}"
                break
        if not strict:
            break
    very_strict = strict and all(not col or (len(col) == 1 and ONE in col.values()) for col in m.columns)
    equivalence = strict and _is_invertible(m)
    flags = {'strict': strict, 'very_strict': very_strict, 'equivalence': equivalence,
             'isomorphism': equivalence and very_strict}
    if flags['isomorphism']:
        kind = 'isomorphism'
    elif equivalence:
        kind = 'equivalence'
    elif very_strict:
        kind = 'very strict'
    elif strict:
        kind = 'strict'
    else:
        kind = 'morphism'
    return MorphismClassification(kind, flags, witness)


# ──────────────────────────────────────────────────────────────
# Stated equivalences
# ──────────────────────────────────────────────────────────────

def _half_sum(*pairs: Tuple[int, int]) -> Row:
    """(1/√2) Σ sign · b."""
    return {b: INV_SQRT2 * sign for b, sign in pairs}


def two_cycle_equivalence(datum: CartanSatakeDatum, n: int, node: Optional[int] = None) -> ICrystalMorphism:
    """B^ı(n) ⊔ B^ı(-n) -> B^ı(n;-n), b ↦ (b_+ ± b_-)/√2."""
    source = disjoint_union(rank_one_icrystal(datum, n, node), rank_one_icrystal(datum, -n, node))
    target = two_cycle_icrystal(datum, n, node)
    columns = [_half_sum((0, 1), (1, 1)), _half_sum((0, 1), (1, -1))]
    return ICrystalMorphism(source, target, columns, name='two-cycle equivalence')


def vee_equivalence(datum: CartanSatakeDatum, n_minus: int, n_plus: int,
                    node: Optional[int] = None) -> ICrystalMorphism:
    """B^ı(n_-, n_+) ⊔ B^ı(p, n_- + s_i) -> B^ı(n_-, n_+; ∨)."""
    i, _ = _minus_one_node(datum, node)
    p = n_plus - datum.s[i]
    first = minus_one_icrystal(datum, n_minus, n_plus, node)
    second = minus_one_icrystal(datum, p, n_minus + datum.s[i], node)
    source = disjoint_union(first, second)
    target = vee_icrystal(datum, n_minus, n_plus, node)
    t = target.index
    columns = []
    for k in range(n_minus + 1):
        if k <= p:
            columns.append(_half_sum((t[(k, '+')], 1), (t[(k, '-')], 1)))
        else:
            columns.append({t[(k, '')]: ONE})
    for k in range(p + 1):
        columns.append(_half_sum((t[(k, '+')], 1), (t[(k, '-')], -1)))
    return ICrystalMorphism(source, target, columns, name='∨ equivalence')


def wedge_equivalence(datum: CartanSatakeDatum, n_minus: int, n_plus: int,
                      node: Optional[int] = None) -> ICrystalMorphism:
    """B^ı(n_-, n_+) ⊔ B^ı(n_- - m, -n_+ - 2 s_tau(i)) -> B^ı(n_-, n_+; ∧)."""
    i, ti = _minus_one_node(datum, node)
    m = n_plus + datum.s[ti]
    first = minus_one_icrystal(datum, n_minus, n_plus, node)
    second = minus_one_icrystal(datum, n_minus - m, -n_plus - 2 * datum.s[ti], node)
    source = disjoint_union(first, second)
    target = wedge_icrystal(datum, n_minus, n_plus, node)
    t = target.index
    columns = []
    for k in range(n_minus + 1):
        if k < m:
            columns.append({t[(k, '')]: ONE})
        else:
            columns.append(_half_sum((t[(k, '+')], 1), (t[(k, '-')], 1)))
    for k in range(n_minus - m + 1):
        columns.append(_half_sum((t[(k + m, '+')], 1), (t[(k + m, '-')], -1)))
    return ICrystalMorphism(source, target, columns, name='∧ equivalence')


def builtin_equivalences(family: str, datum: CartanSatakeDatum, params: Dict) -> ICrystalMorphism:
    key = family.lower().replace('-', '_')
    node = params.get('node')
    if key == 'bi_two_cycle':
        return two_cycle_equivalence(datum, int(params['n']), node)
    if key == 'bi_vee':
        return vee_equivalence(datum, int(params['n_minus']), int(params['n_plus']), node)
    if key == 'bi_wedge':
        return wedge_equivalence(datum, int(params['n_minus']), int(params['n_plus']), node)
    raise ICrystalError(f"no stated equivalence for family '{family}'")
