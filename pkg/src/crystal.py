# src/crystal.py — Crystals, Tensor Products, Families and Axiom Checks
"""
Finite crystals over a CartanSatakeDatum.

Responsibilities:
    1. CrystalGraph: explicit crystal with integer element handles
    2. TensorCrystal: lazy left-nested tensor product over explicit factors
    3. tensor_crystals: explicit two-factor tensor product (row-major pairs)
    4. Families: B(n) strings, T_lambda, natural crystals of type-A
       components, fundamental crystals and B(lambda)
    5. highest_weight_component: breadth-first closure of a seed
    6. Checkers: crystal axioms, seminormality, conditions (S1)-(S3)',
       consequences of the S-conditions, crystal morphisms

Tensor convention:
    eps_i(b1 ⊗ b2) = eps_i(b1) - wt_i(b2)   if eps_i(b1) > phi_i(b2), else eps_i(b2)
    phi_i(b1 ⊗ b2) = phi_i(b2) + wt_i(b1)   if eps_i(b1) < phi_i(b2), else phi_i(b1)
    E_i acts on b1 if eps_i(b1) > phi_i(b2), else on b2
    F_i acts on b2 if eps_i(b1) < phi_i(b2), else on b1
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import COMPONENT_CAP, FUNDAMENTAL_SEARCH_POWER

from src.extint import NEG_INF, ExtInt, is_finite
from src.rootdata import CartanSatakeDatum, Weight, weight_add, weight_sub

logger = logging.getLogger(__name__)

Stats = Tuple[Weight, Tuple[ExtInt, ...], Tuple[ExtInt, ...]]


class CrystalError(ValueError):
    """Invalid crystal construction request."""


class CapExceededError(CrystalError):
    """A closure grew beyond the configured element cap."""


# ──────────────────────────────────────────────────────────────
# Check Reports
# ──────────────────────────────────────────────────────────────

@dataclass
class Violation:
    clause: str
    detail: str

    def to_json(self) -> Dict[str, str]:
        return {'clause': self.clause, 'witness': self.detail}


@dataclass
class CheckReport:
    """Violations found by a checker; an empty report is a pass."""
    name: str
    violations: List[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, clause: str, detail: str):
        self.violations.append(Violation(clause, detail))

    def extend(self, other: 'CheckReport'):
        self.violations.extend(other.violations)
        self.checked += other.checked

    def clauses(self) -> List[str]:
        return sorted({v.clause for v in self.violations})

    def to_json(self) -> Dict:
        return {
            'name': self.name,
            'ok': self.ok,
            'checked': self.checked,
            'violations': [v.to_json() for v in self.violations],
        }


# ──────────────────────────────────────────────────────────────
# CrystalGraph
# ──────────────────────────────────────────────────────────────

class CrystalGraph:
    """
    Explicit finite crystal.

    Elements are the integers 0..n-1. `keys[b]` is the hashable handle the
    element came from (a family index, a pair of factor indices, or a tuple
    of factor indices for lazy tensor realizations).
    """

    def __init__(self, datum: CartanSatakeDatum, keys: Sequence[Hashable],
                 labels: Sequence[str], wt: Sequence[Weight],
                 eps: Sequence[Tuple[ExtInt, ...]], phi: Sequence[Tuple[ExtInt, ...]],
                 e: Sequence[Tuple[Optional[int], ...]], f: Sequence[Tuple[Optional[int], ...]],
                 name: str = ''):
        self.datum = datum
        self.keys = list(keys)
        self.labels = list(labels)
        self.wt = list(wt)
        self.eps = list(eps)
        self.phi = list(phi)
        self.e = list(e)
        self.f = list(f)
        self.name = name
        self.index = {k: b for b, k in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise CrystalError(f"duplicate element keys in crystal '{name}'")

    def __len__(self) -> int:
        return len(self.keys)

    def __repr__(self) -> str:
        return f"CrystalGraph({self.name!r}, {len(self)} elements)"

    @property
    def elements(self) -> range:
        return range(len(self.keys))

    def wt_i(self, b: int, i: int) -> int:
        return self.wt[b][i]

    def e_tilde(self, b: int, i: int) -> Optional[int]:
        return self.e[b][i]

    def f_tilde(self, b: int, i: int) -> Optional[int]:
        return self.f[b][i]

    def highest_elements(self) -> List[int]:
        return [b for b in self.elements if all(x == 0 for x in self.eps[b])]

    # ─── key-level protocol shared with TensorCrystal ───

    def key_stats(self, key: Hashable) -> Stats:
        b = self.index[key]
        return self.wt[b], self.eps[b], self.phi[b]

    def key_e(self, key: Hashable, i: int) -> Optional[Hashable]:
        t = self.e[self.index[key]][i]
        return None if t is None else self.keys[t]

    def key_f(self, key: Hashable, i: int) -> Optional[Hashable]:
        t = self.f[self.index[key]][i]
        return None if t is None else self.keys[t]

    def key_label(self, key: Hashable) -> str:
        return self.labels[self.index[key]]

    @classmethod
    def materialize(cls, ambient, keys: Sequence[Hashable], name: str = '') -> 'CrystalGraph':
        """
        Build an explicit crystal from a closed set of ambient keys.

        Raises:
            CrystalError: If an operator leaves the key set.
        """
        keys = list(keys)
        position = {k: b for b, k in enumerate(keys)}
        wt, eps, phi, e, f, labels = [], [], [], [], [], []
        for key in keys:
            w, ep, ph = ambient.key_stats(key)
            wt.append(tuple(w))
            eps.append(tuple(ep))
            phi.append(tuple(ph))
            labels.append(ambient.key_label(key))
            row_e, row_f = [], []
            for i in ambient.datum.indices:
                for op, row in ((ambient.key_e, row_e), (ambient.key_f, row_f)):
                    target = op(key, i)
                    if target is None:
                        row.append(None)
                    elif target in position:
                        row.append(position[target])
                    else:
                        raise CrystalError(f"operator at {ambient.key_label(key)} leaves the element set")
            e.append(tuple(row_e))
            f.append(tuple(row_f))
        return cls(ambient.datum, keys, labels, wt, eps, phi, e, f, name=name)


# ──────────────────────────────────────────────────────────────
# Lazy tensor products
# ──────────────────────────────────────────────────────────────

def _combine(datum: CartanSatakeDatum, left: Stats, right: Stats) -> Stats:
    wt1, eps1, phi1 = left
    wt2, eps2, phi2 = right
    eps, phi = [], []
    for i in datum.indices:
        eps.append(eps1[i] - wt2[i] if eps1[i] > phi2[i] else eps2[i])
        phi.append(phi2[i] + wt1[i] if eps1[i] < phi2[i] else phi1[i])
    return weight_add(wt1, wt2), tuple(eps), tuple(phi)


class TensorCrystal:
    """
    Lazy tensor product ((F_0 ⊗ F_1) ⊗ F_2) ⊗ ... of explicit crystals.

    Keys are tuples of factor element indices. Nothing is materialized, so
    single elements of very large products (such as B(N rho)) can be moved
    around with E/F at linear cost in the number of factors.
    """

    def __init__(self, datum: CartanSatakeDatum, factors: Sequence[CrystalGraph], name: str = ''):
        self.datum = datum
        self.factors = tuple(factors)
        self.name = name
        for fac in self.factors:
            if fac.datum != datum:
                raise CrystalError("tensor factors over different data")

    def _factor_stats(self, k: int, b: int) -> Stats:
        fac = self.factors[k]
        return fac.wt[b], fac.eps[b], fac.phi[b]

    def key_stats(self, key: Tuple[int, ...]) -> Stats:
        n = self.datum.rank
        if not self.factors:
            return (0,) * n, (0,) * n, (0,) * n
        stats = self._factor_stats(0, key[0])
        for k in range(1, len(self.factors)):
            stats = _combine(self.datum, stats, self._factor_stats(k, key[k]))
        return stats

    def _prefix_eps(self, key: Tuple[int, ...], i: int) -> List[ExtInt]:
        out = []
        cur = None
        for k, b in enumerate(key):
            fac = self.factors[k]
            if cur is None:
                cur = fac.eps[b][i]
            else:
                cur = cur - fac.wt[b][i] if cur > fac.phi[b][i] else fac.eps[b][i]
            out.append(cur)
        return out

    def _apply(self, key: Tuple[int, ...], i: int, raising: bool) -> Optional[Tuple[int, ...]]:
        if not self.factors:
            return None
        pre = self._prefix_eps(key, i)
        k = len(key) - 1
        while k > 0:
            phi_k = self.factors[k].phi[key[k]][i]
            if raising and not pre[k - 1] > phi_k:
                break
            if not raising and pre[k - 1] < phi_k:
                break
            k -= 1
        fac = self.factors[k]
        target = fac.e[key[k]][i] if raising else fac.f[key[k]][i]
        if target is None:
            return None
        return key[:k] + (target,) + key[k + 1:]

    def key_e(self, key: Tuple[int, ...], i: int) -> Optional[Tuple[int, ...]]:
        return self._apply(key, i, raising=True)

    def key_f(self, key: Tuple[int, ...], i: int) -> Optional[Tuple[int, ...]]:
        return self._apply(key, i, raising=False)

    def key_label(self, key: Tuple[int, ...]) -> str:
        if not key:
            return 'b_0'
        return '⊗'.join(self.factors[k].labels[b] for k, b in enumerate(key))

    def all_keys(self):
        return itertools.product(*(range(len(fac)) for fac in self.factors))


def tensor_crystals(B1: CrystalGraph, B2: CrystalGraph) -> CrystalGraph:
    """
    Explicit tensor product B1 ⊗ B2.

    Element b1 ⊗ b2 has index b1 * len(B2) + b2 and key (b1, b2).

    Raises:
        CrystalError: If the factors live over different data.
    """
    if B1.datum != B2.datum:
        raise CrystalError("datum mismatch in tensor_crystals")
    ambient = TensorCrystal(B1.datum, (B1, B2))
    keys = [(b1, b2) for b1 in B1.elements for b2 in B2.elements]
    out = CrystalGraph.materialize(ambient, keys, name=f"{B1.name}⊗{B2.name}")
    logger.debug(f"✓ Tensor {B1.name} ⊗ {B2.name}: {len(out)} elements")
    return out


# ──────────────────────────────────────────────────────────────
# Highest-weight components
# ──────────────────────────────────────────────────────────────

def highest_weight_component(ambient, seed: Hashable, cap: Optional[int] = None,
                             name: str = '') -> CrystalGraph:
    """
    Breadth-first closure of a highest-weight seed under all E_i and F_i.

    Args:
        ambient: CrystalGraph or TensorCrystal (key-level protocol).
        seed: Key with eps_i = 0 for every i.
        cap: Element cap (defaults to COMPONENT_CAP).

    Returns:
        Explicit component with the seed at index 0.

    Raises:
        CrystalError: If the seed is not highest weight.
        CapExceededError: If the closure grows beyond the cap.
    """
    cap = COMPONENT_CAP if cap is None else cap
    _, eps, _ = ambient.key_stats(seed)
    if any(x != 0 for x in eps):
        raise CrystalError(f"seed {ambient.key_label(seed)} is not highest weight (eps={list(eps)})")
    seen = {seed}
    order = [seed]
    queue = deque([seed])
    while queue:
        key = queue.popleft()
        for i in ambient.datum.indices:
            for target in (ambient.key_f(key, i), ambient.key_e(key, i)):
                if target is not None and target not in seen:
                    seen.add(target)
                    order.append(target)
                    queue.append(target)
                    if len(order) > cap:
                        logger.error(f"✗ Component of {ambient.key_label(seed)} exceeds cap {cap}")
                        raise CapExceededError(f"component exceeds cap {cap}")
    return CrystalGraph.materialize(ambient, order, name=name)


# ──────────────────────────────────────────────────────────────
# Families
# ──────────────────────────────────────────────────────────────

def _from_rows(datum, rows, name) -> CrystalGraph:
    keys = list(range(len(rows)))
    labels = [r['label'] for r in rows]
    return CrystalGraph(datum, keys, labels,
                        [r['wt'] for r in rows], [r['eps'] for r in rows], [r['phi'] for r in rows],
                        [r['e'] for r in rows], [r['f'] for r in rows], name=name)


def string_crystal(datum: CartanSatakeDatum, n: int, node: Optional[int] = None) -> CrystalGraph:
    """
    B(n) along a single node: b_0 -> b_1 -> ... -> b_n.

    Requires a_{j,node} = 0 for every other j, so that the other nodes act
    trivially.
    """
    node = datum.i_tau[0] if node is None else node
    if n < 0:
        raise CrystalError(f"B(n) needs n >= 0, got {n}")
    if node not in datum.indices:
        raise CrystalError(f"node {node} outside datum")
    if any(datum.a(j, node) != 0 for j in datum.indices if j != node):
        raise CrystalError(f"B(n) string at node {node} needs a_(j,{node}) = 0 for j ≠ {node}")
    rank = datum.rank
    rows = []
    for k in range(n + 1):
        wt = tuple(n - 2 * k if j == node else 0 for j in range(rank))
        eps = tuple(k if j == node else 0 for j in range(rank))
        phi = tuple(n - k if j == node else 0 for j in range(rank))
        e = tuple((k - 1 if k > 0 else None) if j == node else None for j in range(rank))
        f = tuple((k + 1 if k < n else None) if j == node else None for j in range(rank))
        rows.append({'label': f"b_{k}", 'wt': wt, 'eps': eps, 'phi': phi, 'e': e, 'f': f})
    return _from_rows(datum, rows, f"B({n})")


def t_lambda(datum: CartanSatakeDatum, lam: Weight) -> CrystalGraph:
    """The one-element crystal T_lambda with eps = phi = -inf."""
    if len(lam) != datum.rank:
        raise CrystalError(f"weight {lam} has wrong length")
    rank = datum.rank
    row = {'label': 't', 'wt': tuple(lam), 'eps': (NEG_INF,) * rank, 'phi': (NEG_INF,) * rank,
           'e': (None,) * rank, 'f': (None,) * rank}
    return _from_rows(datum, [row], f"T{tuple(lam)}")


def natural_crystal(datum: CartanSatakeDatum, component: Optional[Sequence[int]] = None) -> CrystalGraph:
    """
    Natural crystal of a type-A component: b_-1 -> b_0 -> ... along the path.

    Nodes outside the component act trivially.

    Raises:
        CrystalError: If the component is not of type A.
    """
    if component is None:
        comps = datum.components()
        if len(comps) != 1:
            raise CrystalError("natural crystal needs a connected datum or an explicit component")
        component = comps[0]
    path = datum.type_a_path(component)
    if path is None:
        raise CrystalError(f"component {list(component)} is not of type A")
    rank = datum.rank
    m = len(path)
    rows = []
    for j in range(m + 1):
        wt = [0] * rank
        eps = [0] * rank
        phi = [0] * rank
        e = [None] * rank
        f = [None] * rank
        if j < m:
            wt[path[j]] += 1
            phi[path[j]] = 1
            f[path[j]] = j + 1
        if j > 0:
            wt[path[j - 1]] -= 1
            eps[path[j - 1]] = 1
            e[path[j - 1]] = j - 1
        rows.append({'label': f"b_{j - 1}", 'wt': tuple(wt), 'eps': tuple(eps), 'phi': tuple(phi),
                     'e': tuple(e), 'f': tuple(f)})
    return _from_rows(datum, rows, 'B_natural')


@lru_cache(maxsize=None)
def fundamental_crystal(datum: CartanSatakeDatum, j: int) -> CrystalGraph:
    """
    B(varpi_j), found as a highest-weight component of a natural tensor power.

    Raises:
        CrystalError: If node j is not in a type-A component or no highest
                      weight element of weight varpi_j is found.
    """
    component = datum.component_of(j)
    nat = natural_crystal(datum, component)
    target = datum.fundamental(j)
    for power in range(1, FUNDAMENTAL_SEARCH_POWER + 1):
        ambient = TensorCrystal(datum, (nat,) * power)
        for key in ambient.all_keys():
            wt, eps, _ = ambient.key_stats(key)
            if wt == target and all(x == 0 for x in eps):
                logger.debug(f"✓ Fundamental crystal for node {j} in natural^{power}")
                return highest_weight_component(ambient, key, name=f"B(ϖ{j})")
    raise CrystalError(f"no fundamental crystal for node {j} within power {FUNDAMENTAL_SEARCH_POWER}")


def b_lambda_realization(datum: CartanSatakeDatum, lam: Weight) -> Tuple[TensorCrystal, Tuple[int, ...]]:
    """
    Lazy realization of B(lambda) inside ⊗_j B(varpi_j)^{⊗ lambda_j}.

    Returns:
        (ambient TensorCrystal, key of b_lambda).

    Raises:
        CrystalError: If lambda is not dominant.
    """
    if not datum.is_dominant(tuple(lam)):
        raise CrystalError(f"{list(lam)} is not dominant")
    factors = []
    for j in datum.indices:
        if lam[j] > 0:
            factors.extend([fundamental_crystal(datum, j)] * lam[j])
    ambient = TensorCrystal(datum, factors, name=f"B{tuple(lam)}")
    return ambient, (0,) * len(factors)


def b_lambda(datum: CartanSatakeDatum, lam: Weight, cap: Optional[int] = None) -> CrystalGraph:
    """Explicit B(lambda) with b_lambda at index 0."""
    ambient, seed = b_lambda_realization(datum, lam)
    out = highest_weight_component(ambient, seed, cap=cap, name=f"B{tuple(lam)}")
    logger.info(f"✓ Built B{tuple(lam)}: {len(out)} elements")
    return out


def make_crystal(family: str, datum: CartanSatakeDatum, params: Dict) -> CrystalGraph:
    """
    Dispatch to a built-in crystal family.

    Families:
        B_n_rank1 : params n, optional node
        T_lambda  : params weight
        natural_A : optional component
        B_lambda  : params hw (dominant weight)

    Raises:
        CrystalError: Unknown family or invalid parameters.
    """
    key = family.lower()
    if key in ('b_n_rank1', 'b_n', 'string'):
        return string_crystal(datum, int(params.get('n', 0)), params.get('node'))
    if key in ('t_lambda', 't'):
        return t_lambda(datum, tuple(params.get('weight', datum.zero_weight())))
    if key in ('natural_a', 'natural'):
        return natural_crystal(datum, params.get('component'))
    if key in ('b_lambda',):
        return b_lambda(datum, tuple(params['hw']), cap=params.get('cap'))
    raise CrystalError(f"unknown crystal family '{family}'")


CRYSTAL_FAMILIES = ('B_n_rank1', 'T_lambda', 'natural_A', 'B_lambda')


# ──────────────────────────────────────────────────────────────
# Checkers
# ──────────────────────────────────────────────────────────────

def check_crystal_axioms(B: CrystalGraph) -> CheckReport:
    """Check crystal axioms (1)-(4) and the partial-bijection property."""
    report = CheckReport(f"crystal axioms: {B.name}")
    datum = B.datum
    for b in B.elements:
        for i in datum.indices:
            report.checked += 1
            eps, phi = B.eps[b][i], B.phi[b][i]
            e, f = B.e[b][i], B.f[b][i]
            if phi == NEG_INF and (e is not None or f is not None):
                report.add('(1)', f"phi_{i}({B.labels[b]}) = -inf but an operator acts")
            expected = eps + B.wt[b][i] if is_finite(eps) else NEG_INF
            if not (is_finite(eps) or eps == NEG_INF) or phi != expected:
                report.add('(2)', f"phi_{i} ≠ eps_{i} + wt_{i} at {B.labels[b]}")
            if e is not None:
                if B.wt[e] != weight_add(B.wt[b], datum.alpha(i)):
                    report.add('(3)', f"wt(E_{i} {B.labels[b]}) ≠ wt + alpha_{i}")
                if not (is_finite(eps) and B.eps[e][i] == eps - 1):
                    report.add('(3)', f"eps_{i} does not drop by 1 along E_{i} at {B.labels[b]}")
                if B.f[e][i] != b:
                    report.add('(3)', f"F_{i} E_{i} {B.labels[b]} ≠ {B.labels[b]}")
            if f is not None:
                if B.wt[f] != weight_sub(B.wt[b], datum.alpha(i)):
                    report.add('(4)', f"wt(F_{i} {B.labels[b]}) ≠ wt - alpha_{i}")
                if not (is_finite(phi) and B.phi[f][i] == phi - 1):
                    report.add('(4)', f"phi_{i} does not drop by 1 along F_{i} at {B.labels[b]}")
                if B.e[f][i] != b:
                    report.add('(4)', f"E_{i} F_{i} {B.labels[b]} ≠ {B.labels[b]}")
    return report


def _string_length(B: CrystalGraph, b: int, i: int, ops) -> int:
    m = 0
    cur = ops[b][i]
    while cur is not None:
        m += 1
        cur = ops[cur][i]
    return m


def check_seminormal(B: CrystalGraph) -> CheckReport:
    report = CheckReport(f"seminormal: {B.name}")
    for b in B.elements:
        for i in B.datum.indices:
            report.checked += 1
            if B.eps[b][i] != _string_length(B, b, i, B.e):
                report.add('seminormal', f"eps_{i}({B.labels[b]}) ≠ E_{i}-string length")
            if B.phi[b][i] != _string_length(B, b, i, B.f):
                report.add('seminormal', f"phi_{i}({B.labels[b]}) ≠ F_{i}-string length")
    return report


def _diff(x: ExtInt, y: ExtInt) -> Optional[int]:
    """x - y for finite values, 0 for -inf vs -inf, None otherwise."""
    if is_finite(x) and is_finite(y):
        return x - y
    if x == NEG_INF and y == NEG_INF:
        return 0
    return None


def check_S_conditions(B: CrystalGraph, i: int, j: int) -> CheckReport:
    """
    Check (S1)-(S3)' for the ordered pairs (i, j) and (j, i), with
    consequence (1) always and consequences (2)-(4) only when a_ij = -1.

    Raises:
        CrystalError: If a_ij = a_ji ∈ {0, -1} fails.
    """
    datum = B.datum
    a = datum.a(i, j)
    if i == j or a != datum.a(j, i) or a not in (0, -1):
        raise CrystalError(f"S-conditions need a_ij = a_ji ∈ {{0, -1}}, got ({i}, {j})")
    report = CheckReport(f"S-conditions ({i},{j}): {B.name}")
    allowed = {0, -a}
    E, F, eps, phi = B.e, B.f, B.eps, B.phi
    for x, y in ((i, j), (j, i)):
        for b in B.elements:
            report.checked += 1
            lab = B.labels[b]
            ex, ey = E[b][x], E[b][y]
            fx, fy = F[b][x], F[b][y]
            # (S1)
            if ex is not None and _diff(eps[ex][y], eps[b][y]) not in allowed:
                report.add('(S1)', f"eps_{y}(E_{x} {lab}) - eps_{y}({lab}) ∉ {sorted(allowed)}")
            # (S2), (S3)
            eyx = E[ex][y] if ex is not None else None
            exy = E[ey][x] if ey is not None else None
            if eyx is not None and eps[ex][y] == eps[b][y]:
                if exy != eyx or phi[ey][x] != phi[b][x]:
                    report.add('(S2)', f"E_{x} E_{y} ≠ E_{y} E_{x} or phi_{x} moves at {lab}")
            if eyx is not None and exy is not None:
                if _diff(eps[ex][y], eps[b][y]) == 1 and _diff(eps[ey][x], eps[b][x]) == 1 and exy == eyx:
                    report.add('(S3)', f"E_{x} E_{y} = E_{y} E_{x} at {lab}")
            # (S2)', (S3)'
            fyx = F[fx][y] if fx is not None else None
            fxy = F[fy][x] if fy is not None else None
            if fyx is not None and phi[fx][y] == phi[b][y]:
                if fxy != fyx or eps[fy][x] != eps[b][x]:
                    report.add("(S2)'", f"F_{x} F_{y} ≠ F_{y} F_{x} or eps_{x} moves at {lab}")
            if fyx is not None and fxy is not None:
                if _diff(phi[fx][y], phi[b][y]) == 1 and _diff(phi[fy][x], phi[b][x]) == 1 and fxy == fyx:
                    report.add("(S3)'", f"F_{x} F_{y} = F_{y} F_{x} at {lab}")
            # consequences
            if fx is not None and _diff(phi[fx][y], phi[b][y]) not in allowed:
                report.add('consequence (1)', f"phi_{y}(F_{x} {lab}) - phi_{y}({lab}) ∉ {sorted(allowed)}")
            if a != -1:
                continue
            if fyx is not None and _diff(phi[fx][y], phi[b][y]) == 1:
                if _diff(phi[fyx][x], phi[b][x]) != -1:
                    report.add('consequence (2)', f"phi_{x}(F_{y} F_{x} {lab}) ≠ phi_{x}({lab}) - 1")
            if exy is not None and _diff(phi[ey][x], phi[b][x]) == 0:
                if _diff(phi[exy][y], phi[b][y]) != 0:
                    report.add('consequence (3)', f"phi_{y}(E_{x} E_{y} {lab}) ≠ phi_{y}({lab})")
            if fx is not None and ey is not None:
                left = _diff(phi[ey][x], phi[b][x]) == -1
                right = _diff(phi[fx][y], phi[b][y]) == 0
                if left != right:
                    report.add('consequence (4)', f"phi_{x}(E_{y} b) = phi_{x}(b) - 1 ⇎ phi_{y}(F_{x} b) = phi_{y}(b) at {lab}")
    return report


def check_S_conditions_for_tau(B: CrystalGraph) -> CheckReport:
    """S-conditions for every pair (i, tau(i)) with a_{i,tau(i)} ≠ 2."""
    report = CheckReport(f"S-conditions for τ-pairs: {B.name}")
    datum = B.datum
    for i in datum.i_tau:
        if datum.a_tau(i) != 2:
            report.extend(check_S_conditions(B, i, datum.tau[i]))
    return report


# ──────────────────────────────────────────────────────────────
# Morphisms
# ──────────────────────────────────────────────────────────────

@dataclass
class CrystalMorphism:
    """Map source elements to target elements (None stands for 0)."""
    source: CrystalGraph
    target: CrystalGraph
    mapping: List[Optional[int]]


def identity_morphism(B: CrystalGraph) -> CrystalMorphism:
    return CrystalMorphism(B, B, list(B.elements))


def check_crystal_morphism(m: CrystalMorphism) -> Tuple[str, Optional[str]]:
    """
    Classify a crystal morphism.

    Returns:
        (classification, witness) with classification one of
        'not-a-morphism', 'morphism', 'strict', 'isomorphism'.
    """
    src, tgt, mu = m.source, m.target, m.mapping
    if src.datum != tgt.datum:
        return 'not-a-morphism', 'datum mismatch'
    if len(mu) != len(src):
        return 'not-a-morphism', 'mapping has wrong length'
    for b in src.elements:
        t = mu[b]
        if t is None:
            continue
        if src.wt[b] != tgt.wt[t] or src.eps[b] != tgt.eps[t] or src.phi[b] != tgt.phi[t]:
            return 'not-a-morphism', f"(1) fails at {src.labels[b]} -> {tgt.labels[t]}"
        for i in src.datum.indices:
            for ops_s, ops_t, tag in ((src.e, tgt.e, '(2)'), (src.f, tgt.f, '(3)')):
                nb = ops_s[b][i]
                if nb is not None and mu[nb] is not None and mu[nb] != ops_t[t][i]:
                    return 'not-a-morphism', f"{tag} fails at {src.labels[b]}, i={i}"

    def image(b):
        return None if b is None else mu[b]

    def act(ops, t, i):
        return None if t is None else ops[t][i]

    strict_witness = None
    for b in src.elements:
        for i in src.datum.indices:
            if image(src.e[b][i]) != act(tgt.e, mu[b], i) or image(src.f[b][i]) != act(tgt.f, mu[b], i):
                strict_witness = f"not strict at {src.labels[b]}, i={i}"
                break
        if strict_witness:
            break
    if strict_witness:
        return 'morphism', strict_witness
    if None not in mu and len(set(mu)) == len(tgt) == len(src):
        return 'isomorphism', None
    return 'strict', 'not bijective'


def check_crystal_associativity(B1: CrystalGraph, B2: CrystalGraph, B3: CrystalGraph) -> Tuple[bool, Optional[str]]:
    """The canonical re-bracketing (B1⊗B2)⊗B3 -> B1⊗(B2⊗B3) is an isomorphism."""
    B12 = tensor_crystals(B1, B2)
    left = tensor_crystals(B12, B3)
    B23 = tensor_crystals(B2, B3)
    right = tensor_crystals(B1, B23)
    mapping = []
    for b in left.elements:
        b12, b3 = left.keys[b]
        b1, b2 = B12.keys[b12]
        mapping.append(right.index[(b1, B23.index[(b2, b3)])])
    kind, witness = check_crystal_morphism(CrystalMorphism(left, right, mapping))
    return kind == 'isomorphism', witness
