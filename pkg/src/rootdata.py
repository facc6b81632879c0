# src/rootdata.py — Cartan/Satake Data, Weights and the X^ı Projection
"""
Root datum layer of the engine.

Responsibilities:
    1. CartanSatakeDatum: generalized Cartan matrix, symmetrizers, the
       involution tau and the integer parameters s_i
    2. Validation of a raw datum (first violated invariant is reported)
    3. Weights as pairing coordinates (<h_i, lambda>)_i
    4. IWeight: elements of X^ı = X / {lambda + tau(lambda)}
    5. Dynkin components and type-A path orders (used to realize B(lambda))

Indices are positions 0..n-1; optional labels are only for display.
"""

import json
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

import sys
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import DATUM_DIR

logger = logging.getLogger(__name__)

Weight = Tuple[int, ...]


class DatumError(ValueError):
    """A Cartan/Satake datum violates one of its invariants."""


# ──────────────────────────────────────────────────────────────
# IWeight
# ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class IWeight:
    """
    Element of X^ı, one entry per tau-orbit representative.

    Split orbits carry the signed integer <h_i - h_tau(i), zeta>; fixed
    points carry a parity bit. `parity_mask[r]` is True on fixed points.
    """
    values: Tuple[int, ...]
    parity_mask: Tuple[bool, ...]

    def __post_init__(self):
        if len(self.values) != len(self.parity_mask):
            raise ValueError("IWeight values and parity mask differ in length")
        reduced = tuple(v % 2 if m else v for v, m in zip(self.values, self.parity_mask))
        object.__setattr__(self, 'values', reduced)

    def __add__(self, other: 'IWeight') -> 'IWeight':
        self._check(other)
        return IWeight(tuple(a + b for a, b in zip(self.values, other.values)), self.parity_mask)

    def __sub__(self, other: 'IWeight') -> 'IWeight':
        self._check(other)
        return IWeight(tuple(a - b for a, b in zip(self.values, other.values)), self.parity_mask)

    def __neg__(self) -> 'IWeight':
        return IWeight(tuple(-a for a in self.values), self.parity_mask)

    def _check(self, other: 'IWeight'):
        if self.parity_mask != other.parity_mask:
            raise ValueError("IWeights from different data")

    def to_json(self) -> List[int]:
        return list(self.values)

    def __str__(self) -> str:
        return '(' + ', '.join(
            f"{v}̄" if m else str(v) for v, m in zip(self.values, self.parity_mask)
        ) + ')'


# ──────────────────────────────────────────────────────────────
# CartanSatakeDatum
# ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CartanSatakeDatum:
    """
    Quasi-split Satake datum.

    gcm[i][j] = a_{i,j}; alpha_i has coordinate vector (a_{j,i})_j.
    """
    gcm: Tuple[Tuple[int, ...], ...]
    d: Tuple[int, ...]
    tau: Tuple[int, ...]
    s: Tuple[int, ...]
    i_tau: Tuple[int, ...]
    labels: Tuple[str, ...] = ()
    name: str = ''

    @property
    def rank(self) -> int:
        return len(self.gcm)

    @property
    def indices(self) -> range:
        return range(len(self.gcm))

    def a(self, i: int, j: int) -> int:
        return self.gcm[i][j]

    def a_tau(self, i: int) -> int:
        """a_{i, tau(i)} in {2, 0, -1}."""
        return self.gcm[i][self.tau[i]]

    def s_eff(self, i: int) -> int:
        """s_i, with the convention s_i = 0 when a_{i,tau(i)} = 0."""
        return 0 if self.a_tau(i) == 0 else self.s[i]

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def alpha(self, i: int) -> Weight:
        return tuple(self.gcm[j][i] for j in self.indices)

    def in_i_tau(self, i: int) -> bool:
        return i in self.i_tau

    def orbit_rep(self, i: int) -> int:
        return i if i in self.i_tau else self.tau[i]

    def rep_position(self, i: int) -> int:
        return self.i_tau.index(self.orbit_rep(i))

    # ─── weights ───

    def zero_weight(self) -> Weight:
        return (0,) * self.rank

    def fundamental(self, j: int) -> Weight:
        return tuple(1 if k == j else 0 for k in self.indices)

    def rho(self) -> Weight:
        return (1,) * self.rank

    def tau_weight(self, lam: Weight) -> Weight:
        """tau(lambda): <h_i, tau(lambda)> = <h_tau(i), lambda>."""
        return tuple(lam[self.tau[i]] for i in self.indices)

    def is_dominant(self, lam: Weight) -> bool:
        return len(lam) == self.rank and all(c >= 0 for c in lam)

    # ─── X^ı ───

    def iweight_mask(self) -> Tuple[bool, ...]:
        return tuple(self.tau[r] == r for r in self.i_tau)

    def zero_iweight(self) -> IWeight:
        return IWeight((0,) * len(self.i_tau), self.iweight_mask())

    def make_iweight(self, values: Sequence[int]) -> IWeight:
        if len(values) != len(self.i_tau):
            raise DatumError(f"IWeight needs {len(self.i_tau)} entries, got {len(values)}")
        return IWeight(tuple(int(v) for v in values), self.iweight_mask())

    def iweight_at(self, zeta: IWeight, i: int) -> int:
        """
        wt^ı_i: the parity bit at a fixed point, else <h_i - h_tau(i), zeta>.
        """
        pos = self.rep_position(i)
        value = zeta.values[pos]
        if self.tau[i] == i or i in self.i_tau:
            return value
        return -value

    def alpha_bar(self, i: int) -> IWeight:
        return project_weight(self.alpha(i), self)

    # ─── Dynkin structure ───

    def dynkin_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.indices)
        for i in self.indices:
            for j in self.indices:
                if i < j and (self.gcm[i][j] != 0 or self.gcm[j][i] != 0):
                    graph.add_edge(i, j)
        return graph

    def components(self) -> List[Tuple[int, ...]]:
        comps = [tuple(sorted(c)) for c in nx.connected_components(self.dynkin_graph())]
        return sorted(comps)

    def component_of(self, j: int) -> Tuple[int, ...]:
        for comp in self.components():
            if j in comp:
                return comp
        raise DatumError(f"index {j} outside datum")

    def type_a_path(self, component: Sequence[int]) -> Optional[List[int]]:
        """
        Path order of a type-A component, or None if it is not of type A.

        The path starts at the endpoint with the smaller index.
        """
        comp = list(component)
        sub = self.dynkin_graph().subgraph(comp)
        for i in comp:
            for j in comp:
                if i != j and (self.gcm[i][j], self.gcm[j][i]) not in ((0, 0), (-1, -1)):
                    return None
        if len(comp) == 1:
            return comp
        if not nx.is_tree(sub) or max(dict(sub.degree()).values()) > 2:
            return None
        start = min(v for v, deg in sub.degree() if deg == 1)
        return list(nx.dfs_preorder_nodes(sub, start))


# ──────────────────────────────────────────────────────────────
# Validation
# ──────────────────────────────────────────────────────────────

def validate_datum(raw: Union[Dict, CartanSatakeDatum]) -> CartanSatakeDatum:
    """
    Validate a raw datum and fill in defaults.

    Args:
        raw: Either a JSON-style dict with keys gcm, d, tau, s (and
             optionally i_tau, labels, name) or an existing datum.

    Returns:
        The validated CartanSatakeDatum; i_tau defaults to the smallest
        index of each tau-orbit.

    Raises:
        DatumError: On the first violated invariant, naming the indices.
    """
    if isinstance(raw, CartanSatakeDatum):
        raw = {
            'gcm': raw.gcm, 'd': raw.d, 'tau': raw.tau, 's': raw.s,
            'i_tau': raw.i_tau, 'labels': raw.labels, 'name': raw.name,
        }
    try:
        gcm = tuple(tuple(int(x) for x in row) for row in raw['gcm'])
        n = len(gcm)
        d = tuple(int(x) for x in raw.get('d', [1] * n))
        tau = tuple(int(x) for x in raw.get('tau', list(range(n))))
        s = tuple(int(x) for x in raw.get('s', [0] * n))
    except (KeyError, TypeError) as e:
        raise DatumError(f"Malformed datum: {e}")

    if n == 0:
        raise DatumError("empty index set")
    if any(len(row) != n for row in gcm):
        raise DatumError("gcm is not square")
    for name, vec in (('d', d), ('tau', tau), ('s', s)):
        if len(vec) != n:
            raise DatumError(f"{name} has length {len(vec)}, expected {n}")

    for i in range(n):
        if gcm[i][i] != 2:
            raise DatumError(f"a_ii ≠ 2 at i={i}")
        for j in range(n):
            if i != j and gcm[i][j] > 0:
                raise DatumError(f"a_ij > 0 at (i, j)=({i}, {j})")
            if i != j and (gcm[i][j] == 0) != (gcm[j][i] == 0):
                raise DatumError(f"a_ij = 0 but a_ji ≠ 0 at (i, j)=({i}, {j})")
    if any(x <= 0 for x in d):
        raise DatumError(f"symmetrizers must be positive, got {list(d)}")
    sym = np.diag(np.array(d, dtype=np.int64)) @ np.array(gcm, dtype=np.int64)
    if not np.array_equal(sym, sym.T):
        i, j = (int(v) for v in np.argwhere(sym != sym.T)[0])
        raise DatumError(f"d_i a_ij ≠ d_j a_ji at (i, j)=({i}, {j})")

    if sorted(tau) != list(range(n)):
        raise DatumError(f"tau is not a permutation: {list(tau)}")
    for i in range(n):
        if tau[tau[i]] != i:
            raise DatumError(f"τ² ≠ id at i={i}")
        for j in range(n):
            if gcm[tau[i]][tau[j]] != gcm[i][j]:
                raise DatumError(f"a_(τi,τj) ≠ a_ij at (i, j)=({i}, {j})")

    for i in range(n):
        a = gcm[i][tau[i]]
        if a not in (2, 0, -1):
            raise DatumError(f"a_(i,τ(i)) = {a} ∉ {{2, 0, -1}} at i={i}")
        if a == 0 and s[i] != 0:
            raise DatumError(f"s_i ≠ 0 with a_(i,τ(i)) = 0 at i={i}")
        if a == -1 and s[i] + s[tau[i]] != 1:
            raise DatumError(f"s_i + s_{{τ(i)}} ≠ 1 at i={i}, τ(i)={tau[i]} (s={s[i]}, {s[tau[i]]})")

    if raw.get('i_tau') is not None and len(raw.get('i_tau')) > 0:
        i_tau = tuple(int(x) for x in raw['i_tau'])
        orbits = {min(i, tau[i]) for i in range(n)}
        seen = [min(i, tau[i]) for i in i_tau]
        if sorted(seen) != sorted(orbits) or len(set(seen)) != len(seen):
            raise DatumError(f"i_tau must hold exactly one index per τ-orbit, got {list(i_tau)}")
        i_tau = tuple(sorted(i_tau))
    else:
        i_tau = tuple(sorted({min(i, tau[i]) for i in range(n)}))

    labels = tuple(str(x) for x in raw.get('labels') or ())
    if labels and len(labels) != n:
        raise DatumError(f"labels has length {len(labels)}, expected {n}")

    datum = CartanSatakeDatum(gcm=gcm, d=d, tau=tau, s=s, i_tau=i_tau,
                              labels=labels, name=str(raw.get('name', '')))
    logger.debug(f"✓ Datum '{datum.name}' valid (rank {n}, i_tau={list(i_tau)})")
    return datum


def load_datum(path_or_name: str) -> CartanSatakeDatum:
    """
    Load and validate a datum from a JSON file.

    A bare name such as 'a2_flip' is looked up in the bundled data directory.

    Raises:
        DatumError: If the file cannot be read or the datum is invalid.
    """
    path = path_or_name
    if not os.path.exists(path):
        candidate = os.path.join(DATUM_DIR, f"{path_or_name}.json")
        if os.path.exists(candidate):
            path = candidate
        else:
            raise DatumError(f"Datum file not found: {path_or_name}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"✗ Could not read datum {path}: {e}")
        raise DatumError(f"Could not read datum {path}: {e}")
    raw.setdefault('name', os.path.splitext(os.path.basename(path))[0])
    return validate_datum(raw)


def bundled_datums() -> List[str]:
    if not os.path.isdir(DATUM_DIR):
        return []
    return sorted(os.path.splitext(f)[0] for f in os.listdir(DATUM_DIR) if f.endswith('.json'))


def datum_to_json(datum: CartanSatakeDatum) -> Dict:
    return {
        'name': datum.name,
        'gcm': [list(row) for row in datum.gcm],
        'd': list(datum.d),
        'tau': list(datum.tau),
        's': list(datum.s),
        'i_tau': list(datum.i_tau),
        'labels': list(datum.labels),
    }


# ──────────────────────────────────────────────────────────────
# Weight arithmetic and projection
# ──────────────────────────────────────────────────────────────

def weight_add(lam: Weight, mu: Weight) -> Weight:
    return tuple(a + b for a, b in zip(lam, mu))


def weight_sub(lam: Weight, mu: Weight) -> Weight:
    return tuple(a - b for a, b in zip(lam, mu))


def weight_scale(c: int, lam: Weight) -> Weight:
    return tuple(c * a for a in lam)


def project_weight(lam: Weight, datum: CartanSatakeDatum) -> IWeight:
    """
    Image of lambda in X^ı.

    Returns:
        IWeight with <h_i - h_tau(i), lambda> on split orbits and the parity
        of <h_i, lambda> on fixed points.
    """
    if len(lam) != datum.rank:
        raise DatumError(f"weight {lam} has wrong length for rank {datum.rank}")
    values = tuple(
        lam[r] % 2 if datum.tau[r] == r else lam[r] - lam[datum.tau[r]]
        for r in datum.i_tau
    )
    return IWeight(values, datum.iweight_mask())
