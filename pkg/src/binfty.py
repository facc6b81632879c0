# src/binfty.py — B(infinity) as Stabilized F-Words
"""
Elements of B(infinity) represented by words (i_1, ..., i_r), meaning
F_{i_r} ... F_{i_1} b_infinity.

Responsibilities:
    1. binfty_eval: pi_lambda of a word, inside an explicit B(lambda)
    2. binfty_stats: stable (wt, eps, phi) from an evaluation in B(N rho)
    3. in_binfty_lambda / binfty_equal / b_lambda_mu_member
    4. canonical_word: greedy E-reduction giving a normal form per element;
       binfty_raise applies E_i in that normal form
    5. covering_words: one shortest word per element of B(lambda)
    6. iota_lambda: B(lambda) -> T_{lambda - N rho} ⊗ B(N rho) truncation

Evaluations in B(N rho) are lazy (TensorCrystal), so only the path of the
word is ever touched.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.crystal import (
    CrystalError, CrystalGraph, CrystalMorphism, b_lambda, b_lambda_realization,
    t_lambda, tensor_crystals,
)
from src.rootdata import CartanSatakeDatum, Weight, weight_scale, weight_sub

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


class StabilizationError(CrystalError):
    """Statistics at N and N+1 disagree: the stabilization bound was too small."""


@dataclass(frozen=True)
class BInftyElement:
    """A word plus its stable statistics in B(infinity)."""
    word: Word
    wt: Weight
    eps: Tuple[int, ...]
    phi: Tuple[int, ...]

    def to_json(self) -> List[int]:
        return list(self.word)


# ──────────────────────────────────────────────────────────────
# Explicit B(lambda) cache
# ──────────────────────────────────────────────────────────────

@lru_cache(maxsize=64)
def cached_b_lambda(datum: CartanSatakeDatum, lam: Weight) -> CrystalGraph:
    return b_lambda(datum, tuple(lam))


def _check_word(datum: CartanSatakeDatum, word: Sequence[int]) -> Word:
    word = tuple(int(i) for i in word)
    for i in word:
        if i not in datum.indices:
            raise CrystalError(f"word letter {i} outside index set")
    return word


def binfty_eval(datum: CartanSatakeDatum, word: Sequence[int], lam: Weight) -> Optional[int]:
    """
    pi_lambda(word) as an element index of the explicit B(lambda).

    Returns:
        Index into cached_b_lambda(datum, lam), or None when a step dies.

    Raises:
        CrystalError: If lambda is not dominant.
    """
    word = _check_word(datum, word)
    B = cached_b_lambda(datum, tuple(lam))
    b = 0
    for i in word:
        b = B.f[b][i]
        if b is None:
            return None
    return b


# ──────────────────────────────────────────────────────────────
# Stable statistics
# ──────────────────────────────────────────────────────────────

def stabilization_bound(datum: CartanSatakeDatum, word: Sequence[int]) -> int:
    a_max = max([abs(datum.a(i, j)) for i in datum.indices for j in datum.indices if i != j] or [0])
    return (1 + a_max) * (len(word) + 1)


def _eval_lazy(datum: CartanSatakeDatum, word: Word, n: int):
    lam = weight_scale(n, datum.rho())
    ambient, key = b_lambda_realization(datum, lam)
    for i in word:
        key = ambient.key_f(key, i)
        if key is None:
            raise StabilizationError(f"word {list(word)} dies in B({n}ρ)")
    return ambient, key, lam


def _stats_at(datum: CartanSatakeDatum, word: Word, n: int):
    ambient, key, lam = _eval_lazy(datum, word, n)
    wt, eps, phi = ambient.key_stats(key)
    return weight_sub(wt, lam), tuple(eps), tuple(p - l for p, l in zip(phi, lam))


def binfty_stats(datum: CartanSatakeDatum, word: Sequence[int]) -> BInftyElement:
    """
    Stable (wt, eps, phi) of a word.

    Raises:
        StabilizationError: If the evaluations at N and N+1 disagree.
    """
    word = _check_word(datum, word)
    n = stabilization_bound(datum, word)
    first = _stats_at(datum, word, n)
    second = _stats_at(datum, word, n + 1)
    if first != second:
        logger.error(f"✗ Word {list(word)} unstable at N={n}: {first} vs {second}")
        raise StabilizationError(f"word {list(word)} unstable at N={n}")
    wt, eps, phi = first
    return BInftyElement(word, wt, eps, phi)


def _reduce(datum: CartanSatakeDatum, ambient, key) -> Word:
    steps = []
    while True:
        _, eps, _ = ambient.key_stats(key)
        raising = [i for i in datum.indices if eps[i] > 0]
        if not raising:
            break
        i = raising[0]
        key = ambient.key_e(key, i)
        steps.append(i)
    return tuple(reversed(steps))


def canonical_word(datum: CartanSatakeDatum, word: Sequence[int], extra: int = 0) -> Word:
    """
    Normal form of a word: reduce to b_infinity by always raising along the
    smallest i with eps_i > 0, then read the steps backwards.

    Two words give the same element of B(infinity) iff their canonical
    words agree.
    """
    word = _check_word(datum, word)
    n = stabilization_bound(datum, word) + extra
    ambient, key, _ = _eval_lazy(datum, word, n)
    return _reduce(datum, ambient, key)


def binfty_raise(datum: CartanSatakeDatum, word: Sequence[int], i: int) -> Optional[Word]:
    """Canonical word of E_i b, or None when eps_i(b) = 0."""
    word = _check_word(datum, word)
    ambient, key, _ = _eval_lazy(datum, word, stabilization_bound(datum, word))
    _, eps, _ = ambient.key_stats(key)
    if eps[i] <= 0:
        return None
    return _reduce(datum, ambient, ambient.key_e(key, i))


def binfty_equal(datum: CartanSatakeDatum, w1: Sequence[int], w2: Sequence[int]) -> bool:
    """
    Equality in B(infinity): equal evaluations in B(N rho) at N and N+1.

    Raises:
        StabilizationError: If the two evaluations disagree with each other.
    """
    w1 = _check_word(datum, w1)
    w2 = _check_word(datum, w2)
    if len(w1) != len(w2):
        return False
    n = max(stabilization_bound(datum, w1), stabilization_bound(datum, w2))
    verdicts = []
    for m in (n, n + 1):
        _, k1, _ = _eval_lazy(datum, w1, m)
        _, k2, _ = _eval_lazy(datum, w2, m)
        verdicts.append(k1 == k2)
    if verdicts[0] != verdicts[1]:
        raise StabilizationError(f"equality of {list(w1)} and {list(w2)} unstable at N={n}")
    return verdicts[0]


# ──────────────────────────────────────────────────────────────
# B(infinity; lambda) and B(lambda; mu)
# ──────────────────────────────────────────────────────────────

def in_binfty_lambda(datum: CartanSatakeDatum, word: Sequence[int], lam: Weight) -> bool:
    return binfty_eval(datum, word, lam) is not None


def b_lambda_mu_member(datum: CartanSatakeDatum, word: Sequence[int], lam: Weight, mu: Weight) -> Optional[int]:
    """
    pi_lambda(word) if the word lies in B(infinity; mu), else None.

    Raises:
        CrystalError: If <h_i, mu> <= <h_i, lambda> fails for some i.
    """
    if len(mu) != len(lam) or any(m > l for m, l in zip(mu, lam)):
        raise CrystalError(f"B(λ;μ) needs μ ≤ λ coordinatewise, got λ={list(lam)}, μ={list(mu)}")
    if binfty_eval(datum, word, mu) is None:
        return None
    return binfty_eval(datum, word, lam)


def b_lambda_mu(datum: CartanSatakeDatum, lam: Weight, mu: Weight) -> List[int]:
    """Element indices of B(lambda; mu) inside B(lambda)."""
    B = cached_b_lambda(datum, tuple(lam))
    words = covering_words(B)
    return sorted(b for b in B.elements if b_lambda_mu_member(datum, words[b], lam, mu) is not None)


# ──────────────────────────────────────────────────────────────
# Words
# ──────────────────────────────────────────────────────────────

def covering_words(B: CrystalGraph, seed: int = 0) -> List[Word]:
    """
    One shortest F-word per element reachable from the seed (breadth first,
    indices ascending).

    Raises:
        CrystalError: If some element is not reached.
    """
    words: List[Optional[Word]] = [None] * len(B)
    words[seed] = ()
    queue = deque([seed])
    while queue:
        b = queue.popleft()
        for i in B.datum.indices:
            t = B.f[b][i]
            if t is not None and words[t] is None:
                words[t] = words[b] + (i,)
                queue.append(t)
    missing = [B.labels[b] for b, w in enumerate(words) if w is None]
    if missing:
        raise CrystalError(f"elements not reached by F-words: {missing[:5]}")
    return words


def all_covering_words(B: CrystalGraph, max_length: int) -> Dict[int, List[Word]]:
    """Every F-word of length ≤ max_length from b_lambda, grouped by element."""
    out: Dict[int, List[Word]] = {0: [()]}
    frontier = [((), 0)]
    for _ in range(max_length):
        nxt = []
        for word, b in frontier:
            for i in B.datum.indices:
                t = B.f[b][i]
                if t is not None:
                    w = word + (i,)
                    out.setdefault(t, []).append(w)
                    nxt.append((w, t))
        frontier = nxt
    return out


def enumerate_words(datum: CartanSatakeDatum, max_length: int) -> Iterator[Word]:
    for r in range(max_length + 1):
        yield from itertools.product(datum.indices, repeat=r)


def distinct_binfty_words(datum: CartanSatakeDatum, max_length: int) -> List[Word]:
    """Canonical words of all elements of B(infinity) of depth ≤ max_length."""
    seen = set()
    for word in enumerate_words(datum, max_length):
        seen.add(canonical_word(datum, word))
    return sorted(seen, key=lambda w: (len(w), w))


# ──────────────────────────────────────────────────────────────
# iota_lambda
# ──────────────────────────────────────────────────────────────

def iota_lambda(datum: CartanSatakeDatum, lam: Weight, n: Optional[int] = None) -> CrystalMorphism:
    """
    B(lambda) -> T_{lambda - N rho} ⊗ B(N rho), b_lambda ↦ t ⊗ b_{N rho}.

    A morphism but not a strict one: F_i b_lambda may vanish while the
    image still moves.
    """
    source = cached_b_lambda(datum, tuple(lam))
    words = covering_words(source)
    if n is None:
        a_max = max([abs(datum.a(i, j)) for i in datum.indices for j in datum.indices if i != j] or [0])
        n = max(lam) + (1 + a_max) * (max(len(w) for w in words) + 1)
    big = weight_scale(n, datum.rho())
    target_b = cached_b_lambda(datum, big)
    target = tensor_crystals(t_lambda(datum, weight_sub(tuple(lam), big)), target_b)
    mapping = []
    for w in words:
        b = binfty_eval(datum, w, big)
        mapping.append(target.index[(0, b)])
    return CrystalMorphism(source, target, mapping)
