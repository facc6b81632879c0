# src/projective.py — The Projective System {B(lambda)^sigma} and its Limit
"""
Combinatorial projective system of ıcrystals.

Responsibilities:
    1. compute_sigma: the fixed dominant weight sigma of the datum
    2. b_lambda_sigma: B(lambda)^sigma = B(0)^sigma ⊗ B(lambda)
    3. gamma_nu / rho_lambda / rho_section / pi_i_lambda_nu: the
       morphisms of the system, built from B(infinity)-words
    4. check_coherence / check_highest_weight_characterization
    5. limit_action / limit_beta: B_i and beta_i on T_zeta ⊗ B(infinity),
       evaluated along lambda, lambda + nu + tau(nu), ... until stable
    6. check_diagonal_formulas / check_t_additivity

Morphism columns are keyed by target element index. Elements of
B(lambda)^sigma have key (0, b) and index b.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import MAX_WORD_LENGTH, STABILIZATION_DEPTH

from src.binfty import (
    Word, all_covering_words, binfty_eval, binfty_raise, binfty_stats, cached_b_lambda,
    canonical_word, covering_words,
)
from src.crystal import CheckReport, t_lambda
from src.extint import ExtInt, ext_max
from src.icrystal import (
    ICrystalGraph, ICrystalMorphism, MorphismClassification, Row, check_icrystal_morphism, t_zeta,
)
from src.itensor import compare_under, induce_icrystal, tensor_icrystal_crystal
from src.rootdata import (
    CartanSatakeDatum, IWeight, Weight, project_weight, weight_add,
)
from src.sqrt2 import ONE, Sqrt2Scalar

logger = logging.getLogger(__name__)

SigmaWeight = Weight


class ProjectiveError(ValueError):
    """Invalid weight, inconsistent word images, or no stabilization."""


# ──────────────────────────────────────────────────────────────
# sigma and B(lambda)^sigma
# ──────────────────────────────────────────────────────────────

def compute_sigma(datum: CartanSatakeDatum) -> SigmaWeight:
    """
    <h_i, sigma> = |s_i| (a = 2), 0 (a = 0), and for a = -1
    max(s_i, 0) on I_tau, max(-s_tau(i), 0) off it.
    """
    out = []
    for i in datum.indices:
        a = datum.a_tau(i)
        if a == 2:
            out.append(abs(datum.s[i]))
        elif a == -1:
            out.append(max(datum.s[i], 0) if datum.in_i_tau(i) else max(-datum.s[datum.tau[i]], 0))
        else:
            out.append(0)
    return tuple(out)


def sigma_bar(datum: CartanSatakeDatum) -> IWeight:
    return project_weight(compute_sigma(datum), datum)


def chain_step(datum: CartanSatakeDatum, nu: Optional[Weight] = None) -> Weight:
    """nu + tau(nu), with nu = rho by default."""
    nu = datum.rho() if nu is None else tuple(nu)
    return weight_add(nu, datum.tau_weight(nu))


def _require_dominant(datum: CartanSatakeDatum, lam: Sequence[int], what: str) -> Weight:
    lam = tuple(int(x) for x in lam)
    if not datum.is_dominant(lam):
        raise ProjectiveError(f"{what} = {list(lam)} is not dominant")
    return lam


def b0_sigma(datum: CartanSatakeDatum) -> ICrystalGraph:
    """One element with wt^ı = sigma-bar, beta_i = 0 and B_i = 0."""
    rank = datum.rank
    return ICrystalGraph(datum, [0], ['b0σ'], [sigma_bar(datum)], [(0,) * rank],
                         [[{}] for _ in datum.indices], name='B(0)σ')


@lru_cache(maxsize=64)
def b_lambda_sigma(datum: CartanSatakeDatum, lam: Weight) -> ICrystalGraph:
    lam = _require_dominant(datum, lam, 'lambda')
    out = tensor_icrystal_crystal(b0_sigma(datum), cached_b_lambda(datum, lam), name=f"B{lam}σ")
    out.labels = [f"{label}σ" for label in cached_b_lambda(datum, lam).labels]
    return out


@lru_cache(maxsize=64)
def induced_b_lambda(datum: CartanSatakeDatum, lam: Weight) -> ICrystalGraph:
    """B(lambda) with its ıcrystal structure from the trivial ıcrystal."""
    return induce_icrystal(cached_b_lambda(datum, _require_dominant(datum, lam, 'lambda')))


def sigma_isomorphism(datum: CartanSatakeDatum, lam: Weight) -> ICrystalMorphism:
    """B(lambda)^sigma -> T_sigma-bar ⊗ B(lambda), b^sigma ↦ t ⊗ b."""
    source = b_lambda_sigma(datum, tuple(lam))
    target = tensor_icrystal_crystal(t_zeta(datum, sigma_bar(datum)), cached_b_lambda(datum, tuple(lam)))
    return ICrystalMorphism(source, target, [{b: ONE} for b in source.elements], name='σ-shift')


# ──────────────────────────────────────────────────────────────
# Morphisms from words
# ──────────────────────────────────────────────────────────────

def _word_images(datum: CartanSatakeDatum, source_lam: Weight, target_lam: Weight,
                 max_length: int = MAX_WORD_LENGTH) -> List[Optional[int]]:
    """
    pi_target(b) for each pi_source(b) in B(source_lam), read through every
    F-word of length ≤ max_length (the shortest word beyond that).

    Raises:
        ProjectiveError: If two words for one element disagree.
    """
    B = cached_b_lambda(datum, source_lam)
    shortest = covering_words(B)
    every = all_covering_words(B, max_length)
    out = []
    for b in B.elements:
        words = every.get(b, [shortest[b]])
        images = {binfty_eval(datum, w, target_lam) for w in words}
        if len(images) != 1:
            raise ProjectiveError(f"words for {B.labels[b]} in B{source_lam} disagree in B{target_lam}: "
                                  f"{sorted(images, key=lambda x: -1 if x is None else x)}")
        out.append(images.pop())
    return out


def _columns(images: Sequence[Optional[int]]) -> List[Row]:
    return [{} if t is None else {t: ONE} for t in images]


def gamma_nu(datum: CartanSatakeDatum, nu: Weight) -> ICrystalMorphism:
    """B(sigma + nu + tau(nu)) -> B(0)^sigma: b_top ↦ b_0^sigma, all else ↦ 0."""
    nu = _require_dominant(datum, nu, 'nu')
    source = induced_b_lambda(datum, weight_add(compute_sigma(datum), chain_step(datum, nu)))
    columns = [{0: ONE} if b == 0 else {} for b in source.elements]
    return ICrystalMorphism(source, b0_sigma(datum), columns, name=f"γ{nu}")


def rho_lambda(datum: CartanSatakeDatum, lam: Weight) -> ICrystalMorphism:
    """B(sigma + lambda) -> B(lambda)^sigma, pi_{sigma+lambda}(b) ↦ pi_lambda(b)^sigma."""
    lam = _require_dominant(datum, lam, 'lambda')
    top = weight_add(compute_sigma(datum), lam)
    source = induced_b_lambda(datum, top)
    target = b_lambda_sigma(datum, lam)
    return ICrystalMorphism(source, target, _columns(_word_images(datum, top, lam)), name=f"ρ{lam}")


def rho_section(datum: CartanSatakeDatum, lam: Weight) -> ICrystalMorphism:
    """The injection B(lambda)^sigma -> B(sigma + lambda), pi_lambda(b)^sigma ↦ pi_{sigma+lambda}(b)."""
    lam = _require_dominant(datum, lam, 'lambda')
    top = weight_add(compute_sigma(datum), lam)
    images = _word_images(datum, lam, top)
    if any(t is None for t in images):
        raise ProjectiveError(f"B{lam}σ does not inject into B{top}")
    return ICrystalMorphism(b_lambda_sigma(datum, lam), induced_b_lambda(datum, top), _columns(images),
                            name=f"ι{lam}")


def pi_i_lambda_nu(datum: CartanSatakeDatum, lam: Weight, nu: Weight) -> ICrystalMorphism:
    """B(lambda + nu + tau(nu))^sigma -> B(lambda)^sigma, pi(b)^sigma ↦ pi_lambda(b)^sigma."""
    lam = _require_dominant(datum, lam, 'lambda')
    nu = _require_dominant(datum, nu, 'nu')
    big = weight_add(lam, chain_step(datum, nu))
    return ICrystalMorphism(b_lambda_sigma(datum, big), b_lambda_sigma(datum, lam),
                            _columns(_word_images(datum, big, lam)), name=f"πı{lam},{nu}")


def compose(outer: ICrystalMorphism, inner: ICrystalMorphism) -> ICrystalMorphism:
    """outer ∘ inner."""
    if len(inner.target) != len(outer.source):
        raise ProjectiveError(f"cannot compose {outer.name} after {inner.name}")
    return ICrystalMorphism(inner.source, outer.target, [outer.image(col) for col in inner.columns],
                            name=f"{outer.name}∘{inner.name}")


def classify_system(datum: CartanSatakeDatum, lam: Weight, nu: Weight) -> Dict[str, MorphismClassification]:
    """Classification of gamma_nu, rho_lambda, its section and pi^ı_{lambda,nu}."""
    return {
        'gamma': check_icrystal_morphism(gamma_nu(datum, nu)),
        'rho': check_icrystal_morphism(rho_lambda(datum, lam)),
        'rho_section': check_icrystal_morphism(rho_section(datum, lam)),
        'pi': check_icrystal_morphism(pi_i_lambda_nu(datum, lam, nu)),
    }


def check_coherence(datum: CartanSatakeDatum, lam: Weight, nu: Weight, nu2: Weight,
                    max_length: int = MAX_WORD_LENGTH) -> CheckReport:
    """
    pi^ı_{lambda,nu} ∘ pi^ı_{lambda+nu+tau(nu),nu2} = pi^ı_{lambda,nu+nu2} on
    elements reached by words of length ≤ max_length.
    """
    report = CheckReport(f"coherence λ={list(lam)} ν={list(nu)} ν'={list(nu2)}")
    first = pi_i_lambda_nu(datum, lam, nu)
    second = pi_i_lambda_nu(datum, weight_add(tuple(lam), chain_step(datum, nu)), nu2)
    direct = pi_i_lambda_nu(datum, lam, weight_add(tuple(nu), tuple(nu2)))
    composed = compose(first, second)
    words = _words_of(datum, direct_lambda(datum, lam, nu, nu2))
    for b in direct.source.elements:
        if len(words[b]) > max_length:
            continue
        report.checked += 1
        if composed.columns[b] != direct.columns[b]:
            report.add('coherence', f"{direct.source.labels[b]}: {composed.columns[b]} vs {direct.columns[b]}")
    return report


def direct_lambda(datum: CartanSatakeDatum, lam: Weight, nu: Weight, nu2: Weight) -> Weight:
    return weight_add(tuple(lam), chain_step(datum, weight_add(tuple(nu), tuple(nu2))))


# ──────────────────────────────────────────────────────────────
# Highest weight characterization
# ──────────────────────────────────────────────────────────────

def highest_weight_scan(B: ICrystalGraph) -> CheckReport:
    """Exactly one element, the first, has beta_i = 0 and B_i = 0 for every i."""
    report = CheckReport(f"highest weight {B.name}")
    found = [b for b in B.elements
             if all(B.beta[b][i] == 0 and not B.btil[i][b] for i in B.datum.indices)]
    report.checked += len(B)
    if found != [0]:
        labels = [B.labels[b] for b in found]
        report.add('highest weight', f"elements with beta = 0 and B = 0: {labels}, expected [{B.labels[0]}]")
    return report


def check_highest_weight_characterization(datum: CartanSatakeDatum, nu: Weight) -> CheckReport:
    nu = _require_dominant(datum, nu, 'nu')
    return highest_weight_scan(induced_b_lambda(datum, weight_add(compute_sigma(datum), chain_step(datum, nu))))


# ──────────────────────────────────────────────────────────────
# The limit T_zeta ⊗ B(infinity)
# ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class LimitElement:
    """t_zeta ⊗ b with b given by its canonical word."""
    zeta: IWeight
    word: Word

    def to_json(self) -> Dict:
        return {'zeta': self.zeta.to_json(), 'word': list(self.word)}


@dataclass
class LimitValue:
    """Stabilized B_i and beta_i of t_zeta ⊗ b, with the evaluations that led to it."""
    action: Dict[Word, Sqrt2Scalar]
    beta: ExtInt
    lam: Weight
    trace: List[Tuple[Weight, Dict[Word, Sqrt2Scalar], ExtInt]] = field(default_factory=list)

    def to_json(self) -> Dict:
        def encode(action):
            return [{'word': list(w), 'amplitude': a.to_json()} for w, a in sorted(action.items())]
        return {
            'action': encode(self.action),
            'beta': self.beta if isinstance(self.beta, int) else repr(self.beta),
            'lambda': list(self.lam),
            'trace': [{'lambda': list(lam), 'action': encode(act),
                       'beta': beta if isinstance(beta, int) else repr(beta)}
                      for lam, act, beta in self.trace],
        }


def dominant_representative(datum: CartanSatakeDatum, target: IWeight, bound: Optional[int] = None) -> Weight:
    """
    Smallest dominant lambda (by coordinate sum) with lambda-bar = target.

    Raises:
        ProjectiveError: If none exists within the search bound.
    """
    bound = bound if bound is not None else max([abs(v) for v in target.values] + [1]) + 1
    candidates = sorted(itertools.product(range(bound + 1), repeat=datum.rank), key=lambda lam: (sum(lam), lam))
    for lam in candidates:
        if project_weight(lam, datum) == target:
            return lam
    raise ProjectiveError(f"no dominant weight with coordinates ≤ {bound} projects to {target}")


@lru_cache(maxsize=4096)
def _canonical(datum: CartanSatakeDatum, word: Word) -> Word:
    return canonical_word(datum, word)


@lru_cache(maxsize=64)
def _words_of(datum: CartanSatakeDatum, lam: Weight) -> Tuple[Word, ...]:
    return tuple(covering_words(cached_b_lambda(datum, lam)))


def _evaluate_at(datum: CartanSatakeDatum, lam: Weight, word: Word, i: int) -> Tuple[Dict[Word, Sqrt2Scalar], ExtInt]:
    B = b_lambda_sigma(datum, lam)
    b = binfty_eval(datum, word, lam)
    words = _words_of(datum, lam)
    action = {_canonical(datum, words[t]): amp for t, amp in B.btil[i][b].items()}
    return action, B.beta[b][i]


def limit_evaluate(datum: CartanSatakeDatum, zeta: IWeight, word: Sequence[int], i: int,
                   depth: int = STABILIZATION_DEPTH, confirmations: int = 1) -> LimitValue:
    """
    Evaluate B_i and beta_i on pi_lambda(b)^sigma along the chain
    lambda_0, lambda_0 + nu + tau(nu), ... with lambda_0-bar = zeta - sigma-bar
    and b in B(infinity; lambda_0).

    Args:
        confirmations: Consecutive agreements required after the first
                       value (1 gives two equal evaluations, 2 gives three).

    Raises:
        ProjectiveError: If no value repeats within `depth` chain steps;
                         the message carries the last two evaluations.
    """
    word = tuple(word)
    if i not in datum.indices:
        raise ProjectiveError(f"index {i} outside datum")
    lam = dominant_representative(datum, zeta - sigma_bar(datum))
    step = chain_step(datum)
    for _ in range(len(word) + 1):
        if binfty_eval(datum, word, lam) is not None:
            break
        lam = weight_add(lam, step)
    else:
        raise ProjectiveError(f"word {list(word)} never enters B(∞;λ) along the chain")
    trace = []
    for _ in range(depth + confirmations + 1):
        action, beta = _evaluate_at(datum, lam, word, i)
        trace.append((lam, action, beta))
        tail = trace[-(confirmations + 1):]
        if len(tail) == confirmations + 1 and all(t[1:] == tail[-1][1:] for t in tail):
            first = tail[0]
            return LimitValue(first[1], first[2], first[0], trace)
        lam = weight_add(lam, step)
    prev, last = trace[-2], trace[-1]
    raise ProjectiveError(f"B_{i}(t⊗{list(word)}) not stable after {depth} step(s): "
                          f"{prev[1]} (β={prev[2]}) at λ={list(prev[0])} vs "
                          f"{last[1]} (β={last[2]}) at λ={list(last[0])}")


def limit_action(datum: CartanSatakeDatum, zeta: IWeight, word: Sequence[int], i: int,
                 depth: int = STABILIZATION_DEPTH) -> Dict[LimitElement, Sqrt2Scalar]:
    value = limit_evaluate(datum, zeta, word, i, depth)
    return {LimitElement(zeta, w): amp for w, amp in value.action.items()}


def limit_beta(datum: CartanSatakeDatum, zeta: IWeight, word: Sequence[int], i: int,
               depth: int = STABILIZATION_DEPTH) -> ExtInt:
    return limit_evaluate(datum, zeta, word, i, depth).beta


# ──────────────────────────────────────────────────────────────
# Closed formulas for comparison
# ──────────────────────────────────────────────────────────────

def diagonal_formula(datum: CartanSatakeDatum, zeta: IWeight, word: Sequence[int],
                     i: int) -> Tuple[Dict[Word, Sqrt2Scalar], ExtInt]:
    """
    For a_{i,tau(i)} = 0 with zeta_i = <h_i - h_tau(i), zeta>:
        beta_i = max(phi_i(b) + zeta_i - wt_tau(i)(b), eps_tau(i)(b)),
        B_i    = t ⊗ F_i b if phi_i(b) > phi_tau(i)(b) - zeta_i, else t ⊗ E_tau(i) b.
    """
    if datum.a_tau(i) != 0:
        raise ProjectiveError(f"closed limit formula needs a_(i,τ(i)) = 0 at i={i}")
    ti = datum.tau[i]
    b = binfty_stats(datum, word)
    z = datum.iweight_at(zeta, i)
    beta = ext_max(b.phi[i] + z - b.wt[ti], b.eps[ti])
    if b.phi[i] > b.phi[ti] - z:
        target = _canonical(datum, tuple(word) + (i,))
    else:
        target = binfty_raise(datum, word, ti)
    return ({} if target is None else {target: ONE}), beta


def check_diagonal_formulas(datum: CartanSatakeDatum, zeta: IWeight, words: Sequence[Word],
                            depth: int = STABILIZATION_DEPTH) -> CheckReport:
    report = CheckReport(f"diagonal limit ζ={zeta}")
    for word in words:
        for i in datum.indices:
            if datum.a_tau(i) != 0:
                continue
            report.checked += 1
            got = limit_evaluate(datum, zeta, word, i, depth)
            action, beta = diagonal_formula(datum, zeta, word, i)
            if got.action != action or got.beta != beta:
                report.add('diagonal', f"word {list(word)}, i={i}: limit {got.action} (β={got.beta}) "
                                       f"vs formula {action} (β={beta})")
    return report


def check_t_additivity(datum: CartanSatakeDatum, zeta: IWeight, mu: Weight) -> Optional[str]:
    """T_zeta ⊗ T_mu against T_{zeta + mu-bar}; the first difference, or None."""
    product = tensor_icrystal_crystal(t_zeta(datum, zeta), t_lambda(datum, tuple(mu)))
    return compare_under(product, t_zeta(datum, zeta + project_weight(tuple(mu), datum)), [0])
