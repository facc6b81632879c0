# src/suite.py — Verification Suites
"""
The verify-paper suites: every structural claim checked mechanically.

Responsibilities:
    1. builtin: the eight ıcrystal families pass the axioms, the three
       stated equivalences classify as equivalences (not isomorphisms)
    2. tensor / associativity: seeded random pairs and triples over the
       bundled data
    3. a=2 / a=0 / a=-1 / norms: q-symbolic oracle sweeps
    4. golden: B(2) ⊗ B(3), the A1 graphs B^ı(s_i) ⊗ B(n) and the a = 0
       grid, exported and compared byte for byte with data/golden, then
       against their closed-form descriptions
    5. projective / limit / diagonal: the projective system and its limit
    6. s-conditions: (S1)-(S3)' and consequences on every B(lambda)
       of at most 500 elements

Suites run in-process one after another, or in SUITE_WORKERS worker
processes; either way the report order is the order of SUITE_CASES.
"""

import itertools
import logging
import random
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import (
    DEFAULT_SEED, GOLDEN_DIR, GOLDEN_MAX_N, GOLDEN_S, MAX_WORD_LENGTH, NORM_MAX_N_MINUS,
    ORACLE_MAX_N_MINUS, ORACLE_P_RANGE, STABILIZATION_DEPTH, SUITE_MAX_SIZE, SUITE_PAIRS,
    SUITE_TRIPLES, SUITE_WORKERS,
)

from src.binfty import distinct_binfty_words
from src.crystal import (
    CapExceededError, CheckReport, CrystalError, CrystalGraph, b_lambda, check_S_conditions_for_tau,
    natural_crystal, string_crystal, t_lambda, tensor_crystals,
)
from src.export import FORMATS, export_graph
from src.icrystal import (
    ICrystalError, ICrystalGraph, builtin_equivalences, check_icrystal_axioms,
    check_icrystal_morphism, make_builtin_icrystal,
)
from src.itensor import (
    ITensorError, check_associativity, check_estimate_identities, check_natural_coincidence,
    check_natural_shape, check_row_norms, grid_icrystal, tensor_icrystal_crystal,
)
from src.projective import (
    ProjectiveError, check_coherence, check_diagonal_formulas,
    check_highest_weight_characterization, classify_system, limit_evaluate,
)
from src.qoracle import (
    OracleError, a2_eigen_sweep, build_rank_two_module, compare_oracle, norm_sweep, oracle_sweep,
)
from src.rootdata import CartanSatakeDatum, load_datum, project_weight, validate_datum
from src.sqrt2 import ONE, Sqrt2Scalar

logger = logging.getLogger(__name__)

BUNDLED_CASES = ('a1', 'a1xa1', 'a2_flip')
S_CONDITION_CAP = 500


class SuiteError(ValueError):
    """Unknown suite case."""


@dataclass
class SuiteResult:
    case: str
    report: CheckReport
    seconds: float

    @property
    def ok(self) -> bool:
        return self.report.ok

    def to_json(self) -> Dict:
        out = self.report.to_json()
        out['case'] = self.case
        out['seconds'] = round(self.seconds, 3)
        return out


def _data(datums: Optional[Sequence[CartanSatakeDatum]]) -> List[CartanSatakeDatum]:
    return list(datums) if datums else [load_datum(name) for name in BUNDLED_CASES]


def _case_of(datum: CartanSatakeDatum) -> int:
    return datum.a_tau(datum.i_tau[0])


# ──────────────────────────────────────────────────────────────
# Built-in families
# ──────────────────────────────────────────────────────────────

# (datum, family, params) for the eight families
BUILTIN_EXAMPLES = (
    ('a1', 'trivial', {}),
    ('a1', 't_zeta', {'zeta': [1]}),
    ('a1', 'bi_rank1', {'n': -3}),
    ('a1', 'bi_two_cycle', {'n': 2}),
    ('a1xa1', 'bi_string', {'n': 3}),
    ('a2_flip', 'bi_minus', {'n_minus': 3, 'n_plus': 2}),
    ('a2_flip', 'bi_vee', {'n_minus': 3, 'n_plus': 2}),
    ('a2_flip', 'bi_wedge', {'n_minus': 3, 'n_plus': 2}),
)

EQUIVALENCE_EXAMPLES = (
    ('a1', 'bi_two_cycle', {'n': 2}),
    ('a2_flip', 'bi_vee', {'n_minus': 3, 'n_plus': 2}),
    ('a2_flip', 'bi_wedge', {'n_minus': 3, 'n_plus': 2}),
)


def suite_builtin(seed: int = DEFAULT_SEED, progress: bool = False) -> CheckReport:
    report = CheckReport("built-in families")
    for name, family, params in BUILTIN_EXAMPLES:
        B = make_builtin_icrystal(family, load_datum(name), params)
        report.extend(check_icrystal_axioms(B))
        report.extend(check_row_norms(B))
    for name, family, params in EQUIVALENCE_EXAMPLES:
        report.checked += 1
        verdict = check_icrystal_morphism(builtin_equivalences(family, load_datum(name), params))
        if verdict.kind != 'equivalence':
            report.add('equivalence', f"{family} {params}: classified as '{verdict.kind}' ({verdict.witness})")
    return report


# ──────────────────────────────────────────────────────────────
# Random factors
# ──────────────────────────────────────────────────────────────

def random_icrystal(rng: random.Random, datum: CartanSatakeDatum) -> ICrystalGraph:
    """A built-in ıcrystal with random parameters valid for the datum's case."""
    a = _case_of(datum)
    i = datum.i_tau[0]
    while True:
        if a == 2:
            family = rng.choice(('trivial', 't_zeta', 'bi_rank1', 'bi_two_cycle'))
            params = {'zeta': [rng.randint(0, 1)], 'n': rng.randint(-4, 4) if family == 'bi_rank1' else rng.randint(1, 4)}
        elif a == 0:
            family = rng.choice(('trivial', 't_zeta', 'bi_string', 'bi_string'))
            params = {'zeta': [rng.randint(-2, 2)], 'n': rng.randint(0, 5)}
        else:
            family = rng.choice(('trivial', 't_zeta', 'bi_minus', 'bi_vee', 'bi_wedge'))
            params = {'zeta': [rng.randint(-2, 2)], 'n_minus': rng.randint(0, 4),
                      'n_plus': rng.randint(-2, 4) + datum.s[i]}
        if family == 't_zeta':
            params['zeta'] = params['zeta'] * len(datum.i_tau)
        try:
            B = make_builtin_icrystal(family, datum, params)
        except ICrystalError:
            continue
        if len(B) <= SUITE_MAX_SIZE:
            return B


def random_crystal(rng: random.Random, datum: CartanSatakeDatum) -> CrystalGraph:
    """A normal crystal (S-conditions hold) with at most SUITE_MAX_SIZE elements."""
    while True:
        kind = rng.choice(('string', 'string', 't', 'b_lambda', 'b_lambda', 'natural'))
        try:
            if kind == 'string':
                node = rng.choice(datum.indices)
                B = string_crystal(datum, rng.randint(0, 6), node)
            elif kind == 't':
                B = t_lambda(datum, tuple(rng.randint(-2, 2) for _ in datum.indices))
            elif kind == 'natural':
                B = natural_crystal(datum)
            else:
                B = b_lambda(datum, tuple(rng.randint(0, 2) for _ in datum.indices), cap=SUITE_MAX_SIZE)
        except CrystalError:
            continue
        if len(B) <= SUITE_MAX_SIZE:
            return B


# ──────────────────────────────────────────────────────────────
# Tensor soundness and associativity
# ──────────────────────────────────────────────────────────────

def suite_tensor(seed: int = DEFAULT_SEED, progress: bool = False, pairs: int = SUITE_PAIRS,
                 datums: Optional[Sequence[CartanSatakeDatum]] = None) -> CheckReport:
    """Random (ıcrystal, crystal) pairs; the tensor product passes the axioms."""
    rng = random.Random(seed)
    data = _data(datums)
    report = CheckReport(f"tensor soundness ({pairs} pairs, seed {seed})")
    for n in tqdm(range(pairs), desc="Tensor", unit="pair", disable=not progress):
        datum = data[n % len(data)]
        B1 = random_icrystal(rng, datum)
        B2 = random_crystal(rng, datum)
        try:
            product = tensor_icrystal_crystal(B1, B2)
        except ITensorError as exc:
            report.add('precondition', f"{B1.name} ⊗ {B2.name}: {exc}")
            continue
        found = check_icrystal_axioms(product)
        report.extend(found)
        if _case_of(datum) == -1:
            report.extend(check_estimate_identities(B1, B2, product))
        if not found.ok:
            logger.warning(f"✗ {product.name} on {datum.name}: {found.violations[0].clause}")
    return report


def suite_associativity(seed: int = DEFAULT_SEED, progress: bool = False, triples: int = SUITE_TRIPLES,
                        datums: Optional[Sequence[CartanSatakeDatum]] = None) -> CheckReport:
    rng = random.Random(seed + 1)
    data = _data(datums)
    report = CheckReport(f"associativity ({triples} triples, seed {seed})")
    for n in tqdm(range(triples), desc="Associativity", unit="triple", disable=not progress):
        datum = data[n % len(data)]
        B1 = random_icrystal(rng, datum)
        B2 = random_crystal(rng, datum)
        B3 = random_crystal(rng, datum)
        report.checked += 1
        try:
            same, witness = check_associativity(B1, B2, B3)
        except ITensorError as exc:
            report.add('precondition', f"{B1.name}, {B2.name}, {B3.name}: {exc}")
            continue
        if not same:
            report.add('associativity', f"{B1.name} ⊗ {B2.name} ⊗ {B3.name} on {datum.name}: {witness}")
    return report


# ──────────────────────────────────────────────────────────────
# Oracle sweeps
# ──────────────────────────────────────────────────────────────

def suite_minus_one(seed: int = DEFAULT_SEED, progress: bool = False) -> CheckReport:
    """a = -1: the oracle over the whole (n_-, n_+) range plus the natural rule."""
    report = oracle_sweep(ORACLE_MAX_N_MINUS, ORACLE_P_RANGE, progress=progress)
    datum = load_datum('a2_flip')
    s = datum.s[datum.i_tau[0]]
    for n_minus in range(ORACLE_MAX_N_MINUS + 1):
        for p in range(ORACLE_P_RANGE[0], ORACLE_P_RANGE[1] + 1):
            B = make_builtin_icrystal('bi_minus', datum, {'n_minus': n_minus, 'n_plus': p + s})
            report.extend(check_natural_coincidence(B))
            if n_minus > 0:
                report.extend(check_natural_shape(B, n_minus, p))
    return report


def suite_norms(seed: int = DEFAULT_SEED, progress: bool = False) -> CheckReport:
    return norm_sweep(NORM_MAX_N_MINUS, ORACLE_P_RANGE)


def suite_two(seed: int = DEFAULT_SEED, progress: bool = False) -> CheckReport:
    """a = 2: eigenvalues of B_i on V(n), then V^ı(s) ⊗ V(m) against the tensor rule."""
    report = a2_eigen_sweep(ORACLE_MAX_N_MINUS, ORACLE_P_RANGE)
    points = [(s, m) for s in range(ORACLE_P_RANGE[0], ORACLE_P_RANGE[1] + 1) for m in range(1, 4)]
    for s, m in tqdm(points, desc="Oracle a=2", unit="module", disable=not progress):
        report.extend(compare_oracle(build_rank_two_module(2, (s,)), (m,)))
    return report


def suite_zero(seed: int = DEFAULT_SEED, progress: bool = False) -> CheckReport:
    report = CheckReport("oracle a = 0")
    for n in tqdm(range(ORACLE_MAX_N_MINUS + 1), desc="Oracle a=0", unit="module", disable=not progress):
        report.extend(compare_oracle(build_rank_two_module(0, (n,))))
    return report


# ──────────────────────────────────────────────────────────────
# Golden graphs
# ──────────────────────────────────────────────────────────────

def expected_string_tensor_f(m: int, n: int) -> Dict[Tuple[int, int], Optional[Tuple[int, int]]]:
    """F on B(m) ⊗ B(n) over A1: right factor while phi(b_l) > eps(b_k)."""
    out = {}
    for k in range(m + 1):
        for l in range(n + 1):
            if n - l > k:
                out[(k, l)] = (k, l + 1)
            else:
                out[(k, l)] = (k + 1, l) if k < m else None
    return out


def expected_a1_icrystal(n: int, s: int) -> List[Tuple[int, Optional[Tuple[int, int]]]]:
    """
    (beta_i, B_i b_k) on B^ı(s) ⊗ B(n) over A1, one entry per k. B_i b_k
    is (target, sign) or None.

    Strings with k > n - |s| are fixed by B_i up to sgn(s), with
    beta = |s| - n + 2k. The rest pairs up as b_1 <-> b_2, ... (b_0
    alone) when n ≡ s mod 2 and as b_0 <-> b_1, ... otherwise.
    """
    sgn = (s > 0) - (s < 0)
    r = n - abs(s)
    out = []
    for k in range(n + 1):
        if k > r:
            out.append((abs(s) - n + 2 * k, (k, sgn)))
        elif (n - s) % 2 == 0:
            if k == 0:
                out.append((0, None))
            else:
                out.append((k + 1 if k % 2 else k, (k + 1 if k % 2 else k - 1, 1)))
        else:
            out.append((k + 1 if k % 2 == 0 else k, (k + 1 if k % 2 == 0 else k - 1, 1)))
    return out


def expected_grid_row(m: int, n: int, k: int, l: int) -> Optional[Tuple[int, int]]:
    """B_i b_{k,l} = b_{k,l+1} if n - l > m - k, else b_{k-1,l}."""
    if n - l > m - k:
        return (k, l + 1)
    return (k - 1, l) if k > 0 else None


def _single(row: Dict[int, Sqrt2Scalar]) -> Optional[Tuple[int, Sqrt2Scalar]]:
    if not row:
        return None
    if len(row) != 1:
        return (-1, ONE)
    (t, a), = row.items()
    return t, a


def _a1_with(s: int) -> CartanSatakeDatum:
    return validate_datum({'gcm': [[2]], 'tau': [0], 's': [s], 'name': f"a1_s{s}"})


def golden_graphs() -> List[Tuple[str, object]]:
    """(file stem, graph) for every checked-in golden graph, in a fixed order."""
    a1 = load_datum('a1')
    graphs = [('string_tensor_2_3', tensor_crystals(string_crystal(a1, 2), string_crystal(a1, 3)))]
    for s in GOLDEN_S:
        datum = _a1_with(s)
        for n in range(GOLDEN_MAX_N + 1):
            B = tensor_icrystal_crystal(make_builtin_icrystal('bi_rank1', datum, {'n': s}), string_crystal(datum, n))
            graphs.append((f"a1_s{s}_n{n}", B))
    graphs.append(('grid_2_3', grid_icrystal(load_datum('a1xa1'), 2, 3)))
    return graphs


def _first_difference(got: str, want: str) -> str:
    got_lines, want_lines = got.splitlines(), want.splitlines()
    for number, (g, w) in enumerate(zip(got_lines, want_lines), start=1):
        if g != w:
            return f"line {number}: got {g.strip()!r}, expected {w.strip()!r}"
    return f"got {len(got_lines)} lines, expected {len(want_lines)}"


def check_golden_files(graphs: Sequence[Tuple[str, object]], golden_dir: str = GOLDEN_DIR) -> CheckReport:
    """export_graph output must equal <stem>.json and <stem>.dot byte for byte."""
    report = CheckReport("golden files")
    for stem, B in graphs:
        for fmt in FORMATS:
            report.checked += 1
            path = os.path.join(golden_dir, f"{stem}.{fmt}")
            try:
                with open(path, 'rb') as f:
                    want = f.read()
            except OSError as e:
                report.add('golden file', f"{path}: {e}")
                continue
            got = export_graph(B, fmt)
            if got.encode('utf-8') != want:
                report.add('golden file', f"{stem}.{fmt}: {_first_difference(got, want.decode('utf-8'))}")
    return report


def suite_golden(seed: int = DEFAULT_SEED, progress: bool = False) -> CheckReport:
    """Checked-in golden files, then the closed forms they encode."""
    graphs = golden_graphs()
    report = check_golden_files(graphs)
    by_stem = dict(graphs)

    product = by_stem['string_tensor_2_3']
    expected_f = expected_string_tensor_f(2, 3)
    for b in product.elements:
        report.checked += 1
        f = product.f[b][0]
        got = product.keys[f] if f is not None else None
        want = expected_f[product.keys[b]]
        if got != want:
            report.add('B(2)⊗B(3)', f"F {product.labels[b]} = {got}, expected {want}")

    for s in GOLDEN_S:
        for n in range(GOLDEN_MAX_N + 1):
            B = by_stem[f"a1_s{s}_n{n}"]
            for k, (beta, row) in enumerate(expected_a1_icrystal(n, s)):
                report.checked += 1
                got = _single(B.btil[0][k])
                want = None if row is None else (row[0], Sqrt2Scalar.from_int(row[1]))
                if B.beta[k][0] != beta or got != want:
                    report.add('A1 graph', f"s={s}, n={n}, b_{k}: β={B.beta[k][0]!r} B={got}, "
                                           f"expected β={beta} B={want}")

    grid = by_stem['grid_2_3']
    i = grid.datum.i_tau[0]
    for b in grid.elements:
        report.checked += 1
        k, l = grid.keys[b]
        got = _single(grid.btil[i][b])
        target = expected_grid_row(2, 3, k, l)
        want = None if target is None else (grid.index[target], ONE)
        if got != want:
            report.add('grid', f"B_i b_{k},{l} = {got}, expected {want}")
    return report


# ──────────────────────────────────────────────────────────────
# Projective system and limit
# ──────────────────────────────────────────────────────────────

def suite_projective(seed: int = DEFAULT_SEED, progress: bool = False,
                     datums: Optional[Sequence[CartanSatakeDatum]] = None,
                     max_length: int = MAX_WORD_LENGTH, nu_bound: int = 2) -> CheckReport:
    """gamma, rho and pi very strict; coherence over two chain steps; highest weights."""
    report = CheckReport("projective system")
    for datum in tqdm(_data(datums), desc="Projective", unit="datum", disable=not progress):
        zero = datum.zero_weight()
        rho = datum.rho()
        for lam in (zero, rho):
            try:
                verdicts = classify_system(datum, lam, rho)
            except ProjectiveError as exc:
                report.add('word images', f"{datum.name}: {exc}")
                continue
            for name in ('gamma', 'rho', 'pi'):
                report.checked += 1
                if not verdicts[name].flags.get('very_strict'):
                    report.add('very strict', f"{datum.name} {name} at λ={list(lam)}: "
                                              f"{verdicts[name].kind} ({verdicts[name].witness})")
        try:
            report.extend(check_coherence(datum, zero, rho, rho, max_length))
        except ProjectiveError as exc:
            report.add('coherence', f"{datum.name}: {exc}")
        for nu in itertools.product(range(nu_bound + 1), repeat=datum.rank):
            report.extend(check_highest_weight_characterization(datum, nu))
    return report


def relevant_zetas(datum: CartanSatakeDatum, bound: int = 1) -> List:
    """Distinct projections of weights with coordinates in [0, bound]."""
    out = []
    for lam in itertools.product(range(bound + 1), repeat=datum.rank):
        zeta = project_weight(lam, datum)
        if zeta not in out:
            out.append(zeta)
    return out


def suite_limit(seed: int = DEFAULT_SEED, progress: bool = False,
                datums: Optional[Sequence[CartanSatakeDatum]] = None,
                max_length: int = MAX_WORD_LENGTH, depth: int = STABILIZATION_DEPTH) -> CheckReport:
    """limit_evaluate agrees at three consecutive chain depths."""
    report = CheckReport(f"limit stabilization (words ≤ {max_length}, depth {depth})")
    for datum in _data(datums):
        words = distinct_binfty_words(datum, max_length)
        points = [(zeta, w, i) for zeta in relevant_zetas(datum) for w in words for i in datum.indices]
        for zeta, word, i in tqdm(points, desc=f"Limit {datum.name}", unit="eval", disable=not progress):
            report.checked += 1
            try:
                limit_evaluate(datum, zeta, word, i, depth, confirmations=2)
            except ProjectiveError as exc:
                report.add('stabilization', f"{datum.name} ζ={zeta}: {exc}")
    return report


def suite_diagonal(seed: int = DEFAULT_SEED, progress: bool = False,
                   max_length: int = MAX_WORD_LENGTH, depth: int = STABILIZATION_DEPTH) -> CheckReport:
    datum = load_datum('a1xa1')
    words = distinct_binfty_words(datum, max_length)
    report = CheckReport("diagonal type limit")
    for z in tqdm(range(-2, 3), desc="Diagonal", unit="ζ", disable=not progress):
        report.extend(check_diagonal_formulas(datum, datum.make_iweight([z]), words, depth))
    return report


# ──────────────────────────────────────────────────────────────
# S-conditions
# ──────────────────────────────────────────────────────────────

def suite_s_conditions(seed: int = DEFAULT_SEED, progress: bool = False,
                       datums: Optional[Sequence[CartanSatakeDatum]] = None, bound: int = 4) -> CheckReport:
    report = CheckReport(f"S-conditions on B(λ) (≤ {S_CONDITION_CAP} elements)")
    for datum in _data(datums):
        for hw in itertools.product(range(bound + 1), repeat=datum.rank):
            try:
                B = b_lambda(datum, hw, cap=S_CONDITION_CAP)
            except CapExceededError:
                continue
            report.extend(check_S_conditions_for_tau(B))
    return report


# ──────────────────────────────────────────────────────────────
# Dispatch
# ──────────────────────────────────────────────────────────────

SUITES: Dict[str, Callable[..., CheckReport]] = {
    'builtin': suite_builtin,
    'tensor': suite_tensor,
    'associativity': suite_associativity,
    'a=2': suite_two,
    'a=0': suite_zero,
    'a=-1': suite_minus_one,
    'norms': suite_norms,
    'golden': suite_golden,
    'projective': suite_projective,
    'limit': suite_limit,
    'diagonal': suite_diagonal,
    's-conditions': suite_s_conditions,
}
SUITE_CASES = tuple(SUITES)


def _run_case(case: str, seed: int, progress: bool) -> SuiteResult:
    start = time.perf_counter()
    try:
        report = SUITES[case](seed=seed, progress=progress)
    except (OracleError, ICrystalError, ITensorError, CrystalError, ProjectiveError) as exc:
        report = CheckReport(case)
        report.add('error', str(exc))
    return SuiteResult(case, report, time.perf_counter() - start)


def run_suites(cases: Optional[Sequence[str]] = None, seed: int = DEFAULT_SEED,
               progress: bool = False, workers: int = SUITE_WORKERS) -> List[SuiteResult]:
    """
    Run the selected suites (all by default).

    With workers > 1 each suite runs in its own process; results are
    collected in SUITE_CASES order whatever order they finish in.

    Raises:
        SuiteError: On an unknown case name or workers < 1.
    """
    selected = list(cases) if cases else list(SUITE_CASES)
    unknown = [c for c in selected if c not in SUITES]
    if unknown:
        raise SuiteError(f"unknown suite case(s) {unknown} (expected any of {', '.join(SUITE_CASES)})")
    if workers < 1:
        raise SuiteError(f"workers must be >= 1, got {workers}")
    ordered = [c for c in SUITE_CASES if c in selected]
    if workers == 1 or len(ordered) == 1:
        results = [_run_case(case, seed, progress) for case in ordered]
    else:
        # progress bars from several processes would interleave
        with Pool(processes=min(workers, len(ordered))) as pool:
            pending = [pool.apply_async(_run_case, (case, seed, False)) for case in ordered]
            pool.close()
            pool.join()
        results = [p.get() for p in pending]
    for r in results:
        mark = '✓' if r.report.ok else '✗'
        logger.info(f"{mark} {r.case}: {r.report.checked} checks, {len(r.report.violations)} violation(s), "
                    f"{r.seconds:.1f}s")
    return results
