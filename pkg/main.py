# main.py — Rich CLI for the ıCrystal Combinatorics Engine
"""
Command-line interface with 7 commands:
    build        : Build a built-in crystal or ıcrystal family
    check        : Run the axiom checkers on a family or a graph file
    tensor       : ıcrystal ⊗ crystal
    induce       : ıcrystal structure induced on a crystal
    graph        : Convert a graph file between JSON and DOT
    verify-paper : Run the verification suites, print a pass/fail matrix
    projective   : B_i and beta_i on T_zeta ⊗ B(infinity) with the trace

Artifacts go to stdout (or --out); decorations go to stderr.
Exit codes: 0 pass, 1 verification failure, 2 usage or input error.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
from rich import box

from config import DEFAULT_SEED, LOG_LEVEL, REPORT_SCHEMA, STABILIZATION_DEPTH

if (sys.stdout.encoding or '').lower() != 'utf-8' and hasattr(sys.stdout, 'reconfigure'):
    sys.stdout.reconfigure(encoding='utf-8')

# Configure logging BEFORE importing any src modules
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s | %(name)-20s | %(levelname)-7s | %(message)s',
    datefmt='%H:%M:%S'
)

logger = logging.getLogger('main')

# ──────────────────────────────────────────────────────────────
# Rich Console (stderr, so stdout carries only artifacts)
# ──────────────────────────────────────────────────────────────

console = Console(stderr=True)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

COMMANDS = ('build', 'check', 'tensor', 'induce', 'graph', 'verify-paper', 'projective')


class InputError(ValueError):
    """Bad flags, parameters or input files."""


# ──────────────────────────────────────────────────────────────
# Configuration
# ──────────────────────────────────────────────────────────────

@dataclass
class CliConfig:
    """Validated command configuration."""
    command: str
    datum: str = 'a2_flip'
    params: Dict = field(default_factory=dict)
    fmt: str = 'json'
    cap: Optional[int] = None
    depth: int = STABILIZATION_DEPTH
    seed: int = DEFAULT_SEED
    out: Optional[str] = None


def parse_params(tokens: Optional[List[str]]) -> Dict:
    """
    Parse --params: one JSON object, or k=v tokens.

    Values are read as JSON when possible; "2,0" becomes [2, 0].

    Raises:
        InputError: On a token without '='.
    """
    if not tokens:
        return {}
    joined = ' '.join(tokens).strip()
    if joined.startswith('{'):
        try:
            return json.loads(joined)
        except json.JSONDecodeError as e:
            raise InputError(f"--params is not valid JSON: {e}")
    out = {}
    for token in tokens:
        if '=' not in token:
            raise InputError(f"--params token '{token}' is not k=v")
        key, value = token.split('=', 1)
        out[key.strip().replace('-', '_')] = _parse_value(value.strip())
    return out


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    if ',' in text:
        return [_parse_value(part) for part in text.split(',') if part]
    return text


def _int_list(text: Optional[str], what: str) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(x) for x in str(text).replace('[', '').replace(']', '').split(',') if x.strip()]
    except ValueError:
        raise InputError(f"{what} must be a comma-separated list of integers, got '{text}'")


def load_config_file(path: Optional[str]) -> Dict:
    if not path:
        return {}
    try:
        with open(path, encoding='utf-8') as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read config file '{path}': {e}")


def build_config(args: argparse.Namespace) -> CliConfig:
    """
    Merge the config file with flag overrides and validate.

    Raises:
        InputError: On any invalid value.
    """
    base = load_config_file(getattr(args, 'config', None))
    params = dict(base.get('params', {}))
    params.update(parse_params(getattr(args, 'params', None)))
    for flag in ('n', 'n_minus', 'n_plus', 'node'):
        value = getattr(args, flag, None)
        if value is not None:
            params[flag] = value
    for flag in ('hw', 'zeta', 'weight'):
        value = _int_list(getattr(args, flag, None), f"--{flag}")
        if value is not None:
            params[flag] = value
    cfg = CliConfig(
        command=args.command,
        datum=args.datum or base.get('datum', 'a2_flip'),
        params=params,
        fmt=args.format or base.get('format', 'json'),
        cap=args.cap if args.cap is not None else base.get('cap'),
        depth=args.depth if args.depth is not None else int(base.get('depth', STABILIZATION_DEPTH)),
        seed=args.seed if args.seed is not None else int(base.get('seed', DEFAULT_SEED)),
        out=args.out,
    )
    if cfg.fmt not in ('json', 'dot'):
        raise InputError(f"--format must be json or dot, got '{cfg.fmt}'")
    if cfg.cap is not None and cfg.cap <= 0:
        raise InputError(f"--cap must be positive, got {cfg.cap}")
    if cfg.depth < 1:
        raise InputError(f"--depth must be at least 1, got {cfg.depth}")
    if cfg.cap is not None:
        cfg.params.setdefault('cap', cfg.cap)
    return cfg


# ──────────────────────────────────────────────────────────────
# Output helpers
# ──────────────────────────────────────────────────────────────

def emit(text: str, out: Optional[str]):
    """Write an artifact to --out or stdout."""
    if out:
        with open(out, 'w', encoding='utf-8') as fh:
            fh.write(text)
        console.print(f"[green]✓ Written to {out}[/green]")
    else:
        sys.stdout.write(text)


def report_payload(command: str, reports: list, **extra) -> Dict:
    payload = {
        'schema': REPORT_SCHEMA,
        'command': command,
        'ok': all(r['ok'] for r in reports),
        'reports': reports,
    }
    payload.update(extra)
    return payload


def show_reports(title: str, reports: list):
    """Pass/fail matrix of report dicts."""
    table = Table(
        title=title,
        box=box.ROUNDED,
        show_header=True,
        header_style="bold magenta",
        padding=(0, 1),
    )
    table.add_column("Check", style="cyan")
    table.add_column("Result", justify="center", width=8)
    table.add_column("Checked", style="green", justify="right")
    table.add_column("First violation", style="white", ratio=1)
    if reports and 'seconds' in reports[0]:
        table.add_column("Time", style="yellow", justify="right")
    for r in reports:
        first = r['violations'][0] if r['violations'] else None
        row = [
            r.get('case', r['name']),
            "[bold green]PASS[/bold green]" if r['ok'] else "[bold red]FAIL[/bold red]",
            str(r['checked']),
            f"{first['clause']}: {first['witness']}" if first else "",
        ]
        if 'seconds' in r:
            row.append(f"{r['seconds']:.1f}s")
        table.add_row(*row)
    console.print(table)


def _load_datum(cfg: CliConfig):
    from src.rootdata import load_datum
    return load_datum(cfg.datum)


def _build_family(family: str, datum, params: Dict):
    """Crystal or ıcrystal family by name."""
    from src.crystal import CRYSTAL_FAMILIES, make_crystal
    from src.icrystal import ICRYSTAL_FAMILIES, make_builtin_icrystal

    key = family.lower().replace('-', '_')
    if key in ICRYSTAL_FAMILIES:
        return make_builtin_icrystal(key, datum, params)
    if key in {f.lower() for f in CRYSTAL_FAMILIES} or key in ('string', 'natural'):
        return make_crystal(key, datum, params)
    raise InputError(f"unknown family '{family}' (crystals: {', '.join(CRYSTAL_FAMILIES)}; "
                     f"ıcrystals: {', '.join(ICRYSTAL_FAMILIES)})")


def _read_graph(path: str):
    from src.export import import_graph
    try:
        with open(path, encoding='utf-8') as fh:
            return import_graph(fh.read())
    except OSError as e:
        raise InputError(f"cannot read '{path}': {e}")


def _graph_from(cfg: CliConfig, path: Optional[str], family: Optional[str], params: Dict):
    if path:
        return _read_graph(path)
    if not family:
        raise InputError("give either an input file or --family")
    return _build_family(family, _load_datum(cfg), params)


# ──────────────────────────────────────────────────────────────
# Command Handlers
# ──────────────────────────────────────────────────────────────

def cmd_build(cfg: CliConfig, args: argparse.Namespace) -> int:
    from src.export import export_graph
    if not args.family:
        raise InputError("build needs --family")
    B = _build_family(args.family, _load_datum(cfg), cfg.params)
    console.print(f"[green]✓ Built {B.name} ({len(B)} elements)[/green]")
    emit(export_graph(B, cfg.fmt), cfg.out)
    return EXIT_OK


def graph_reports(B) -> list:
    """Every checker that applies to a crystal or ıcrystal."""
    from src.crystal import check_crystal_axioms, check_S_conditions_for_tau
    from src.icrystal import ICrystalGraph, check_icrystal_axioms
    from src.itensor import check_row_norms
    if isinstance(B, ICrystalGraph):
        return [check_icrystal_axioms(B).to_json(), check_row_norms(B).to_json()]
    return [check_crystal_axioms(B).to_json(), check_S_conditions_for_tau(B).to_json()]


def cmd_check(cfg: CliConfig, args: argparse.Namespace) -> int:
    from src.export import dumps
    from src.icrystal import builtin_equivalences, check_icrystal_morphism

    B = _graph_from(cfg, args.input, args.family, cfg.params)
    reports = graph_reports(B)
    extra = {}
    if args.equivalence:
        if not args.family:
            raise InputError("--equivalence needs --family")
        verdict = check_icrystal_morphism(builtin_equivalences(args.family, B.datum, cfg.params))
        extra['morphism'] = verdict.to_json()
    payload = report_payload('check', reports, graph=B.name, **extra)
    show_reports(f"🔎 Checks: {B.name}", reports)
    emit(dumps(payload), cfg.out)
    return EXIT_OK if payload['ok'] else EXIT_FAILURE


def cmd_tensor(cfg: CliConfig, args: argparse.Namespace) -> int:
    from src.crystal import CrystalGraph
    from src.export import export_graph
    from src.icrystal import ICrystalGraph
    from src.itensor import tensor_icrystal_crystal

    left = _graph_from(cfg, args.left, args.left_family, parse_params(args.left_params))
    right = _graph_from(cfg, args.right, args.right_family, parse_params(args.right_params))
    if not isinstance(left, ICrystalGraph) or not isinstance(right, CrystalGraph):
        raise InputError("tensor needs an ıcrystal on the left and a crystal on the right")
    product = tensor_icrystal_crystal(left, right)
    for note in product.notes:
        console.print(f"[yellow]⚠ {note}[/yellow]")
    console.print(f"[green]✓ {product.name}: {len(product)} elements[/green]")
    emit(export_graph(product, cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_induce(cfg: CliConfig, args: argparse.Namespace) -> int:
    from src.crystal import CrystalGraph
    from src.export import export_graph
    from src.itensor import induce_icrystal

    B = _graph_from(cfg, args.input, args.family, cfg.params)
    if not isinstance(B, CrystalGraph):
        raise InputError("induce needs a crystal")
    out = induce_icrystal(B, args.mode)
    for note in out.notes:
        console.print(f"[yellow]⚠ {note}[/yellow]")
    console.print(f"[green]✓ {out.name}: {len(out)} elements ({args.mode})[/green]")
    emit(export_graph(out, cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_graph(cfg: CliConfig, args: argparse.Namespace) -> int:
    from src.export import export_graph
    if not args.input:
        raise InputError("graph needs an input file")
    emit(export_graph(_read_graph(args.input), cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_verify_paper(cfg: CliConfig, args: argparse.Namespace) -> int:
    from src.export import dumps
    from src.suite import SuiteError, run_suites

    console.print(Panel(
        f"[bold green]Verification suites[/bold green]\n"
        f"Cases: {', '.join(args.case) if args.case else 'all'} │ Seed: {cfg.seed}",
        title="🧪 verify-paper",
        border_style="green",
        padding=(1, 2)
    ))
    try:
        extra = {} if args.workers is None else {'workers': args.workers}
        results = run_suites(args.case, seed=cfg.seed, progress=True, **extra)
    except SuiteError as e:
        raise InputError(str(e))
    reports = [r.to_json() for r in results]
    payload = report_payload('verify-paper', reports, seed=cfg.seed)
    show_reports("📋 Pass/fail matrix", reports)
    emit(dumps(payload), cfg.out)
    return EXIT_OK if payload['ok'] else EXIT_FAILURE


def cmd_projective(cfg: CliConfig, args: argparse.Namespace) -> int:
    from src.export import dumps
    from src.projective import ProjectiveError, classify_system, limit_evaluate

    datum = _load_datum(cfg)
    zeta_values = cfg.params.get('zeta', [0] * len(datum.i_tau))
    zeta = datum.make_iweight(zeta_values)
    word = tuple(_int_list(args.word, '--word') or [])
    if any(j not in datum.indices for j in word):
        raise InputError(f"--word uses an index outside 0..{datum.rank - 1}")
    indices = [args.index] if args.index is not None else list(datum.indices)
    if any(i not in datum.indices for i in indices):
        raise InputError(f"--index must be in 0..{datum.rank - 1}")

    values = []
    ok = True
    table = Table(
        title=f"♾ T{zeta} ⊗ b{list(word)}",
        box=box.ROUNDED,
        show_header=True,
        header_style="bold magenta",
    )
    table.add_column("i", style="cyan", justify="center")
    table.add_column("B_i", style="white")
    table.add_column("β_i", style="green", justify="right")
    table.add_column("Stable from λ", style="yellow")
    for i in indices:
        try:
            value = limit_evaluate(datum, zeta, word, i, cfg.depth, confirmations=args.confirmations)
        except ProjectiveError as e:
            ok = False
            values.append({'i': i, 'ok': False, 'error': str(e)})
            table.add_row(str(i), f"[red]{e}[/red]", "", "")
            continue
        entry = value.to_json()
        entry.update({'i': i, 'ok': True})
        values.append(entry)
        action = ' + '.join(f"{a}·{list(w)}" for w, a in sorted(value.action.items())) or '0'
        table.add_row(str(i), action, repr(value.beta) if not isinstance(value.beta, int) else str(value.beta),
                      str(list(value.lam)))
    console.print(table)

    payload = {'schema': REPORT_SCHEMA, 'command': 'projective', 'datum': datum.name,
               'zeta': zeta.to_json(), 'word': list(word), 'depth': cfg.depth, 'values': values}
    lam = _int_list(args.lam, '--lam')
    nu = _int_list(args.nu, '--nu')
    if nu is not None:
        lam = tuple(lam) if lam is not None else datum.zero_weight()
        verdicts = classify_system(datum, tuple(lam), tuple(nu))
        payload['morphisms'] = {name: v.to_json() for name, v in verdicts.items()}
        ok = ok and all(verdicts[name].flags.get('very_strict') for name in ('gamma', 'rho', 'pi'))
    payload['ok'] = ok
    emit(dumps(payload), cfg.out)
    return EXIT_OK if ok else EXIT_FAILURE


HANDLERS = {
    'build': cmd_build,
    'check': cmd_check,
    'tensor': cmd_tensor,
    'induce': cmd_induce,
    'graph': cmd_graph,
    'verify-paper': cmd_verify_paper,
    'projective': cmd_projective,
}


# ──────────────────────────────────────────────────────────────
# Argument Parser
# ──────────────────────────────────────────────────────────────

def _common(p: argparse.ArgumentParser):
    p.add_argument('--datum', type=str, help='Bundled datum name (a1, a1xa1, a2_flip) or JSON path')
    p.add_argument('--config', type=str, metavar='FILE', help='JSON file with default flag values')
    p.add_argument('--params', nargs='*', metavar='K=V', help='Family parameters: JSON object or k=v tokens')
    p.add_argument('--format', choices=('json', 'dot'), help='Output format (default json)')
    p.add_argument('--cap', type=int, help='Component size cap')
    p.add_argument('--depth', type=int, help='Stabilization depth for the projective limit')
    p.add_argument('--seed', type=int, help='Seed for randomized suites')
    p.add_argument('--out', type=str, metavar='FILE', help='Write the artifact to FILE instead of stdout')


def _family_flags(p: argparse.ArgumentParser):
    p.add_argument('--family', type=str, help='Built-in crystal or ıcrystal family')
    p.add_argument('--n', type=int, help='Family parameter n')
    p.add_argument('--n-minus', dest='n_minus', type=int, help='Family parameter n_-')
    p.add_argument('--n-plus', dest='n_plus', type=int, help='Family parameter n_+')
    p.add_argument('--node', type=int, help='Node index for rank-one families')
    p.add_argument('--hw', type=str, help='Highest weight, e.g. 2,0')
    p.add_argument('--zeta', type=str, help='ıweight values, one per τ-orbit')
    p.add_argument('--weight', type=str, help='Weight for T_lambda')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="ıCrystal Engine: crystals, ıcrystals, tensor rules and their verification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py build --family bi_vee --n-minus 3 --n-plus 2
  python main.py build --family b_lambda --hw 2,0 --format dot
  python main.py check --family bi_wedge --n-minus 3 --n-plus 2 --equivalence
  python main.py tensor --datum a1 --left-family bi_rank1 --left-params n=1 --right-family B_n_rank1 --right-params n=3
  python main.py induce --datum a1xa1 --input grid.json --mode seminormal
  python main.py verify-paper --case a=-1 --case golden
  python main.py projective --datum a1xa1 --zeta 1 --word 0,1 --depth 4
        """
    )
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')

    p = sub.add_parser('build', help='Build a built-in family')
    _common(p)
    _family_flags(p)

    p = sub.add_parser('check', help='Check axioms on a family or a graph file')
    _common(p)
    _family_flags(p)
    p.add_argument('--input', type=str, metavar='FILE', help='Graph JSON file')
    p.add_argument('--equivalence', action='store_true', help='Also classify the stated equivalence of the family')

    p = sub.add_parser('tensor', help='ıcrystal ⊗ crystal')
    _common(p)
    p.add_argument('--left', type=str, metavar='FILE', help='ıcrystal JSON file')
    p.add_argument('--left-family', dest='left_family', type=str)
    p.add_argument('--left-params', dest='left_params', nargs='*', metavar='K=V')
    p.add_argument('--right', type=str, metavar='FILE', help='Crystal JSON file')
    p.add_argument('--right-family', dest='right_family', type=str)
    p.add_argument('--right-params', dest='right_params', nargs='*', metavar='K=V')

    p = sub.add_parser('induce', help='Induced ıcrystal structure on a crystal')
    _common(p)
    _family_flags(p)
    p.add_argument('--input', type=str, metavar='FILE', help='Crystal JSON file')
    p.add_argument('--mode', choices=('general', 'seminormal'), default='general')

    p = sub.add_parser('graph', help='Convert a graph file between JSON and DOT')
    _common(p)
    p.add_argument('--input', type=str, metavar='FILE', help='Graph JSON file')

    p = sub.add_parser('verify-paper', help='Run the verification suites')
    _common(p)
    p.add_argument('--case', action='append', metavar='CASE',
                   help='Suite case (repeatable): builtin, tensor, associativity, a=2, a=0, a=-1, '
                        'norms, golden, projective, limit, diagonal, s-conditions')
    p.add_argument('--workers', type=int, metavar='N', help='Worker processes (default: ICRYSTAL_SUITE_WORKERS)')

    p = sub.add_parser('projective', help='Limit values on T_zeta ⊗ B(infinity)')
    _common(p)
    p.add_argument('--zeta', type=str, help='ıweight values, one per τ-orbit')
    p.add_argument('--word', type=str, help='B(infinity) word as F-indices, e.g. 0,1,0')
    p.add_argument('--index', type=int, help='Only this index i')
    p.add_argument('--confirmations', type=int, default=2, help='Extra agreeing evaluations required')
    p.add_argument('--lam', type=str, help='lambda for the morphism classification')
    p.add_argument('--nu', type=str, help='nu for the morphism classification')
    return parser


# ──────────────────────────────────────────────────────────────
# Main Entry Point
# ──────────────────────────────────────────────────────────────

def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, validate the configuration and dispatch.

    Returns:
        0 on success, 1 on a verification failure, 2 on an input error.
    """
    from src.crystal import CrystalError
    from src.export import ExportError
    from src.icrystal import ICrystalError
    from src.itensor import ITensorError
    from src.projective import ProjectiveError
    from src.rootdata import DatumError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if not args.command:
        parser.print_help(sys.stderr)
        console.print("\n[yellow]💡 Tip: start with build --family bi_vee --n-minus 3 --n-plus 2[/yellow]")
        return EXIT_INPUT

    console.print(Panel(
        Text("ıCRYSTAL ENGINE", style="bold white", justify="center"),
        subtitle=f"{args.command} │ Datum: {args.datum or 'a2_flip'} │ Exact arithmetic over ℚ(√2) and ℚ(q)",
        border_style="bright_magenta",
        padding=(1, 4)
    ))

    try:
        cfg = build_config(args)
        return HANDLERS[cfg.command](cfg, args)
    except (InputError, DatumError, ExportError, ICrystalError, ITensorError, CrystalError,
            ProjectiveError, KeyError, ValueError) as e:
        logger.error(f"✗ {type(e).__name__}: {e}")
        console.print(Panel(f"[bold red]{e}[/bold red]", title="✗ Input error", border_style="red", padding=(0, 2)))
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
