# src/export.py — JSON and DOT Serialization of Crystals and ıCrystals
"""
Deterministic serialization.

Responsibilities:
    1. crystal_to_json / crystal_from_json
    2. icrystal_to_json / icrystal_from_json: sparse "btil" entries
       {i, source, target, amplitude} for i in I_tau only; B_tau(i) is
       rebuilt by Hermitian symmetry
    3. crystal_to_dot / icrystal_to_dot (edge labels i, or "(i, z)")
    4. dumps: canonical JSON text (sorted keys, stable indentation)
"""

import json
import logging
from typing import Dict, List

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import REPORT_SCHEMA

from src.crystal import CrystalGraph
from src.extint import ext_from_json, ext_to_json
from src.icrystal import ICrystalGraph
from src.rootdata import IWeight, datum_to_json, validate_datum
from src.sqrt2 import ONE, Sqrt2Scalar

logger = logging.getLogger(__name__)

FORMATS = ('json', 'dot')


class ExportError(ValueError):
    """Unsupported format or malformed serialized graph."""


def dumps(payload: Dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def _freeze(key):
    if isinstance(key, list):
        return tuple(_freeze(k) for k in key)
    return key


# ──────────────────────────────────────────────────────────────
# Crystals
# ──────────────────────────────────────────────────────────────

def crystal_to_json(B: CrystalGraph) -> Dict:
    elements = []
    for b in B.elements:
        elements.append({
            'id': b,
            'key': B.keys[b],
            'label': B.labels[b],
            'wt': list(B.wt[b]),
            'eps': [ext_to_json(x) for x in B.eps[b]],
            'phi': [ext_to_json(x) for x in B.phi[b]],
        })
    edges = [
        {'i': i, 'source': b, 'target': B.f[b][i]}
        for b in B.elements for i in B.datum.indices if B.f[b][i] is not None
    ]
    return {'schema': REPORT_SCHEMA, 'kind': 'crystal', 'name': B.name,
            'datum': datum_to_json(B.datum), 'elements': elements, 'edges': edges}


def crystal_from_json(payload: Dict) -> CrystalGraph:
    """
    Rebuild a crystal; E_i is recovered as the inverse of F_i.

    Raises:
        ExportError: If the payload is not a crystal.
    """
    if payload.get('kind') != 'crystal':
        raise ExportError(f"expected kind 'crystal', got {payload.get('kind')!r}")
    datum = validate_datum(payload['datum'])
    elems = sorted(payload['elements'], key=lambda e: e['id'])
    n = len(elems)
    e = [[None] * datum.rank for _ in range(n)]
    f = [[None] * datum.rank for _ in range(n)]
    for edge in payload['edges']:
        f[edge['source']][edge['i']] = edge['target']
        e[edge['target']][edge['i']] = edge['source']
    return CrystalGraph(
        datum,
        [_freeze(x['key']) for x in elems],
        [x['label'] for x in elems],
        [tuple(x['wt']) for x in elems],
        [tuple(ext_from_json(v) for v in x['eps']) for x in elems],
        [tuple(ext_from_json(v) for v in x['phi']) for x in elems],
        [tuple(row) for row in e],
        [tuple(row) for row in f],
        name=payload.get('name', ''),
    )


def crystal_to_dot(B: CrystalGraph) -> str:
    lines = [f'digraph "{B.name or "crystal"}" {{', '\trankdir=LR;']
    for b in B.elements:
        lines.append(f'\t"{b}" [label="{B.labels[b]}"];')
    for b in B.elements:
        for i in B.datum.indices:
            t = B.f[b][i]
            if t is not None:
                lines.append(f'\t"{b}" -> "{t}" [label="{B.datum.label(i)}"];')
    lines.append('}')
    return '\n'.join(lines) + '\n'


# ──────────────────────────────────────────────────────────────
# ıCrystals
# ──────────────────────────────────────────────────────────────

def icrystal_to_json(B: ICrystalGraph) -> Dict:
    elements = []
    for b in B.elements:
        elements.append({
            'id': b,
            'key': B.keys[b],
            'label': B.labels[b],
            'wti': B.wti[b].to_json(),
            'beta': [ext_to_json(x) for x in B.beta[b]],
        })
    btil = [
        {'i': i, 'source': b, 'target': t, 'amplitude': amp.to_json()}
        for i, b, t, amp in B.edges()
    ]
    return {'schema': REPORT_SCHEMA, 'kind': 'icrystal', 'name': B.name,
            'datum': datum_to_json(B.datum), 'elements': elements, 'btil': btil}


def icrystal_from_json(payload: Dict) -> ICrystalGraph:
    """
    Rebuild an ıcrystal from its I_tau edges.

    B_tau(i) for i in I_tau with tau(i) ≠ i is the transpose of B_i.

    Raises:
        ExportError: If the payload is not an ıcrystal or an edge uses an
                     index outside I_tau.
    """
    if payload.get('kind') != 'icrystal':
        raise ExportError(f"expected kind 'icrystal', got {payload.get('kind')!r}")
    datum = validate_datum(payload['datum'])
    elems = sorted(payload['elements'], key=lambda e: e['id'])
    n = len(elems)
    btil: List[List[Dict[int, Sqrt2Scalar]]] = [[{} for _ in range(n)] for _ in datum.indices]
    for edge in payload['btil']:
        i = edge['i']
        if i not in datum.i_tau:
            raise ExportError(f"edge label {i} is not in I_tau")
        amp = Sqrt2Scalar.from_json(edge['amplitude'])
        btil[i][edge['source']][edge['target']] = amp
        if datum.tau[i] != i:
            btil[datum.tau[i]][edge['target']][edge['source']] = amp
    mask = datum.iweight_mask()
    return ICrystalGraph(
        datum,
        [_freeze(x['key']) for x in elems],
        [x['label'] for x in elems],
        [IWeight(tuple(x['wti']), mask) for x in elems],
        [tuple(ext_from_json(v) for v in x['beta']) for x in elems],
        btil,
        name=payload.get('name', ''),
    )


def icrystal_to_dot(B: ICrystalGraph) -> str:
    lines = [f'digraph "{B.name or "icrystal"}" {{', '\trankdir=LR;']
    for b in B.elements:
        lines.append(f'\t"{b}" [label="{B.labels[b]}"];')
    for i, b, t, amp in B.edges():
        label = B.datum.label(i) if amp == ONE else f"({B.datum.label(i)}, {amp})"
        lines.append(f'\t"{b}" -> "{t}" [label="{label}"];')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def export_graph(B, fmt: str) -> str:
    """
    Serialize a crystal or ıcrystal.

    Raises:
        ExportError: For formats other than json and dot.
    """
    if fmt not in FORMATS:
        raise ExportError(f"unsupported format '{fmt}' (expected one of {', '.join(FORMATS)})")
    if isinstance(B, ICrystalGraph):
        return dumps(icrystal_to_json(B)) if fmt == 'json' else icrystal_to_dot(B)
    return dumps(crystal_to_json(B)) if fmt == 'json' else crystal_to_dot(B)


def import_graph(text: str):
    payload = json.loads(text)
    if payload.get('kind') == 'icrystal':
        return icrystal_from_json(payload)
    return crystal_from_json(payload)
