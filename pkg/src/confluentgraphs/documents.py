"""JSON document formats and deterministic serialization.

Graph documents: {"vertices": [...], "edges": [[u, v], ...]} with distinct
tokens, no loops, no dangling endpoints.  Morphism documents reference their
graphs inline or by file path.  All dumps are canonical: sorted keys, two
space indent, trailing newline, so identical inputs give identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .graphs import Graph, OrientedCycle
from .morphisms import Morphism
from .sequences import InverseSequence, LedgerEntry


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# graphs


def graph_to_doc(g: Graph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.sorted_edges()]}


def graph_from_doc(doc: dict) -> Graph:
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise ValueError("graph document needs a 'vertices' array")
    vertices = doc["vertices"]
    edges = doc.get("edges", [])
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise ValueError("'vertices' must be an array of string tokens")
    pairs = []
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2):
            raise ValueError(f"malformed edge entry {e!r}")
        pairs.append((e[0], e[1]))
    return Graph(vertices, pairs)


def load_graph(path: str | Path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_doc(json.load(fh))


# ---------------------------------------------------------------------------
# oriented cycles


def cycle_to_doc(c: OrientedCycle) -> dict:
    doc = graph_to_doc(c.graph)
    doc["orientation"] = list(c.order)
    return doc


def cycle_from_doc(doc: dict) -> OrientedCycle:
    if "orientation" not in doc:
        raise ValueError("cycle document needs an 'orientation' array")
    g = graph_from_doc(doc)
    order = doc["orientation"]
    cyc = OrientedCycle(order)
    if cyc.graph != g:
        raise ValueError("orientation does not match the declared edges")
    return cyc


def load_cycle(path: str | Path) -> OrientedCycle:
    with open(path, "r", encoding="utf-8") as fh:
        return cycle_from_doc(json.load(fh))


# ---------------------------------------------------------------------------
# morphisms


def morphism_to_doc(f: Morphism) -> dict:
    return {
        "domain": graph_to_doc(f.domain),
        "codomain": graph_to_doc(f.codomain),
        "map": [[v, f(v)] for v in f.domain.vertices],
    }


def _resolve_graph(side: Any, base_dir: Path | None) -> Graph:
    if isinstance(side, str):
        path = Path(side)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return load_graph(path)
    return graph_from_doc(side)


def morphism_from_doc(doc: dict, base_dir: Path | None = None) -> Morphism:
    for key in ("domain", "codomain", "map"):
        if key not in doc:
            raise ValueError(f"morphism document needs '{key}'")
    domain = _resolve_graph(doc["domain"], base_dir)
    codomain = _resolve_graph(doc["codomain"], base_dir)
    mapping = {}
    for entry in doc["map"]:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ValueError(f"malformed map entry {entry!r}")
        src, dst = entry
        if src in mapping and mapping[src] != dst:
            raise ValueError(f"conflicting images for {src!r}")
        mapping[src] = dst
    return Morphism(domain, codomain, mapping)


def load_morphism(path: str | Path) -> Morphism:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        return morphism_from_doc(json.load(fh), base_dir=path.parent)


# ---------------------------------------------------------------------------
# inverse sequences


def sequence_to_doc(seq: InverseSequence) -> dict:
    doc: dict = {
        "levels": [graph_to_doc(g) for g in seq.levels],
        "bonds": [[[v, bond(v)] for v in bond.domain.vertices] for bond in seq.bonds],
        "ledger": [
            {
                "level": e.level,
                "task": e.task_id,
                "demand_level": e.demand_level,
                "demand_graph": graph_to_doc(e.witness.codomain),
                "witness": [[v, e.witness(v)] for v in e.witness.domain.vertices],
            }
            for e in seq.ledger
        ],
    }
    if seq.thread is not None:
        doc["thread"] = list(seq.thread)
    return doc


def sequence_from_doc(doc: dict) -> InverseSequence:
    levels = [graph_from_doc(d) for d in doc["levels"]]
    bonds = []
    for i, entries in enumerate(doc.get("bonds", [])):
        mapping = {src: dst for src, dst in entries}
        bonds.append(Morphism(levels[i + 1], levels[i], mapping))
    ledger = []
    for e in doc.get("ledger", []):
        witness_map = {src: dst for src, dst in e["witness"]}
        ledger.append(
            LedgerEntry(
                level=e["level"],
                task_id=e["task"],
                demand_level=e["demand_level"],
                witness=Morphism(
                    levels[e["level"]],
                    graph_from_doc(e["demand_graph"]),
                    witness_map,
                ),
            )
        )
    thread = doc.get("thread")
    return InverseSequence(levels, bonds, thread=thread, ledger=ledger)


def dump(path: str | Path, doc: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))
