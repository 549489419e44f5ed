"""Command-line surface.

Reports are machine-readable JSON documents written to stdout (or --output);
human inspection goes through --dot.  Exit codes: 0 success/verified,
1 property violation found, 2 usage or parse error, 3 budget exceeded.
All outputs are byte-identical for identical inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import BudgetExceededError, NoAmalgamError
from .graphs import (
    OrientedCycle,
    find_cycle_division,
    induced,
    is_adjacently_disconnecting,
    is_hereditarily_unicoherent,
    to_dot,
)
from .morphisms import Morphism, classify, lift_arc, lift_cycle, restrict
from .amalgamation import (
    common_refinement,
    connected_amalgam,
    standard_amalgam,
    verify_amalgamation,
)
from .constructions import (
    attach_cycle_vertex,
    delta_double,
    double_cycle,
    extend_confluent,
    indecomposability_witness,
    kernel_component,
    split_edge,
    two_edge_lift_witnesses,
    unfold,
    unicoherence_witness,
    wrap_copies,
)
from .cycles import (
    WitnessPair,
    compose_witness,
    cycle_amalgam,
    find_confluent_witness,
    is_almost_wrapping,
    winding_number,
)
from .sequences import (
    build_fraisse_prefix,
    check_sharp,
    is_almost_graph_solenoid_prefix,
    thread_fibers,
    verify_fraisse_prefix,
)
from .documents import (
    canonical_json,
    cycle_from_doc,
    cycle_to_doc,
    graph_from_doc,
    graph_to_doc,
    load_cycle,
    load_graph,
    load_morphism,
    morphism_to_doc,
    sequence_from_doc,
    sequence_to_doc,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class _CliError(Exception):
    pass


def _write(args, doc, dot_graphs=None) -> None:
    text = canonical_json(doc)
    if getattr(args, "dot", False) and dot_graphs:
        text += "".join(to_dot(g, name) for name, g in dot_graphs)
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _morphism_doc_out(f: Morphism) -> dict:
    return morphism_to_doc(f)


# ---------------------------------------------------------------------------
# check


def _cmd_check(args) -> int:
    prop = args.property
    if prop in {"hom", "epi", "monotone", "confluent"}:
        f = load_morphism(args.input)
        cls = classify(f)
        doc = cls.flags()
        key = {"hom": "homomorphism", "epi": "epimorphism"}.get(prop, prop)
        doc["checked"] = key
        ok = doc[key]
        if not ok:
            witness = {
                "homomorphism": cls.homomorphism_failure,
                "epimorphism": cls.epimorphism_failure,
                "monotone": cls.monotone_failure,
                "confluent": cls.confluence_failure,
            }[key]
            if witness is not None:
                head, tail = witness
                doc["witness"] = {
                    "at": list(head),
                    "detail": sorted(tail) if isinstance(tail, frozenset) else tail,
                }
        _write(args, doc, [("domain", f.domain), ("codomain", f.codomain)])
        return EXIT_OK if ok else EXIT_VIOLATION
    if prop == "cycle-division":
        g = load_graph(args.input)
        div = find_cycle_division(g, max_vertices=args.bound)
        doc = {"cycle_division_found": div is not None}
        if div is not None:
            doc["division"] = {
                "H": sorted(div.h),
                "K": sorted(div.k),
                "C": sorted(div.c),
                "D": sorted(div.d),
            }
        _write(args, doc, [("G", g)])
        return EXIT_VIOLATION if div is not None else EXIT_OK
    if prop == "heruni":
        g = load_graph(args.input)
        ok = is_hereditarily_unicoherent(g, max_vertices=args.bound)
        _write(args, {"hereditarily_unicoherent": ok}, [("G", g)])
        return EXIT_OK if ok else EXIT_VIOLATION
    if prop == "adj-disc":
        g = load_graph(args.input)
        tset = args.subset.split(",") if args.subset else []
        ok = is_adjacently_disconnecting(g, tset)
        _write(args, {"adjacently_disconnecting": ok, "T": sorted(tset)}, [("G", g)])
        return EXIT_OK if ok else EXIT_VIOLATION
    raise _CliError(f"unknown check {prop!r}")


# ---------------------------------------------------------------------------
# amalgamate


def _cmd_amalgamate(args) -> int:
    kind = args.kind
    if kind == "standard":
        f = load_morphism(args.first)
        g = load_morphism(args.second)
        product, pb, pc = standard_amalgam(f, g)
        doc = {
            "graph": graph_to_doc(product),
            "onto_b": _morphism_doc_out(pb),
            "onto_c": _morphism_doc_out(pc),
        }
        _write(args, doc, [("amalgam", product)])
        return EXIT_OK
    if kind == "connected":
        f = load_morphism(args.first)
        g = load_morphism(args.second)
        result = connected_amalgam(f, g)
        doc = {
            "graph": graph_to_doc(result.graph),
            "onto_b": _morphism_doc_out(result.onto_b),
            "onto_c": _morphism_doc_out(result.onto_c),
            "via": result.via,
        }
        _write(args, doc, [("amalgam", result.graph)])
        return EXIT_OK
    if kind == "refine":
        b = load_graph(args.first)
        c = load_graph(args.second)
        result = common_refinement(b, c)
        doc = {
            "graph": graph_to_doc(result.graph),
            "onto_b": _morphism_doc_out(result.onto_b),
            "onto_c": _morphism_doc_out(result.onto_c),
            "via": result.via,
        }
        _write(args, doc, [("refinement", result.graph)])
        return EXIT_OK
    if kind == "verify":
        report = verify_amalgamation(args.max_vertices, sample=args.sample, seed=args.seed)
        _write(args, report.to_doc())
        return EXIT_OK if report.failed == 0 else EXIT_VIOLATION
    raise _CliError(f"unknown amalgamation {kind!r}")


# ---------------------------------------------------------------------------
# construct


def _cmd_construct(args) -> int:
    kind = args.kind
    if kind == "split-edge":
        g = load_graph(args.input)
        h, f, s = split_edge(g, args.a, args.b, map_to_source=args.paper_literal)
        violations = []
        for c in sorted(g.neighbors(args.b)):
            if c != args.a:
                violations.extend(two_edge_lift_witnesses(f, args.a, args.b, c))
        doc = {
            "graph": graph_to_doc(h),
            "projection": _morphism_doc_out(f),
            "new_vertex": s,
            "two_edge_lift_violations": [list(v) for v in violations],
        }
        _write(args, doc, [("split", h)])
        return EXIT_VIOLATION if violations else EXIT_OK
    if kind == "indec":
        g = load_graph(args.input)
        w, f = indecomposability_witness(g)
        doc = {"graph": graph_to_doc(w), "projection": _morphism_doc_out(f)}
        _write(args, doc, [("witness", w)])
        return EXIT_OK
    if kind == "delta":
        g = load_graph(args.input)
        w, f = delta_double(g, args.at)
        doc = {"graph": graph_to_doc(w), "projection": _morphism_doc_out(f)}
        _write(args, doc, [("doubled", w)])
        return EXIT_OK
    if kind == "extend":
        f = load_morphism(args.first)
        g = load_graph(args.second)
        h, fstar = extend_confluent(f, g)
        doc = {"graph": graph_to_doc(h), "projection": _morphism_doc_out(fstar)}
        _write(args, doc, [("extended", h)])
        return EXIT_OK
    if kind == "unfold":
        g = load_graph(args.input)
        chain = [part.split(",") for part in args.chain.split(";")]
        result = unfold(g, chain)
        doc = {
            "graph": graph_to_doc(result.graph),
            "projection": _morphism_doc_out(result.projection),
            "kernel": sorted(result.kernel),
            "layers": [sorted(layer) for layer in result.layers],
            "copies": [
                {
                    "id": c.copy_id,
                    "layer": c.layer,
                    "level": c.level,
                    "attach": list(c.attach_edge) if c.attach_edge else None,
                }
                for c in result.copies
            ],
            "kernel_components_adjacently_disconnecting": [
                is_adjacently_disconnecting(result.graph, kernel_component(result, k))
                for k in range(len(result.chain))
            ],
        }
        _write(args, doc, [("unfolding", result.graph)])
        return EXIT_OK
    if kind == "heruni":
        g = load_graph(args.input)
        div = find_cycle_division(g, max_vertices=args.bound)
        if div is None:
            raise _CliError("input graph has no cycle division to witness against")
        w, alpha = unicoherence_witness(g, div)
        doc = {
            "graph": graph_to_doc(w),
            "projection": _morphism_doc_out(alpha),
            "division": {
                "H": sorted(div.h),
                "K": sorted(div.k),
                "C": sorted(div.c),
                "D": sorted(div.d),
            },
        }
        _write(args, doc, [("witness", w)])
        return EXIT_OK
    if kind == "wrap":
        g = load_graph(args.input)
        cyc = load_cycle(args.cycle)
        b, f, d = wrap_copies(g, cyc, args.m)
        doc = {
            "graph": graph_to_doc(b),
            "projection": _morphism_doc_out(f),
            "cycle": cycle_to_doc(d),
            "winding": winding_number(restrict(f, d.order, cyc.order)),
        }
        _write(args, doc, [("wrapped", b)])
        return EXIT_OK
    if kind == "attach":
        g = load_graph(args.input)
        b, f, new_vertex = attach_cycle_vertex(g, args.a, args.b)
        doc = {
            "graph": graph_to_doc(b),
            "projection": _morphism_doc_out(f),
            "new_vertex": new_vertex,
        }
        _write(args, doc, [("attached", b)])
        return EXIT_OK
    if kind == "double":
        g = load_graph(args.input)
        cyc = load_cycle(args.cycle)
        b, f, d = double_cycle(g, cyc)
        doc = {
            "graph": graph_to_doc(b),
            "projection": _morphism_doc_out(f),
            "cycle": cycle_to_doc(d),
            "winding": winding_number(restrict(f, d.order, cyc.order)),
        }
        _write(args, doc, [("doubled", b)])
        return EXIT_OK
    raise _CliError(f"unknown construction {kind!r}")


# ---------------------------------------------------------------------------
# lift


def _cmd_lift(args) -> int:
    f = load_morphism(args.morphism)
    if args.kind == "arc":
        arc = args.arc.split(",")
        lifted = lift_arc(f, arc, args.at)
        doc = {"arc": list(lifted), "end": args.at}
        _write(args, doc, [("domain", f.domain)])
        return EXIT_OK
    if args.kind == "cycle":
        cyc = load_cycle(args.cycle)
        lifted = lift_cycle(f, cyc)
        doc = {"cycle": cycle_to_doc(lifted)}
        _write(args, doc, [("domain", f.domain)])
        return EXIT_OK
    raise _CliError(f"unknown lift {args.kind!r}")


# ---------------------------------------------------------------------------
# cycles


def _cmd_cycles(args) -> int:
    kind = args.kind
    if kind == "winding":
        f = load_morphism(args.morphism)
        _write(args, {"winding": winding_number(f)})
        return EXIT_OK
    if kind == "almost":
        w = load_morphism(args.morphism)
        dom = load_cycle(args.domain_cycle)
        cod = load_cycle(args.codomain_cycle)
        ok, quad = is_almost_wrapping(w, dom, cod)
        doc = {"almost_wrapping": ok}
        if quad is not None:
            doc["violation"] = {"x": quad[0], "z": quad[1], "a": quad[2], "c": quad[3]}
        _write(args, doc)
        return EXIT_OK if ok else EXIT_VIOLATION
    if kind == "witness":
        w = load_morphism(args.morphism)
        dom = load_cycle(args.domain_cycle)
        cod = load_cycle(args.codomain_cycle)
        f = find_confluent_witness(w, dom, cod, require_proper=args.proper)
        doc = {"witness_found": f is not None}
        if f is not None:
            doc["witness"] = _morphism_doc_out(f)
            doc["winding"] = winding_number(f)
        _write(args, doc)
        return EXIT_OK if f is not None else EXIT_VIOLATION
    if kind == "compose":
        w1 = load_morphism(args.outer)
        w2 = load_morphism(args.inner)
        cod = load_cycle(args.codomain_cycle)
        mid = load_cycle(args.middle_cycle)
        dom = load_cycle(args.domain_cycle)
        f1 = find_confluent_witness(w1, mid, cod, require_proper=True)
        f2 = find_confluent_witness(w2, dom, mid, require_proper=True)
        if f1 is None or f2 is None:
            raise _CliError("inputs do not admit proper confluent witnesses")
        pair = compose_witness(WitnessPair(mid, cod, w1, f1), WitnessPair(dom, mid, w2, f2))
        doc = {
            "composite": _morphism_doc_out(pair.w),
            "witness": _morphism_doc_out(pair.f),
            "proper": pair.proper,
            "winding": pair.winding(),
        }
        _write(args, doc)
        return EXIT_OK
    if kind == "amalgam":
        f = load_morphism(args.first)
        g = load_morphism(args.second)
        result = cycle_amalgam(f, g)
        doc = {
            "graph": graph_to_doc(result.graph),
            "onto_b": _morphism_doc_out(result.onto_b),
            "onto_c": _morphism_doc_out(result.onto_c),
            "windings": {
                "onto_b": winding_number(result.onto_b),
                "onto_c": winding_number(result.onto_c),
            },
        }
        _write(args, doc, [("amalgam", result.graph)])
        return EXIT_OK
    raise _CliError(f"unknown cycles command {kind!r}")


# ---------------------------------------------------------------------------
# sequence


def _cmd_sequence(args) -> int:
    kind = args.kind
    if kind == "build":
        seq = build_fraisse_prefix(args.task_bound, args.depth)
        _write(args, sequence_to_doc(seq))
        return EXIT_OK
    seq = sequence_from_doc(json.loads(Path(args.input).read_text(encoding="utf-8")))
    if kind == "verify":
        report = verify_fraisse_prefix(seq, args.task_bound)
        _write(args, report.to_doc())
        return EXIT_OK if report.all_satisfied else EXIT_VIOLATION
    if kind == "sharp":
        _write(args, check_sharp(seq))
        return EXIT_OK
    if kind == "fibers":
        _write(args, thread_fibers(seq, args.level_from, args.level_to))
        return EXIT_OK
    if kind == "solenoid":
        ok, diag = is_almost_graph_solenoid_prefix(seq)
        _write(args, {"almost_graph_solenoid_prefix": ok, "diagnostics": diag})
        return EXIT_OK if ok else EXIT_VIOLATION
    raise _CliError(f"unknown sequence command {kind!r}")


# ---------------------------------------------------------------------------
# export


def _cmd_export(args) -> int:
    g = load_graph(args.input)
    text = to_dot(g, args.name)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--dot", action="store_true", help="append DOT renderings of the graphs involved")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confluentgraphs",
        description="Finite confluent-epimorphism combinatorics on reflexive graphs",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify a morphism or test a graph property")
    p.add_argument("property", choices=["hom", "epi", "monotone", "confluent", "cycle-division", "heruni", "adj-disc"])
    p.add_argument("--input", "-i", required=True, help="morphism or graph document")
    p.add_argument("--subset", help="comma-separated vertex subset (adj-disc)")
    p.add_argument("--bound", type=int, default=16, help="exhaustive-search vertex bound")
    _add_common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("amalgamate", help="fiber products and amalgamation")
    p.add_argument("kind", choices=["standard", "connected", "refine", "verify"])
    p.add_argument("--first", help="first morphism (or graph for refine)")
    p.add_argument("--second", help="second morphism (or graph for refine)")
    p.add_argument("--max-vertices", type=int, default=3, help="bound for verify")
    p.add_argument("--sample", type=int, default=0, help="sample size for verify (0 = exhaustive)")
    p.add_argument("--seed", type=int, help="seed for sampled verify")
    _add_common(p)
    p.set_defaults(func=_cmd_amalgamate)

    p = sub.add_parser("construct", help="witness constructions")
    p.add_argument("kind", choices=["split-edge", "indec", "delta", "extend", "unfold", "heruni", "wrap", "attach", "double"])
    p.add_argument("--input", "-i", help="input graph document")
    p.add_argument("--first", help="morphism document (extend)")
    p.add_argument("--second", help="host graph document (extend)")
    p.add_argument("--a", help="first vertex argument")
    p.add_argument("--b", help="second vertex argument")
    p.add_argument("--at", help="gluing vertex (delta)")
    p.add_argument("--chain", help="unfolding chain: sets 'a,b;a,b,c;...'")
    p.add_argument("--cycle", help="oriented cycle document (wrap, double)")
    p.add_argument("--m", type=int, default=2, help="copy count (wrap)")
    p.add_argument("--bound", type=int, default=16, help="division search bound (heruni)")
    p.add_argument(
        "--paper-literal",
        action="store_true",
        help="use the alternate split-edge image f(s)=a, which fails the separation premise",
    )
    _add_common(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("lift", help="lift arcs and cycles through a confluent epimorphism")
    p.add_argument("kind", choices=["arc", "cycle"])
    p.add_argument("--morphism", "-f", required=True)
    p.add_argument("--arc", help="comma-separated codomain arc (lift arc)")
    p.add_argument("--at", help="domain end-vertex (lift arc)")
    p.add_argument("--cycle", help="codomain cycle document (lift cycle)")
    _add_common(p)
    p.set_defaults(func=_cmd_lift)

    p = sub.add_parser("cycles", help="winding numbers, wrapping maps, witnesses")
    p.add_argument("kind", choices=["winding", "almost", "witness", "compose", "amalgam"])
    p.add_argument("--morphism", "-f", help="morphism document")
    p.add_argument("--domain-cycle", help="oriented domain cycle document")
    p.add_argument("--codomain-cycle", help="oriented codomain cycle document")
    p.add_argument("--middle-cycle", help="oriented middle cycle document (compose)")
    p.add_argument("--outer", help="outer almost wrapping map (compose)")
    p.add_argument("--inner", help="inner almost wrapping map (compose)")
    p.add_argument("--first", help="first wrapping map (amalgam)")
    p.add_argument("--second", help="second wrapping map (amalgam)")
    p.add_argument("--proper", action="store_true", help="require a proper witness")
    _add_common(p)
    p.set_defaults(func=_cmd_cycles)

    p = sub.add_parser("sequence", help="inverse-sequence prefixes")
    p.add_argument("kind", choices=["build", "verify", "sharp", "fibers", "solenoid"])
    p.add_argument("--input", "-i", help="sequence document (all but build)")
    p.add_argument("--task-bound", type=int, default=3)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--level-from", type=int, default=0)
    p.add_argument("--level-to", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_sequence)

    p = sub.add_parser("export", help="export a graph document")
    p.add_argument("format", choices=["dot"])
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--name", default="G")
    p.add_argument("--output", "-o")
    p.set_defaults(func=_cmd_export)

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        sys.stderr.write(canonical_json({"error": "budget-exceeded", "detail": str(exc)}))
        return EXIT_BUDGET
    except NoAmalgamError as exc:
        sys.stderr.write(canonical_json({"error": "no-amalgam", "detail": str(exc)}))
        return EXIT_BUDGET
    except (_CliError, ValueError, KeyError, OSError, json.JSONDecodeError, IndexError) as exc:
        sys.stderr.write(canonical_json({"error": "usage", "detail": str(exc)}))
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
