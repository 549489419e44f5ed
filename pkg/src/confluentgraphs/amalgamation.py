"""Fiber products and projective amalgamation for confluent epimorphisms.

The standard amalgam is the plain fiber product; the connected amalgam picks
the canonically least component on which both projections are confluent
epimorphisms, and only falls back to a bounded exhaustive search if no
component qualifies (the report records which path was taken).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import NoAmalgamError
from .enumeration import connected_graphs_up_to
from .graphs import Graph, components, induced, is_connected, point_graph
from .morphisms import (
    Morphism,
    classify,
    constant,
    enumerate_confluent_epis,
    is_confluent_epi,
    restrict,
)


def pair_token(b: str, c: str) -> str:
    return f"({b},{c})"


@dataclass(frozen=True)
class AmalgamResult:
    graph: Graph
    onto_b: Morphism
    onto_c: Morphism
    via: str = "component"  # "component" or "search"


def standard_amalgam(f: Morphism, g: Morphism) -> tuple[Graph, Morphism, Morphism]:
    """Full fiber product of f: B -> A and g: C -> A with its projections.

    Vertices are the pairs agreeing over A; adjacency is coordinatewise,
    loops included implicitly.  May be disconnected and promises nothing
    about confluence.
    """
    if f.codomain != g.codomain:
        raise ValueError("amalgamation needs a common codomain")
    b, c = f.domain, g.domain
    pairs = [
        (x, y)
        for x in b.vertices
        for y in c.vertices
        if f(x) == g(y)
    ]
    tokens = {p: pair_token(*p) for p in pairs}
    edges = []
    for (x1, y1), (x2, y2) in itertools.combinations(pairs, 2):
        if b.adjacent(x1, x2) and c.adjacent(y1, y2):
            edges.append((tokens[(x1, y1)], tokens[(x2, y2)]))
    product = Graph([tokens[p] for p in pairs], edges)
    onto_b = Morphism(product, b, {tokens[p]: p[0] for p in pairs})
    onto_c = Morphism(product, c, {tokens[p]: p[1] for p in pairs})
    return product, onto_b, onto_c


def _component_candidates(product: Graph) -> list[frozenset[str]]:
    if not product.vertices:
        return []
    blocks = components(product, product.vertices)
    blocks.sort(key=lambda s: (len(s), tuple(sorted(s))))
    return blocks


def connected_amalgam(f: Morphism, g: Morphism, search_budget: int | None = None) -> AmalgamResult:
    """Connected amalgam of confluent epimorphisms with confluent projections.

    Tries the components of the fiber product in canonical order; if none
    admits confluent epimorphic projections onto both sides, runs a bounded
    exhaustive search over small connected graphs.
    """
    if not (is_confluent_epi(f) and is_confluent_epi(g)):
        raise ValueError("connected_amalgam needs confluent epimorphisms")
    product, onto_b, onto_c = standard_amalgam(f, g)
    for block in _component_candidates(product):
        comp = induced(product, block)
        pb = restrict(onto_b, block)
        pc = restrict(onto_c, block)
        if is_confluent_epi(pb) and is_confluent_epi(pc):
            return AmalgamResult(comp, pb, pc, via="component")
    return _amalgam_by_search(f, g, search_budget)


def _amalgam_by_search(f: Morphism, g: Morphism, search_budget: int | None) -> AmalgamResult:
    bound = search_budget
    if bound is None:
        bound = len(f.domain.vertices) + len(g.domain.vertices)
    for d in connected_graphs_up_to(min(bound, 8)):
        for f0 in enumerate_confluent_epis(d, f.domain):
            lhs = f.after(f0)
            for g0 in enumerate_confluent_epis(d, g.domain):
                if g.after(g0) == lhs:
                    return AmalgamResult(d, f0, g0, via="search")
    raise NoAmalgamError(
        f"no amalgam within {bound} vertices; raise the budget or report a bug"
    )


def common_refinement(b: Graph, c: Graph) -> AmalgamResult:
    """Connected graph with confluent epimorphisms onto both inputs.

    Amalgamation over the one-point graph with constant maps.
    """
    if not (is_connected(b) and is_connected(c)):
        raise ValueError("common_refinement needs connected inputs")
    a = point_graph("pt")
    return connected_amalgam(constant(b, a, "pt"), constant(c, a, "pt"))


# ---------------------------------------------------------------------------
# verification harness


@dataclass
class AmalgamCheck:
    index: int
    ok: bool
    via: str
    detail: dict


@dataclass
class AmalgamationReport:
    max_vertices: int
    sample: int
    seed: int | None
    total: int
    passed: int
    failed: int
    failures: list[dict] = field(default_factory=list)
    via_counts: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {
            "max_vertices": self.max_vertices,
            "sample": self.sample,
            "seed": self.seed,
            "total": self.total,
            "passed": self.passed,
            "failed": self.failed,
            "failures": self.failures,
            "via_counts": dict(sorted(self.via_counts.items())),
        }


def _validate_instance(f: Morphism, g: Morphism, result: AmalgamResult) -> tuple[bool, dict]:
    detail: dict = {"via": result.via, "amalgam_vertices": len(result.graph.vertices)}
    d = result.graph
    ok = bool(d.vertices) and is_connected(d)
    detail["connected"] = ok
    cls_b = classify(result.onto_b)
    cls_c = classify(result.onto_c)
    detail["onto_b_confluent_epi"] = cls_b.epimorphism and cls_b.confluent
    detail["onto_c_confluent_epi"] = cls_c.epimorphism and cls_c.confluent
    ok = ok and detail["onto_b_confluent_epi"] and detail["onto_c_confluent_epi"]
    commutes = all(
        f(result.onto_b(v)) == g(result.onto_c(v)) for v in d.vertices
    )
    detail["commutes"] = commutes
    return ok and commutes, detail


def verify_amalgamation(
    max_vertices: int, sample: int = 0, seed: int | None = None
) -> AmalgamationReport:
    """Exercise connected_amalgam over triples of small graphs.

    With ``sample`` = 0 every instance is checked; otherwise a deterministic
    seeded sample of that size is drawn from the enumerated instance list.
    """
    if max_vertices < 1:
        raise ValueError("max_vertices must be positive")
    if sample and seed is None:
        raise ValueError("sampled verification requires an explicit seed")
    graphs = connected_graphs_up_to(max_vertices)
    epis: dict[tuple[int, int], list[Morphism]] = {}
    for i, src in enumerate(graphs):
        for j, dst in enumerate(graphs):
            if len(src.vertices) < len(dst.vertices):
                continue
            epis[(i, j)] = enumerate_confluent_epis(src, dst)

    instances: list[tuple[Morphism, Morphism]] = []
    for j, _a in enumerate(graphs):
        for ib in range(len(graphs)):
            for f in epis.get((ib, j), ()):
                for ic in range(len(graphs)):
                    for g in epis.get((ic, j), ()):
                        instances.append((f, g))

    if sample and sample < len(instances):
        rng = random.Random(seed)
        chosen = sorted(rng.sample(range(len(instances)), sample))
        instances = [instances[i] for i in chosen]

    report = AmalgamationReport(
        max_vertices=max_vertices,
        sample=sample,
        seed=seed,
        total=len(instances),
        passed=0,
        failed=0,
    )
    for idx, (f, g) in enumerate(instances):
        try:
            result = connected_amalgam(f, g)
        except NoAmalgamError as exc:
            report.failed += 1
            report.failures.append({"index": idx, "error": str(exc)})
            continue
        ok, detail = _validate_instance(f, g, result)
        report.via_counts[result.via] = report.via_counts.get(result.via, 0) + 1
        if ok:
            report.passed += 1
        else:
            report.failed += 1
            report.failures.append(
                {
                    "index": idx,
                    "detail": detail,
                    "f": {v: f(v) for v in f.domain.vertices},
                    "g": {v: g(v) for v in g.domain.vertices},
                }
            )
    return report
