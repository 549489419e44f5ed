"""Graph-building constructions, each returning the new graph with a
confluent epimorphism back onto its input.

Copy vertices are composite tokens ``orig@index`` so the projection stays
readable; every construction also returns the projection as an explicit
morphism, so nothing ever needs to be parsed back.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import (
    CycleDivision,
    Graph,
    OrientedCycle,
    check_vertices,
    component_of,
    components,
    connected_subsets,
    induced,
    is_connected,
    is_connected_set,
    is_cycle_division,
)
from .morphisms import Morphism, is_confluent_epi


def copy_token(v: str, i: int) -> str:
    return f"{v}@{i}"


def _fresh_token(taken: Iterable[str], base: str) -> str:
    taken = set(taken)
    tok = base
    while tok in taken:
        tok += "'"
    return tok


# ---------------------------------------------------------------------------
# edge splitting


def split_edge(
    g: Graph, a: str, b: str, map_to_source: bool = False
) -> tuple[Graph, Morphism, str]:
    """Subdivide the edge <a,b> with a fresh vertex s and project it back.

    The projection sends s to b, which makes the subdivided graph separate
    every lifted two-edge chain over (a, b, c).  ``map_to_source`` switches to
    f(s) = a, which fails that separation whenever some <b,c> is an edge;
    kept so the defect is demonstrable.
    """
    if not g.has_edge(a, b):
        raise ValueError(f"<{a},{b}> is not an edge")
    s = _fresh_token(g.vertices, "s")
    edges = [e for e in g.sorted_edges() if frozenset(e) != frozenset((a, b))]
    edges += [(a, s), (s, b)]
    h = Graph(list(g.vertices) + [s], edges)
    mapping = {v: v for v in g.vertices}
    mapping[s] = a if map_to_source else b
    return h, Morphism(h, g, mapping), s


def two_edge_lift_witnesses(
    f: Morphism, a: str, b: str, c: str
) -> list[tuple[str, str, str]]:
    """Triples (p, q, r) over (a, b, c) whose both lifted edges survive.

    Empty means the domain separates the chain a-b-c: no p in the fiber of a,
    q over b, r over c with both <p,q> and <q,r> present.
    """
    h = f.domain
    out = []
    for q in sorted(f.fiber(b)):
        for p in sorted(f.fiber(a)):
            if not h.has_edge(p, q):
                continue
            for r in sorted(f.fiber(c)):
                if h.has_edge(q, r):
                    out.append((p, q, r))
    return out


# ---------------------------------------------------------------------------
# indecomposability witness


def indecomposability_witness(f_graph: Graph) -> tuple[Graph, Morphism]:
    """Chain of 2n+1 copies of the input linked along its n edges.

    Any two connected subgraphs covering the result have the property that at
    least one of them projects onto every input vertex, which is the finite
    engine behind indecomposability of the limit.
    """
    if not is_connected(f_graph):
        raise ValueError("input must be connected")
    edge_list = f_graph.sorted_edges()
    n = len(edge_list)
    if n == 0:
        raise ValueError("input must have at least one nondegenerate edge")
    copies = range(1, 2 * n + 2)
    verts = [copy_token(v, i) for i in copies for v in f_graph.vertices]
    edges = [
        (copy_token(u, i), copy_token(v, i)) for i in copies for u, v in edge_list
    ]
    for idx, (a_i, b_i) in enumerate(edge_list, start=1):
        edges.append((copy_token(a_i, idx), copy_token(b_i, idx + 1)))
        edges.append((copy_token(a_i, n + idx), copy_token(b_i, n + idx + 1)))
    g = Graph(verts, edges)
    proj = Morphism(
        g, f_graph, {copy_token(v, i): v for i in copies for v in f_graph.vertices}
    )
    return g, proj


def two_pass_violations_exhaustive(f: Morphism) -> list[tuple[frozenset, frozenset]]:
    """All pairs of connected sets covering the domain where neither side
    projects onto the whole codomain.  Exponential; for small domains only."""
    g = f.domain
    target = frozenset(f.codomain.vertices)
    subs = [s for s in connected_subsets(g) if f.image(s) != target]
    full = frozenset(g.vertices)
    out = []
    for s1 in subs:
        for s2 in subs:
            if s1 | s2 == full:
                out.append((s1, s2))
    return out


def two_pass_violations_pruned(f: Morphism) -> list[tuple[frozenset, frozenset]]:
    """Component-based equivalent of the exhaustive cover check.

    A violating pair exists iff for some codomain vertices x != y a component
    of the domain minus the fiber of x and one minus the fiber of y jointly
    cover the domain; maximality makes checking components sufficient.
    """
    g = f.domain
    full = frozenset(g.vertices)
    comps = {}
    for x in f.codomain.vertices:
        rest = full - f.fiber(x)
        comps[x] = components(g, rest) if rest else []
    out = []
    for x in f.codomain.vertices:
        for y in f.codomain.vertices:
            if x == y:
                continue
            for ka in comps[x]:
                for kb in comps[y]:
                    if ka | kb == full:
                        out.append((ka, kb))
    return out


# ---------------------------------------------------------------------------
# doubling


def delta_double(g: Graph, p: str) -> tuple[Graph, Morphism]:
    """Two copies of the graph glued at ``p``, with the fold-back projection."""
    check_vertices(g, [p])
    verts = [p] + [copy_token(v, i) for i in (0, 1) for v in g.vertices if v != p]
    tok = lambda v, i: p if v == p else copy_token(v, i)
    edges = []
    for u, v in g.sorted_edges():
        for i in (0, 1):
            e = (tok(u, i), tok(v, i))
            if e not in edges:
                edges.append(e)
    delta = Graph(verts, edges)
    mapping = {p: p}
    for v in g.vertices:
        if v != p:
            mapping[copy_token(v, 0)] = v
            mapping[copy_token(v, 1)] = v
    return delta, Morphism(delta, g, mapping)


# ---------------------------------------------------------------------------
# confluent extension


def extend_confluent(f: Morphism, g: Graph) -> tuple[Graph, Morphism]:
    """Extend a confluent epimorphism onto an induced subgraph to the whole graph.

    ``f`` maps W onto U, U must be the induced subgraph of ``g`` on f's
    codomain vertices.  The extension keeps W as the exact preimage of U.
    """
    if not is_confluent_epi(f):
        raise ValueError("extend_confluent needs a confluent epimorphism")
    u = f.codomain
    check_vertices(g, u.vertices)
    if induced(g, u.vertices) != u:
        raise ValueError("codomain must be an induced subgraph of the host")
    if not (is_connected(g) and is_connected(u) and is_connected(f.domain)):
        raise ValueError("extend_confluent needs connected graphs")
    w = f.domain
    outside = [v for v in g.vertices if v not in set(u.vertices)]
    clash = set(w.vertices) & set(outside)
    if clash:
        raise ValueError(f"vertex tokens {sorted(clash)} appear on both sides")
    verts = list(w.vertices) + outside
    edges = list(w.sorted_edges())
    outside_set = set(outside)
    edges += [
        (x, y)
        for x, y in g.sorted_edges()
        if x in outside_set and y in outside_set
    ]
    for x in w.vertices:
        fx = f(x)
        for y in outside:
            if g.has_edge(fx, y):
                edges.append((x, y))
    h = Graph(verts, edges)
    mapping = {x: f(x) for x in w.vertices}
    mapping.update({y: y for y in outside})
    return h, Morphism(h, g, mapping)


# ---------------------------------------------------------------------------
# unfolding


@dataclass(frozen=True)
class CopyInfo:
    copy_id: int
    layer: int
    level: int  # index of the chain element this copy instantiates
    attach_vertex: str | None  # vertex of the previous layer it hangs from
    attach_edge: tuple[str, str] | None


@dataclass(frozen=True)
class UnfoldingResult:
    graph: Graph
    projection: Morphism
    kernel: frozenset[str]
    layers: tuple[frozenset[str], ...]
    chain: tuple[frozenset[str], ...]
    copies: tuple[CopyInfo, ...]

    def collapse_copies(self) -> Graph:
        """Quotient identifying each attached copy to one vertex."""
        owner = {v: int(v.rsplit("@", 1)[1]) for v in self.graph.vertices}
        verts = sorted({f"copy{cid}" for cid in owner.values()}, key=lambda t: int(t[4:]))
        edges = set()
        for x, y in self.graph.sorted_edges():
            cx, cy = owner[x], owner[y]
            if cx != cy:
                edges.add(tuple(sorted((f"copy{cx}", f"copy{cy}"))))
        return Graph(verts, sorted(edges))


def unfold(b: Graph, chain: Sequence[Iterable[str]]) -> UnfoldingResult:
    """Layered tree-of-copies over a strictly increasing connected chain.

    Layer 0 is a copy of the first chain element.  At each later layer, every
    vertex x added in the previous layer sprouts, for each neighbor t of its
    original lying outside x's own chain level, a fresh copy of the least
    chain element containing t, joined by the single edge (copy of t) - x.
    The projection forgets copy indices; layer 1 is the kernel.
    """
    chain_sets = [check_vertices(b, xs) for xs in chain]
    if not chain_sets or not chain_sets[0]:
        raise ValueError("chain must start with a nonempty set")
    for i in range(1, len(chain_sets)):
        if not chain_sets[i - 1] < chain_sets[i]:
            raise ValueError("chain must be strictly increasing")
    if chain_sets[-1] != frozenset(b.vertices):
        raise ValueError("chain must end with the whole vertex set")
    for xs in chain_sets:
        if not is_connected_set(b, xs):
            raise ValueError("every chain element must induce a connected subgraph")
    n = len(chain_sets) - 1

    def level_of(t: str) -> int:
        for i, xs in enumerate(chain_sets):
            if t in xs:
                return i
        raise AssertionError  # pragma: no cover

    verts: list[str] = []
    edges: list[tuple[str, str]] = []
    mapping: dict[str, str] = {}
    copies: list[CopyInfo] = []
    copy_tokens: list[list[str]] = []

    def add_copy(level: int, layer: int, attach: tuple[str, str] | None) -> int:
        cid = len(copies)
        member = chain_sets[level]
        tokens = [copy_token(v, cid) for v in sorted(member)]
        for tok, v in zip(tokens, sorted(member)):
            verts.append(tok)
            mapping[tok] = v
        for u, v in b.sorted_edges():
            if u in member and v in member:
                edges.append((copy_token(u, cid), copy_token(v, cid)))
        attach_vertex = None
        attach_edge = None
        if attach is not None:
            x_tok, t_orig = attach
            attach_vertex = x_tok
            attach_edge = (x_tok, copy_token(t_orig, cid))
            edges.append(attach_edge)
        copies.append(CopyInfo(cid, layer, level, attach_vertex, attach_edge))
        copy_tokens.append(tokens)
        return cid

    add_copy(0, 0, None)
    layer_members: list[list[int]] = [[0]]
    for layer in range(1, n + 1):
        frontier = layer_members[-1]
        new_ids: list[int] = []
        for cid in frontier:
            level = copies[cid].level
            own = chain_sets[level]
            for x_tok in copy_tokens[cid]:
                orig = mapping[x_tok]
                for t in sorted(b.neighbors(orig)):
                    if t in own:
                        continue
                    new_ids.append(add_copy(level_of(t), layer, (x_tok, t)))
        layer_members.append(new_ids)

    graph = Graph(verts, edges)
    proj = Morphism(graph, b, mapping)
    layer_sets = []
    acc: set[str] = set()
    for layer in range(n + 1):
        for cid in layer_members[layer]:
            acc.update(copy_tokens[cid])
        layer_sets.append(frozenset(acc))
    return UnfoldingResult(
        graph=graph,
        projection=proj,
        kernel=layer_sets[min(1, n)],
        layers=tuple(layer_sets),
        chain=tuple(chain_sets),
        copies=tuple(copies),
    )


def kernel_component(result: UnfoldingResult, k: int) -> frozenset[str]:
    """Component of the preimage of the k-th chain element containing the kernel."""
    pre = result.projection.preimage(result.chain[k])
    anchor = min(pre & result.kernel)
    return component_of(result.graph, pre, anchor)


# ---------------------------------------------------------------------------
# unicoherence witness


def unicoherence_witness(
    f_graph: Graph, div: CycleDivision
) -> tuple[Graph, Morphism]:
    """Double of the graph that no longer carries the given cycle division.

    Same-level edges between K minus C and C are replaced by the two cross
    copies, so any connected lift of K must change levels while lifts of H
    cannot; the projection is a confluent epimorphism.
    """
    if not is_cycle_division(f_graph, div):
        raise ValueError("not a valid cycle division")
    k_minus_c = div.k - div.c
    cross_pairs = [
        (x, y)
        for x in sorted(k_minus_c)
        for y in sorted(div.c)
        if f_graph.has_edge(x, y)
    ]
    cross_set = {frozenset(p) for p in cross_pairs}
    verts = [copy_token(v, i) for i in (0, 1) for v in f_graph.vertices]
    edges = []
    for u, v in f_graph.sorted_edges():
        if frozenset((u, v)) in cross_set:
            continue
        for i in (0, 1):
            edges.append((copy_token(u, i), copy_token(v, i)))
    for x, y in cross_pairs:
        edges.append((copy_token(x, 0), copy_token(y, 1)))
        edges.append((copy_token(x, 1), copy_token(y, 0)))
    g = Graph(verts, edges)
    mapping = {copy_token(v, i): v for i in (0, 1) for v in f_graph.vertices}
    return g, Morphism(g, f_graph, mapping)


def divisions_mapping_onto(
    g: Graph, proj: Morphism, target: CycleDivision
) -> list[CycleDivision]:
    """Cycle divisions of ``g`` whose four parts project exactly onto the target's."""
    from .graphs import iter_cycle_divisions

    out = []
    for div in iter_cycle_divisions(g):
        if (
            proj.image(div.h) == target.h
            and proj.image(div.k) == target.k
            and proj.image(div.c) == target.c
            and proj.image(div.d) == target.d
        ):
            out.append(div)
    return out


# ---------------------------------------------------------------------------
# cycle constructions


def _cut_edge(c: OrientedCycle) -> tuple[str, str]:
    """Lexicographically least edge of the cycle, ordered along the orientation."""
    u, v = min(tuple(sorted((x, c.succ(x)))) for x in c.order)
    return (u, v) if c.succ(u) == v else (v, u)


def wrap_copies(
    a: Graph, c: OrientedCycle, m: int
) -> tuple[Graph, Morphism, OrientedCycle]:
    """m copies of the graph rewired cyclically along one cycle edge.

    The copy projection is confluent and winds the concatenated cycle m times
    around the input cycle.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    OrientedCycle.from_host(a, c.order)  # validates the cycle sits in a
    x, y = _cut_edge(c)
    verts = [copy_token(v, i) for i in range(1, m + 1) for v in a.vertices]
    cut = frozenset((x, y))
    edges = []
    for i in range(1, m + 1):
        for u, v in a.sorted_edges():
            if frozenset((u, v)) == cut:
                continue
            edges.append((copy_token(u, i), copy_token(v, i)))
    for i in range(1, m + 1):
        j = 1 if i == m else i + 1
        edges.append((copy_token(x, i), copy_token(y, j)))
    b = Graph(verts, edges)
    mapping = {copy_token(v, i): v for i in range(1, m + 1) for v in a.vertices}
    f = Morphism(b, a, mapping)
    start = c.index(y)
    rotated = c.order[start:] + c.order[:start]  # runs y .. x
    d_order = [copy_token(v, i) for i in range(1, m + 1) for v in rotated]
    return b, f, OrientedCycle(d_order)


def attach_cycle_vertex(a: Graph, x: str, c: str) -> tuple[Graph, Morphism, str]:
    """New vertex over ``x`` forming a triangle across the edge <x,c>."""
    if not a.has_edge(x, c):
        raise ValueError(f"<{x},{c}> is not an edge")
    b_tok = _fresh_token(a.vertices, f"{x}'")
    g = Graph(
        list(a.vertices) + [b_tok],
        list(a.sorted_edges()) + [(b_tok, x), (b_tok, c)],
    )
    mapping = {v: v for v in a.vertices}
    mapping[b_tok] = x
    return g, Morphism(g, a, mapping), b_tok


def double_cycle(
    a: Graph, c: OrientedCycle
) -> tuple[Graph, Morphism, OrientedCycle]:
    """Replace a cycle by its fattened double: winding one, fibers of size two.

    Every cycle vertex becomes two consecutive vertices of the doubled cycle;
    the rest of the graph reattaches to both copies of each old neighbor.
    """
    OrientedCycle.from_host(a, c.order)
    cyc = set(c.order)
    primed = {v: _fresh_token(a.vertices, f"{v}'") for v in c.order}
    d_order = []
    for v in c.order:
        d_order.extend((v, primed[v]))
    outside = [v for v in a.vertices if v not in cyc]
    verts = outside + d_order
    edges = [
        (u, v) for u, v in a.sorted_edges() if u not in cyc and v not in cyc
    ]
    for i, v in enumerate(d_order):
        edges.append(tuple(sorted((v, d_order[(i + 1) % len(d_order)]))))
    alpha = {v: v for v in c.order}
    alpha.update({primed[v]: v for v in c.order})
    for x in outside:
        for y in d_order:
            if a.has_edge(x, alpha[y]):
                edges.append((x, y))
    b = Graph(verts, edges)
    mapping = {v: v for v in outside}
    mapping.update(alpha)
    f = Morphism(b, a, mapping)
    return b, f, OrientedCycle(d_order)
