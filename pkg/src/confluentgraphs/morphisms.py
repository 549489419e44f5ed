"""Vertex maps between reflexive graphs: classification and lifting.

``classify`` evaluates the four standard flags.  Confluence uses the finite
edge criterion: for every nondegenerate codomain edge, each component of its
preimage must contain an edge mapped onto it.  ``confluent_by_definition``
is the brute-force oracle quantifying over all connected codomain subsets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import BudgetExceededError, InvariantViolationError
from .graphs import (
    DEFAULT_SUBSET_BOUND,
    Graph,
    OrientedCycle,
    _guard_subset_bound,
    arc_order,
    component_of,
    components,
    connected_subsets,
    induced,
    induced_cycles,
    is_arc,
    check_vertices,
)


class Morphism:
    """Total vertex map between two graphs.

    Totality on the domain is enforced here; whether the map is a
    homomorphism (and more) is the job of :func:`classify`.
    """

    __slots__ = ("domain", "codomain", "mapping", "_hash")

    def __init__(self, domain: Graph, codomain: Graph, mapping: Mapping[str, str]):
        missing = set(domain.vertices) - set(mapping)
        if missing:
            raise ValueError(f"map not total: missing {sorted(missing)}")
        bad_target = {v for v in domain.vertices if mapping[v] not in codomain}
        if bad_target:
            raise ValueError(
                f"map sends {sorted(bad_target)} outside the codomain"
            )
        self.domain = domain
        self.codomain = codomain
        self.mapping = {v: mapping[v] for v in domain.vertices}
        self._hash = hash(
            (domain, codomain, tuple(self.mapping[v] for v in domain.vertices))
        )

    def __call__(self, v: str) -> str:
        return self.mapping[v]

    def image(self, s: Iterable[str]) -> frozenset[str]:
        return frozenset(self.mapping[v] for v in s)

    def fiber(self, c: str) -> frozenset[str]:
        return frozenset(v for v in self.domain.vertices if self.mapping[v] == c)

    def preimage(self, s: Iterable[str]) -> frozenset[str]:
        sset = frozenset(s)
        return frozenset(v for v in self.domain.vertices if self.mapping[v] in sset)

    def after(self, inner: "Morphism") -> "Morphism":
        """Composite self ∘ inner."""
        if inner.codomain != self.domain:
            raise ValueError("composition mismatch: inner codomain != outer domain")
        return Morphism(
            inner.domain,
            self.codomain,
            {v: self.mapping[inner.mapping[v]] for v in inner.domain.vertices},
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Morphism)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.mapping == other.mapping
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        pairs = ", ".join(f"{v}->{self.mapping[v]}" for v in self.domain.vertices)
        return f"Morphism({pairs})"


def identity(g: Graph) -> Morphism:
    return Morphism(g, g, {v: v for v in g.vertices})


def constant(domain: Graph, codomain: Graph, target: str) -> Morphism:
    return Morphism(domain, codomain, {v: target for v in domain.vertices})


def restrict(f: Morphism, dom_subset: Iterable[str], cod_subset: Iterable[str] | None = None) -> Morphism:
    """Restriction of ``f`` to an induced domain subgraph.

    The codomain stays whole unless ``cod_subset`` is given, in which case the
    restricted images must land inside it.
    """
    dom = induced(f.domain, dom_subset)
    cod = f.codomain if cod_subset is None else induced(f.codomain, cod_subset)
    mapping = {v: f(v) for v in dom.vertices}
    return Morphism(dom, cod, mapping)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    homomorphism: bool
    epimorphism: bool
    monotone: bool
    confluent: bool
    # first witnesses of failure, for reports
    homomorphism_failure: tuple | None = None
    epimorphism_failure: tuple | None = None
    monotone_failure: tuple | None = None
    confluence_failure: tuple | None = None

    def flags(self) -> dict[str, bool]:
        return {
            "homomorphism": self.homomorphism,
            "epimorphism": self.epimorphism,
            "monotone": self.monotone,
            "confluent": self.confluent,
        }


def classify(f: Morphism) -> Classification:
    """Evaluate the homomorphism/epimorphism/monotone/confluent flags.

    Monotone uses the vertex- and edge-fiber test, which is equivalent to
    connectedness of all preimages of connected sets for surjective maps.
    Confluent uses the edge criterion; degenerate codomain edges are vacuous.
    """
    g, h = f.domain, f.codomain

    hom = True
    hom_witness = None
    for u, v in g.sorted_edges():
        fu, fv = f(u), f(v)
        if fu != fv and not h.has_edge(fu, fv):
            hom, hom_witness = False, ((u, v), (fu, fv))
            break

    epi = hom
    epi_witness = None
    if epi:
        covered_vertices = f.image(g.vertices)
        missing_v = sorted(set(h.vertices) - covered_vertices)
        if missing_v:
            epi, epi_witness = False, ("vertex", missing_v[0])
        else:
            covered_edges = {
                frozenset((f(u), f(v))) for u, v in g.sorted_edges() if f(u) != f(v)
            }
            for u, v in h.sorted_edges():
                if frozenset((u, v)) not in covered_edges:
                    epi, epi_witness = False, ("edge", (u, v))
                    break

    monotone = True
    mono_witness = None
    for c in h.vertices:
        fib = f.fiber(c)
        if fib and len(components(g, fib)) > 1:
            monotone, mono_witness = False, ((c,), len(components(g, fib)))
            break
    if monotone:
        for a, b in h.sorted_edges():
            pre = f.preimage((a, b))
            if pre and len(components(g, pre)) > 1:
                monotone, mono_witness = False, ((a, b), len(components(g, pre)))
                break

    confluent = True
    conf_witness = None
    for a, b in h.sorted_edges():
        pre = f.preimage((a, b))
        target = frozenset((a, b))
        for block in components(g, pre):
            has_onto_edge = any(
                f(u) != f(v) and frozenset((f(u), f(v))) == target
                for u in block
                for v in g.neighbors(u)
                if v in block
            )
            if not has_onto_edge:
                confluent, conf_witness = False, ((a, b), block)
                break
        if not confluent:
            break

    return Classification(
        homomorphism=hom,
        epimorphism=epi,
        monotone=monotone,
        confluent=confluent,
        homomorphism_failure=hom_witness,
        epimorphism_failure=epi_witness,
        monotone_failure=mono_witness,
        confluence_failure=conf_witness,
    )


def is_confluent_epi(f: Morphism) -> bool:
    cls = classify(f)
    return cls.epimorphism and cls.confluent


def is_monotone_epi(f: Morphism) -> bool:
    cls = classify(f)
    return cls.epimorphism and cls.monotone


def confluent_by_definition(
    f: Morphism, max_vertices: int = DEFAULT_SUBSET_BOUND
) -> bool:
    """Brute-force oracle: every component of every connected preimage maps onto.

    Quantifies over all connected codomain subsets; used to validate the edge
    criterion in :func:`classify`.
    """
    _guard_subset_bound(f.codomain, max_vertices)
    for q in connected_subsets(f.codomain):
        pre = f.preimage(q)
        for block in components(f.domain, pre):
            if f.image(block) != q:
                return False
    return True


# ---------------------------------------------------------------------------
# enumeration


def enumerate_epimorphisms(
    g: Graph, h: Graph, budget: int = 2_000_000
) -> Iterator[Morphism]:
    """All epimorphisms g -> h in lexicographic image order (token order both sides)."""
    yield from _search_maps(g, h, budget, require="epi")


def enumerate_confluent_epis(
    g: Graph, h: Graph, budget: int = 2_000_000
) -> list[Morphism]:
    """All confluent epimorphisms g -> h, deterministically ordered."""
    return list(_search_maps(g, h, budget, require="confluent"))


def _search_maps(g: Graph, h: Graph, budget: int, require: str) -> Iterator[Morphism]:
    dom = list(g.vertices)
    cod = sorted(h.vertices)
    n = len(dom)
    explored = 0
    found = 0
    assignment: dict[str, str] = {}
    cover_count = {c: 0 for c in cod}

    def backtrack(i: int) -> Iterator[Morphism]:
        nonlocal explored, found
        if i == n:
            m = Morphism(g, h, dict(assignment))
            cls = classify(m)
            ok = cls.epimorphism if require == "epi" else (cls.epimorphism and cls.confluent)
            if ok:
                found += 1
                yield m
            return
        v = dom[i]
        uncovered = sum(1 for c in cod if cover_count[c] == 0)
        if uncovered > n - i:
            return
        for c in cod:
            explored += 1
            if explored > budget:
                raise BudgetExceededError(
                    f"map search budget {budget} exhausted", found=found, explored=explored
                )
            ok = True
            for u in g.neighbors(v):
                if u in assignment:
                    cu = assignment[u]
                    if cu != c and not h.has_edge(cu, c):
                        ok = False
                        break
            if not ok:
                continue
            assignment[v] = c
            cover_count[c] += 1
            yield from backtrack(i + 1)
            cover_count[c] -= 1
            del assignment[v]

    yield from backtrack(0)


# ---------------------------------------------------------------------------
# lifting arcs


def _bfs_path_to_image(
    f: Morphism, inside: frozenset[str], start: str, target_image: str
) -> list[str]:
    """Shortest path within ``inside`` from start to the first vertex mapping to
    ``target_image``; BFS with token-order tie-breaking."""
    parent = {start: None}
    queue = deque([start])
    goal = None
    while queue:
        x = queue.popleft()
        if f(x) == target_image:
            goal = x
            break
        for y in sorted(f.domain.neighbors(x)):
            if y in inside and y not in parent:
                parent[y] = x
                queue.append(y)
    if goal is None:
        raise InvariantViolationError(
            f"no vertex mapping to {target_image!r} reachable; map is not confluent"
        )
    path = []
    cur: str | None = goal
    while cur is not None:
        path.append(cur)
        cur = parent[cur]
    path.reverse()
    return path


def _shortcut_path(g: Graph, seq: list[str]) -> list[str]:
    """Remove chords from a vertex-distinct path by splicing, keeping endpoints."""
    changed = True
    while changed:
        changed = False
        pos = {v: i for i, v in enumerate(seq)}
        for i in range(len(seq)):
            best_j = None
            for w in g.neighbors(seq[i]):
                j = pos.get(w)
                if j is not None and j > i + 1:
                    best_j = j if best_j is None else max(best_j, j)
            if best_j is not None:
                seq = seq[: i + 1] + seq[best_j:]
                changed = True
                break
    return seq


def lift_arc(f: Morphism, a_set: Iterable[str], b: str) -> tuple[str, ...]:
    """Arc in the domain, starting at ``b``, that maps monotonically onto the arc.

    ``f`` must be a confluent epimorphism and ``f(b)`` an end-vertex of the
    codomain arc.  Built segment by segment through the components of the
    preimages of consecutive edge pairs, then chord-shortcut; the result is
    returned in path order from ``b``.
    """
    if not is_confluent_epi(f):
        raise ValueError("lift_arc needs a confluent epimorphism")
    aset = check_vertices(f.codomain, a_set)
    ok, _ends = is_arc(f.codomain, aset)
    if not ok:
        raise ValueError("codomain subset is not an arc")
    if b not in f.domain:
        raise ValueError(f"unknown domain vertex {b!r}")
    a = f(b)
    ok, ends = is_arc(f.codomain, aset)
    if a not in ends:
        raise ValueError(f"f({b!r}) = {a!r} is not an end-vertex of the arc")
    order = arc_order(f.codomain, aset, start=a)
    seq = [b]
    current = b
    for i in range(len(order) - 1):
        pair = frozenset((order[i], order[i + 1]))
        inside = component_of(f.domain, f.preimage(pair), current)
        segment = _bfs_path_to_image(f, inside, current, order[i + 1])
        seq.extend(segment[1:])
        current = segment[-1]
    seq = _shortcut_path(f.domain, seq)
    return tuple(seq)


# ---------------------------------------------------------------------------
# lifting cycles


def _walk_until_repeat(f: Morphism, c: OrientedCycle) -> list[str]:
    """Closed walk with distinct vertices whose image winds through ``c``.

    Follows the confluence steps target-by-target and stops at the first
    vertex repetition; the returned slice is the closed part.
    """
    c0 = c.order[0]
    fiber0 = sorted(f.fiber(c0))
    if not fiber0:
        raise InvariantViolationError("empty fiber over the cycle start")
    start = fiber0[0]
    seq = [start]
    first_index = {start: 0}
    cursor = c0
    while True:
        target = c.succ(cursor)
        pair = frozenset((cursor, target))
        inside = component_of(f.domain, f.preimage(pair), seq[-1])
        segment = _bfs_path_to_image(f, inside, seq[-1], target)
        for v in segment[1:]:
            if v in first_index:
                return seq[first_index[v]:]
            first_index[v] = len(seq)
            seq.append(v)
        cursor = target


def _cycle_chords(g: Graph, order: list[str]) -> list[tuple[str, str]]:
    n = len(order)
    pos = {v: i for i, v in enumerate(order)}
    chords = []
    for i, v in enumerate(order):
        for w in g.neighbors(v):
            j = pos.get(w)
            if j is None or j <= i:
                continue
            if j - i == 1 or (i == 0 and j == n - 1):
                continue
            chords.append(tuple(sorted((v, w))))
    chords.sort()
    return chords


def lift_cycle(f: Morphism, c: OrientedCycle) -> OrientedCycle:
    """Chordless domain cycle whose image is exactly the vertex set of ``c``.

    Path-extension walk until a vertex repeats, then chord-shortcutting; if
    shortcutting would lose image coverage on both sides of every chord, fall
    back to exhaustive search over the domain's chordless cycles.
    """
    if not is_confluent_epi(f):
        raise ValueError("lift_cycle needs a confluent epimorphism")
    cod_cycle = OrientedCycle.from_host(f.codomain, c.order)
    target = cod_cycle.vertex_set()

    walk = _walk_until_repeat(f, cod_cycle)
    order = list(walk)
    while True:
        chords = _cycle_chords(f.domain, order)
        if not chords:
            if f.image(order) == target and len(order) >= 3:
                return OrientedCycle.from_host(f.domain, order)
            break
        u, v = chords[0]
        pos = {x: i for i, x in enumerate(order)}
        i, j = sorted((pos[u], pos[v]))
        side_a = order[i : j + 1]
        side_b = order[j:] + order[: i + 1]
        candidates = [
            s
            for s in (side_a, side_b)
            if len(s) >= 3 and f.image(s) == target
        ]
        if not candidates:
            break
        candidates.sort(key=lambda s: (-len(s), tuple(sorted(s))))
        order = candidates[0]

    # fallback: the guaranteed cycle exists, find it exhaustively
    for cand in induced_cycles(f.domain, 3):
        if f.image(cand.order) == target:
            return cand
    raise InvariantViolationError(
        "no chordless cycle with the required image exists; "
        "this contradicts confluence of the input"
    )
