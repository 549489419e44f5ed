"""Finite reflexive graphs and their connectivity combinatorics.

Vertices are opaque string tokens and every enumeration follows the token
order, so all searches are deterministic.  Edges are unordered pairs of
distinct tokens; the reflexive loop at each vertex is implicit and never
stored.  A subset of vertices is always read as the induced subgraph.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceededError

Edge = frozenset  # two distinct vertex tokens

DEFAULT_SUBSET_BOUND = 16


def _as_edge(u: str, v: str) -> Edge:
    if u == v:
        raise ValueError(f"loop edge <{u},{u}> must stay implicit")
    return frozenset((u, v))


class Graph:
    """Finite reflexive symmetric graph on ordered vertex tokens.

    Immutable after construction.  ``vertices`` keeps first-seen order of
    distinct tokens; ``edges`` holds only nondegenerate unordered pairs.
    """

    __slots__ = ("vertices", "edges", "_adj", "_hash")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Sequence[str]] = ()):
        verts = []
        seen = set()
        for v in vertices:
            if not isinstance(v, str):
                raise ValueError(f"vertex token must be a string, got {v!r}")
            if v in seen:
                raise ValueError(f"duplicate vertex token {v!r}")
            seen.add(v)
            verts.append(v)
        edge_set = set()
        for e in edges:
            u, v = e
            if u not in seen or v not in seen:
                raise ValueError(f"edge <{u},{v}> has an undeclared endpoint")
            edge_set.add(_as_edge(u, v))
        self.vertices: tuple[str, ...] = tuple(verts)
        self.edges: frozenset[Edge] = frozenset(edge_set)
        adj = {v: set() for v in verts}
        for e in self.edges:
            u, v = sorted(e)
            adj[u].add(v)
            adj[v].add(u)
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        # equality is as a (vertex set, edge set) pair; the vertex tuple only
        # fixes enumeration order
        self._hash = hash((frozenset(self.vertices), self.edges))

    def neighbors(self, v: str) -> frozenset[str]:
        return self._adj[v]

    def adjacent(self, u: str, v: str) -> bool:
        """Edge relation including the implicit loops."""
        return u == v or v in self._adj[u]

    def has_edge(self, u: str, v: str) -> bool:
        """Nondegenerate edge only."""
        return u != v and v in self._adj[u]

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def __contains__(self, v: str) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and frozenset(self.vertices) == frozenset(other.vertices)
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph({list(self.vertices)!r}, {self.sorted_edges()!r})"


# ---------------------------------------------------------------------------
# small builders


def point_graph(token: str = "p") -> Graph:
    return Graph([token])


def path_graph(tokens: Sequence[str]) -> Graph:
    return Graph(tokens, [(tokens[i], tokens[i + 1]) for i in range(len(tokens) - 1)])


def cycle_graph(tokens: Sequence[str]) -> Graph:
    if len(tokens) < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    edges = [(tokens[i], tokens[(i + 1) % len(tokens)]) for i in range(len(tokens))]
    return Graph(tokens, edges)


def complete_graph(tokens: Sequence[str]) -> Graph:
    return Graph(tokens, itertools.combinations(tokens, 2))


def star_graph(center: str, leaves: Sequence[str]) -> Graph:
    return Graph([center, *leaves], [(center, leaf) for leaf in leaves])


def induced(g: Graph, s: Iterable[str]) -> Graph:
    """Induced subgraph on ``s``, vertices in token order."""
    sset = check_vertices(g, s)
    verts = [v for v in g.vertices if v in sset]
    edges = [e for e in g.sorted_edges() if e[0] in sset and e[1] in sset]
    return Graph(verts, edges)


def check_vertices(g: Graph, s: Iterable[str]) -> frozenset[str]:
    sset = frozenset(s)
    unknown = sset - set(g.vertices)
    if unknown:
        raise ValueError(f"unknown vertex tokens {sorted(unknown)}")
    return sset


# ---------------------------------------------------------------------------
# connectivity


def component_of(g: Graph, s: frozenset[str], a: str) -> frozenset[str]:
    """The component of the induced subgraph on ``s`` that contains ``a``."""
    if a not in s:
        raise ValueError(f"vertex {a!r} not in the subset")
    seen = {a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if y in s and y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def components(g: Graph, s: Iterable[str]) -> list[frozenset[str]]:
    """Partition of ``s`` into maximal connected subsets, ordered by least token."""
    sset = check_vertices(g, s)
    remaining = set(sset)
    blocks = []
    while remaining:
        a = min(remaining)
        block = component_of(g, sset, a)
        blocks.append(block)
        remaining -= block
    return blocks


def is_connected_set(g: Graph, s: Iterable[str]) -> bool:
    """Empty sets and singletons count as connected."""
    sset = check_vertices(g, s)
    if len(sset) <= 1:
        return True
    return len(component_of(g, sset, min(sset))) == len(sset)


def is_connected(g: Graph) -> bool:
    return is_connected_set(g, g.vertices)


def connected_subsets(
    g: Graph, min_size: int = 1, max_size: int | None = None
) -> Iterator[frozenset[str]]:
    """All connected vertex subsets in canonical (size, lexicographic) order."""
    n = len(g.vertices)
    top = n if max_size is None else min(max_size, n)
    tokens = sorted(g.vertices)
    for size in range(max(1, min_size), top + 1):
        for combo in itertools.combinations(tokens, size):
            s = frozenset(combo)
            if is_connected_set(g, s):
                yield s


def _guard_subset_bound(g: Graph, bound: int) -> None:
    if len(g.vertices) > bound:
        raise BudgetExceededError(
            f"graph has {len(g.vertices)} vertices, above the exhaustive-search "
            f"bound {bound}",
        )


# ---------------------------------------------------------------------------
# arcs


def _noncut_vertices(g: Graph, s: frozenset[str]) -> list[str]:
    out = []
    for x in sorted(s):
        if is_connected_set(g, s - {x}):
            out.append(x)
    return out


def is_arc(g: Graph, s: Iterable[str]) -> tuple[bool, tuple[str, ...] | None]:
    """Whether ``s`` induces an arc; returns its end-vertices when it does.

    An arc is a connected set in which all but at most two vertices
    disconnect it when removed.  A singleton is an arc whose sole vertex is
    its end-vertex.
    """
    sset = check_vertices(g, s)
    if not sset:
        return False, None
    if not is_connected_set(g, sset):
        return False, None
    ends = _noncut_vertices(g, sset)
    if len(ends) > 2:
        return False, None
    return True, tuple(ends)


def arc_order(g: Graph, s: Iterable[str], start: str | None = None) -> tuple[str, ...]:
    """Vertices of an arc in path order, beginning at ``start`` (least end by default)."""
    sset = check_vertices(g, s)
    ok, ends = is_arc(g, sset)
    if not ok:
        raise ValueError("subset does not induce an arc")
    if len(sset) == 1:
        return (next(iter(sset)),)
    if start is None:
        start = ends[0]
    elif start not in ends:
        raise ValueError(f"{start!r} is not an end-vertex of the arc")
    order = [start]
    prev = None
    cur = start
    while len(order) < len(sset):
        nxt = sorted(v for v in g.neighbors(cur) if v in sset and v != prev)
        if len(nxt) != 1:
            raise ValueError("subset does not induce an arc")  # pragma: no cover
        prev, cur = cur, nxt[0]
        order.append(cur)
    return tuple(order)


# ---------------------------------------------------------------------------
# oriented chordless cycles


class OrientedCycle:
    """A chordless cycle given by a cyclic vertex order.

    Adjacency must hold exactly between cyclically consecutive vertices.
    ``graph`` is the standalone cycle on those vertices.
    """

    __slots__ = ("order", "graph", "_index")

    def __init__(self, order: Sequence[str]):
        if len(order) < 3:
            raise ValueError("a cycle needs at least 3 vertices")
        if len(set(order)) != len(order):
            raise ValueError("cycle order repeats a vertex")
        self.order: tuple[str, ...] = tuple(order)
        self.graph = cycle_graph(self.order)
        self._index = {v: i for i, v in enumerate(self.order)}

    @classmethod
    def from_host(cls, host: Graph, vertices: Iterable[str]) -> "OrientedCycle":
        """Canonically oriented cycle on ``vertices``, which must induce one in ``host``."""
        vset = check_vertices(host, vertices)
        sub = induced(host, vset)
        if len(vset) < 3 or not is_connected(sub):
            raise ValueError("subset does not induce a cycle")
        if any(len(sub.neighbors(v)) != 2 for v in sub.vertices):
            raise ValueError("subset does not induce a cycle")
        start = min(vset)
        second = min(sub.neighbors(start))
        order = [start, second]
        while len(order) < len(vset):
            nxt = [v for v in sub.neighbors(order[-1]) if v != order[-2]]
            order.append(nxt[0])
        return cls(order)

    def succ(self, v: str) -> str:
        return self.order[(self._index[v] + 1) % len(self.order)]

    def pred(self, v: str) -> str:
        return self.order[(self._index[v] - 1) % len(self.order)]

    def index(self, v: str) -> int:
        return self._index[v]

    def reversed(self) -> "OrientedCycle":
        return OrientedCycle((self.order[0],) + tuple(reversed(self.order[1:])))

    def canonical(self) -> "OrientedCycle":
        """Rotate/reflect to start at the least vertex with its lesser neighbor second."""
        start = min(self.order)
        i = self._index[start]
        fwd = self.order[i:] + self.order[:i]
        rev = (fwd[0],) + tuple(reversed(fwd[1:]))
        return OrientedCycle(min(fwd, rev))

    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self) -> Iterator[str]:
        return iter(self.order)

    def __eq__(self, other) -> bool:
        return isinstance(other, OrientedCycle) and self.canonical().order == other.canonical().order

    def __hash__(self) -> int:
        return hash(self.canonical().order)

    def __repr__(self) -> str:
        return f"OrientedCycle({list(self.order)!r})"


def induced_cycles(g: Graph, min_len: int = 3) -> list[OrientedCycle]:
    """All chordless induced cycles of length >= ``min_len``, canonically oriented.

    Each cycle is reported once: the enumeration roots at the least cycle
    vertex and takes its lesser cycle-neighbor second.
    """
    if min_len < 3:
        raise ValueError("min_len must be at least 3")
    found: list[OrientedCycle] = []
    tokens = sorted(g.vertices)

    def extend(root: str, path: list[str], on_path: set[str]) -> None:
        last = path[-1]
        for w in sorted(g.neighbors(last)):
            if w <= root or w in on_path:
                continue
            # chordless: w may touch the path only at its last vertex, and
            # at the root exactly when it closes the cycle
            touches = [p for p in path[:-1] if g.has_edge(w, p)]
            if g.has_edge(w, root):
                if touches == [root] and len(path) >= 2 and w > path[1]:
                    if len(path) + 1 >= min_len:
                        found.append(OrientedCycle(path + [w]))
                continue
            if touches:
                continue
            path.append(w)
            on_path.add(w)
            extend(root, path, on_path)
            on_path.remove(w)
            path.pop()

    for root in tokens:
        for second in sorted(g.neighbors(root)):
            if second > root:
                extend(root, [root, second], {root, second})
    found.sort(key=lambda c: (len(c), c.order))
    return found


# ---------------------------------------------------------------------------
# cycle divisions and hereditary unicoherence


@dataclass(frozen=True)
class CycleDivision:
    """Two connected sets whose intersection splits into nonempty parts with
    no edge between them; witnesses failure of hereditary unicoherence."""

    h: frozenset[str]
    k: frozenset[str]
    c: frozenset[str]
    d: frozenset[str]


def is_cycle_division(g: Graph, div: CycleDivision) -> bool:
    for part in (div.h, div.k, div.c, div.d):
        check_vertices(g, part)
    if not (div.c and div.d):
        return False
    if div.c & div.d:
        return False
    if (div.h & div.k) != (div.c | div.d):
        return False
    if not (is_connected_set(g, div.h) and is_connected_set(g, div.k)):
        return False
    return not any(g.has_edge(x, y) for x in div.c for y in div.d)


def iter_cycle_divisions(g: Graph) -> Iterator[CycleDivision]:
    """All cycle divisions, in the canonical (H, K, split) search order.

    The C/D split ranges over every bipartition of the components of H∩K
    grouped to keep C the side holding the least vertex.
    """
    subsets = list(connected_subsets(g))
    for h in subsets:
        for k in subsets:
            inter = h & k
            if len(inter) < 2:
                continue
            blocks = components(g, inter)
            if len(blocks) < 2:
                continue
            rest = blocks[1:]
            for r in range(1, len(rest) + 1):
                for picked in itertools.combinations(range(len(rest)), r):
                    d = frozenset().union(*(rest[i] for i in picked))
                    c = inter - d
                    yield CycleDivision(h, k, c, d)


def find_cycle_division(
    g: Graph, max_vertices: int = DEFAULT_SUBSET_BOUND
) -> CycleDivision | None:
    """First cycle division in canonical search order, or None.

    Enumerates connected vertex-sets H, K by (size, lexicographic) order and
    splits the first disconnected intersection into the component of its
    least vertex versus the rest.
    """
    _guard_subset_bound(g, max_vertices)
    subsets = list(connected_subsets(g))
    for h in subsets:
        for k in subsets:
            inter = h & k
            if len(inter) < 2:
                continue
            blocks = components(g, inter)
            if len(blocks) < 2:
                continue
            c = blocks[0]
            d = inter - c
            return CycleDivision(h, k, c, d)
    return None


def is_hereditarily_unicoherent(g: Graph, max_vertices: int = DEFAULT_SUBSET_BOUND) -> bool:
    """Every pair of connected sets meets in a connected set.

    For finite graphs this is exactly the absence of a cycle division.
    """
    return find_cycle_division(g, max_vertices=max_vertices) is None


# ---------------------------------------------------------------------------
# adjacently disconnecting sets


def is_adjacently_disconnecting(a: Graph, t: Iterable[str]) -> bool:
    """Whether connected ``t`` separates every two outside vertices adjacent to it.

    Component form of the path criterion: no component of A minus T may
    contain two distinct vertices adjacent to T.
    """
    tset = check_vertices(a, t)
    if not is_connected_set(a, tset):
        raise ValueError("separating set must induce a connected subgraph")
    outside = frozenset(a.vertices) - tset
    for block in components(a, outside):
        touching = 0
        for x in block:
            if any(y in tset for y in a.neighbors(x)):
                touching += 1
                if touching > 1:
                    return False
    return True


# ---------------------------------------------------------------------------
# DOT export


def to_dot(g: Graph, name: str = "G") -> str:
    """Undirected DOT document; implicit loops are omitted."""
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for u, v in g.sorted_edges():
        lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
