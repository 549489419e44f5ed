"""Shared fixtures: the running nine-vertex example and its restriction,
plus brute-force oracles kept independent of the library code paths."""

import itertools

import pytest

from confluentgraphs import Graph, Morphism, components, is_connected_set


@pytest.fixture(scope="session")
def hexagon():
    """Six-cycle a1 c1 a2 d1 a3 b1."""
    return Graph(
        ["a1", "c1", "a2", "d1", "a3", "b1"],
        [("a1", "c1"), ("c1", "a2"), ("a2", "d1"), ("d1", "a3"), ("a3", "b1"), ("b1", "a1")],
    )


@pytest.fixture(scope="session")
def hexagon_spoked():
    """The hexagon with three extra rim vertices b2, c2, d2."""
    return Graph(
        ["a1", "c1", "a2", "d1", "a3", "b1", "b2", "c2", "d2"],
        [
            ("a1", "c1"), ("c1", "a2"), ("a2", "d1"), ("d1", "a3"), ("a3", "b1"), ("b1", "a1"),
            ("b2", "a2"), ("b2", "b1"), ("c2", "a3"), ("c2", "c1"), ("d2", "a1"), ("d2", "d1"),
        ],
    )


@pytest.fixture(scope="session")
def triod():
    return Graph(["A", "B", "C", "D"], [("A", "B"), ("A", "C"), ("A", "D")])


@pytest.fixture(scope="session")
def collapse_to_triod(hexagon_spoked, triod):
    """a_i -> A, b_i -> B, c_i -> C, d_i -> D."""
    return Morphism(
        hexagon_spoked, triod, {v: v[0].upper() for v in hexagon_spoked.vertices}
    )


# ---------------------------------------------------------------------------
# oracles


def all_vertex_maps(g: Graph, h: Graph):
    for images in itertools.product(sorted(h.vertices), repeat=len(g.vertices)):
        yield Morphism(g, h, dict(zip(g.vertices, images)))


def brute_connected_subsets(g: Graph):
    tokens = sorted(g.vertices)
    for size in range(1, len(tokens) + 1):
        for combo in itertools.combinations(tokens, size):
            if is_connected_set(g, combo):
                yield frozenset(combo)


def heruni_by_definition(g: Graph) -> bool:
    """Every two connected sets meet in a connected set (empty included)."""
    subsets = list(brute_connected_subsets(g))
    for p in subsets:
        for q in subsets:
            if not is_connected_set(g, p & q):
                return False
    return True


def adjacently_disconnecting_by_paths(a: Graph, t) -> bool:
    """Literal path criterion: search for a T-avoiding path between two
    distinct T-adjacent outside vertices by depth-first path enumeration."""
    tset = frozenset(t)
    touching = sorted(
        x
        for x in a.vertices
        if x not in tset and any(y in tset for y in a.neighbors(x))
    )

    def path_avoiding(x, y):
        stack = [(x, {x})]
        while stack:
            cur, seen = stack.pop()
            if cur == y:
                return True
            for nxt in sorted(a.neighbors(cur)):
                if nxt in tset or nxt in seen:
                    continue
                stack.append((nxt, seen | {nxt}))
        return False

    for i, x in enumerate(touching):
        for y in touching[i + 1 :]:
            if path_avoiding(x, y):
                return False
    return True


def is_induced_path(g: Graph, s) -> bool:
    """Degree-profile oracle for arcs: connected, all degrees <= 2 inside,
    and not a cycle."""
    sset = frozenset(s)
    if not sset:
        return False
    if not is_connected_set(g, sset):
        return False
    if len(sset) == 1:
        return True
    degs = []
    for v in sset:
        degs.append(sum(1 for u in g.neighbors(v) if u in sset))
    return max(degs) <= 2 and degs.count(1) == 2


def partition_blocks_cover(blocks, universe) -> bool:
    seen = set()
    for block in blocks:
        if seen & block:
            return False
        seen |= block
    return seen == set(universe)
