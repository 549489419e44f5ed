"""Canonical enumeration of small connected graphs up to isomorphism.

Brute-force canonical labeling: the canonical form of a graph on n vertices
is the least edge-index tuple over all vertex permutations.  Intended for
n <= 8; used by the verification harnesses and the sequence builder.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .graphs import Graph, is_connected

MAX_CANONICAL_VERTICES = 8


def _token(i: int) -> str:
    return f"v{i}"


def canonical_form(g: Graph) -> tuple[int, tuple[tuple[int, int], ...]]:
    """(vertex count, least edge tuple over all relabelings)."""
    n = len(g.vertices)
    if n > MAX_CANONICAL_VERTICES:
        raise ValueError(f"canonical labeling is exhaustive; {n} vertices is too many")
    idx = {v: i for i, v in enumerate(g.vertices)}
    edges = [(idx[u], idx[v]) for u, v in g.sorted_edges()]
    best = None
    for perm in itertools.permutations(range(n)):
        relabeled = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
        if best is None or relabeled < best:
            best = relabeled
    return n, best if best is not None else ()


def canonical_graph(n: int, edge_tuple: tuple[tuple[int, int], ...]) -> Graph:
    return Graph([_token(i) for i in range(n)], [(_token(a), _token(b)) for a, b in edge_tuple])


@lru_cache(maxsize=None)
def connected_graphs_up_to(max_vertices: int) -> tuple[Graph, ...]:
    """Connected graphs with <= max_vertices vertices, one per isomorphism class.

    Ordered by (vertex count, edge count, canonical edge tuple).
    """
    if max_vertices > MAX_CANONICAL_VERTICES:
        raise ValueError(f"bound {max_vertices} above supported {MAX_CANONICAL_VERTICES}")
    out: list[tuple[tuple, Graph]] = []
    for n in range(1, max_vertices + 1):
        tokens = [_token(i) for i in range(n)]
        pairs = list(itertools.combinations(range(n), 2))
        seen: set[tuple] = set()
        for bits in range(1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
            g = Graph(tokens, [(tokens[a], tokens[b]) for a, b in edges])
            if not is_connected(g):
                continue
            form = canonical_form(g)
            if form in seen:
                continue
            seen.add(form)
            out.append(((n, len(edges), form[1]), canonical_graph(n, form[1])))
    out.sort(key=lambda item: item[0])
    return tuple(g for _, g in out)
