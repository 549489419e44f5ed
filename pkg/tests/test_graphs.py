import itertools

import pytest
from hypothesis import given, settings, strategies as st

from confluentgraphs import (
    BudgetExceededError,
    Graph,
    OrientedCycle,
    arc_order,
    complete_graph,
    components,
    cycle_graph,
    find_cycle_division,
    induced_cycles,
    is_adjacently_disconnecting,
    is_arc,
    is_connected,
    is_connected_set,
    is_cycle_division,
    is_hereditarily_unicoherent,
    path_graph,
    star_graph,
    to_dot,
)
from conftest import (
    adjacently_disconnecting_by_paths,
    brute_connected_subsets,
    heruni_by_definition,
    is_induced_path,
    partition_blocks_cover,
)


def small_graphs(max_n=6):
    """Hypothesis strategy: random graphs on up to max_n token vertices."""

    @st.composite
    def build(draw):
        n = draw(st.integers(min_value=1, max_value=max_n))
        tokens = [f"v{i}" for i in range(n)]
        pairs = list(itertools.combinations(tokens, 2))
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
        return Graph(tokens, [p for p, keep in zip(pairs, mask) if keep])

    return build()


class TestGraphBasics:
    def test_duplicate_vertex_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            Graph(["a", "a"])

    def test_dangling_edge_rejected(self):
        with pytest.raises(ValueError, match="undeclared"):
            Graph(["a"], [("a", "b")])

    def test_loop_rejected(self):
        with pytest.raises(ValueError, match="loop"):
            Graph(["a"], [("a", "a")])

    def test_adjacency_includes_implicit_loops(self):
        g = path_graph(["a", "b"])
        assert g.adjacent("a", "a")
        assert g.adjacent("a", "b")
        assert not g.has_edge("a", "a")

    def test_equality_ignores_vertex_order(self):
        g1 = Graph(["a", "b"], [("a", "b")])
        g2 = Graph(["b", "a"], [("a", "b")])
        assert g1 == g2 and hash(g1) == hash(g2)


class TestComponents:
    def test_path_endpoints_split(self):
        g = path_graph(["a", "b", "c"])
        assert components(g, ["a", "c"]) == [frozenset(["a"]), frozenset(["c"])]

    def test_whole_path_connected(self):
        g = path_graph(["a", "b", "c"])
        assert components(g, ["a", "b", "c"]) == [frozenset("abc")]

    def test_preimage_block_in_spoked_hexagon(self, hexagon_spoked):
        blocks = components(hexagon_spoked, ["a1", "a2", "a3", "b1", "b2"])
        assert blocks == [frozenset(["a1", "a2", "a3", "b1", "b2"])]

    def test_unknown_vertex_errors(self):
        g = path_graph(["a", "b"])
        with pytest.raises(ValueError, match="unknown"):
            components(g, ["z"])

    @settings(max_examples=60, deadline=None)
    @given(small_graphs())
    def test_components_partition_and_merging_disconnects(self, g):
        blocks = components(g, g.vertices)
        assert partition_blocks_cover(blocks, g.vertices)
        for b1, b2 in itertools.combinations(blocks, 2):
            assert not is_connected_set(g, b1 | b2)


class TestArcs:
    def test_singleton_is_arc(self):
        g = path_graph(["v"])
        ok, ends = is_arc(g, ["v"])
        assert ok and ends == ("v",)

    def test_path4_both_leaves(self):
        g = path_graph(["a", "b", "c", "d"])
        ok, ends = is_arc(g, g.vertices)
        assert ok and set(ends) == {"a", "d"}

    def test_four_cycle_not_arc(self):
        g = cycle_graph(["a", "b", "c", "d"])
        ok, ends = is_arc(g, g.vertices)
        assert not ok and ends is None

    def test_arc_order_from_given_end(self):
        g = path_graph(["m", "a", "z"])
        assert arc_order(g, g.vertices, start="z") == ("z", "a", "m")

    @settings(max_examples=80, deadline=None)
    @given(small_graphs(5))
    def test_arc_iff_induced_path(self, g):
        tokens = sorted(g.vertices)
        for size in range(1, len(tokens) + 1):
            for combo in itertools.combinations(tokens, size):
                ok, _ = is_arc(g, combo)
                assert ok == is_induced_path(g, combo)


class TestInducedCycles:
    def test_tree_has_none(self):
        assert induced_cycles(star_graph("c", ["x", "y", "z"])) == []

    def test_four_cycle_found_once(self):
        g = cycle_graph(["a", "b", "c", "d"])
        cycles = induced_cycles(g)
        assert len(cycles) == 1 and len(cycles[0]) == 4

    def test_hexagon_cycle(self, hexagon):
        cycles = induced_cycles(hexagon)
        assert len(cycles) == 1
        assert cycles[0].vertex_set() == frozenset(hexagon.vertices)

    def test_min_len_filters(self):
        g = complete_graph(["a", "b", "c", "d"])
        assert len(induced_cycles(g, 3)) == 4  # all triangles
        assert induced_cycles(g, 4) == []

    def test_chordal_diamond_has_only_triangles(self):
        g = Graph("abcd", [("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")])
        assert all(len(c) == 3 for c in induced_cycles(g))

    @settings(max_examples=60, deadline=None)
    @given(small_graphs(6))
    def test_matches_subset_oracle_and_pattern(self, g):
        found = {c.vertex_set() for c in induced_cycles(g)}
        # oracle: a subset is a chordless cycle iff induced degrees all equal 2
        # and the subset is connected
        expected = set()
        tokens = sorted(g.vertices)
        for size in range(3, len(tokens) + 1):
            for combo in itertools.combinations(tokens, size):
                sset = frozenset(combo)
                if not is_connected_set(g, sset):
                    continue
                if all(sum(1 for u in g.neighbors(v) if u in sset) == 2 for v in sset):
                    expected.add(sset)
        assert found == expected
        for c in induced_cycles(g):
            order = c.order
            n = len(order)
            for i, j in itertools.combinations(range(n), 2):
                adjacent = g.has_edge(order[i], order[j])
                consecutive = j - i == 1 or (i == 0 and j == n - 1)
                assert adjacent == consecutive


class TestCycleDivisions:
    def test_small_trees_have_none(self):
        for g in (path_graph(["a"]), path_graph(list("abcdef")), star_graph("c", list("uvwxy"))):
            assert find_cycle_division(g) is None

    def test_four_cycle_division(self):
        g = cycle_graph(["v0", "v1", "v2", "v3"])
        div = find_cycle_division(g)
        assert div is not None and is_cycle_division(g, div)
        assert div.c == frozenset(["v0"]) and div.d == frozenset(["v2"])

    def test_spoked_hexagon_has_division(self, hexagon_spoked):
        div = find_cycle_division(hexagon_spoked)
        assert div is not None and is_cycle_division(hexagon_spoked, div)

    def test_triangle_hereditarily_unicoherent(self):
        assert is_hereditarily_unicoherent(cycle_graph(["a", "b", "c"]))

    def test_five_cycle_not(self):
        assert not is_hereditarily_unicoherent(cycle_graph(list("abcde")))

    def test_path5(self):
        assert is_hereditarily_unicoherent(path_graph(list("abcde")))

    def test_budget_guard(self):
        g = path_graph([f"v{i:02d}" for i in range(17)])
        with pytest.raises(BudgetExceededError):
            find_cycle_division(g)

    @settings(max_examples=40, deadline=None)
    @given(small_graphs(6))
    def test_heruni_matches_definition_oracle(self, g):
        if not is_connected(g):
            return
        assert is_hereditarily_unicoherent(g) == heruni_by_definition(g)


class TestAdjacentlyDisconnecting:
    def test_path_middle(self):
        g = path_graph(["a", "b", "c"])
        assert is_adjacently_disconnecting(g, ["b"])

    def test_cycle_vertex_fails(self):
        g = cycle_graph(["a", "b", "c", "d"])
        assert not is_adjacently_disconnecting(g, ["a"])

    def test_disconnected_t_rejected(self):
        g = path_graph(["a", "b", "c"])
        with pytest.raises(ValueError, match="connected"):
            is_adjacently_disconnecting(g, ["a", "c"])

    @settings(max_examples=60, deadline=None)
    @given(small_graphs(6))
    def test_component_form_matches_path_enumeration(self, g):
        if not is_connected(g):
            return
        for t in brute_connected_subsets(g):
            assert is_adjacently_disconnecting(g, t) == adjacently_disconnecting_by_paths(g, t)


class TestOrientedCycleType:
    def test_canonical_starts_at_least_vertex(self):
        c = OrientedCycle(["c", "b", "a", "d"]).canonical()
        assert c.order[0] == "a" and c.order[1] == min(c.order[1], c.order[-1])

    def test_reverse_keeps_vertex_set(self):
        c = OrientedCycle(["a", "b", "c", "d"])
        assert c.reversed().vertex_set() == c.vertex_set()
        assert c.reversed().succ("a") == "d"

    def test_from_host_rejects_chords(self):
        g = complete_graph(["a", "b", "c", "d"])
        with pytest.raises(ValueError):
            OrientedCycle.from_host(g, ["a", "b", "c", "d"])


def test_dot_output_shape():
    g = path_graph(["a", "b"])
    text = to_dot(g)
    assert text.startswith("graph G {") and '"a" -- "b";' in text and text.endswith("}\n")
