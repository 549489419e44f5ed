import itertools

import pytest

from confluentgraphs import (
    Graph,
    Morphism,
    OrientedCycle,
    classify,
    confluent_by_definition,
    constant,
    cycle_graph,
    enumerate_confluent_epis,
    identity,
    induced_cycles,
    is_arc,
    is_confluent_epi,
    lift_arc,
    lift_cycle,
    path_graph,
    point_graph,
    restrict,
)
from confluentgraphs.enumeration import connected_graphs_up_to
from confluentgraphs.morphisms import enumerate_epimorphisms
from conftest import all_vertex_maps


class TestMorphismBasics:
    def test_totality_enforced(self):
        g = path_graph(["a", "b"])
        with pytest.raises(ValueError, match="total"):
            Morphism(g, g, {"a": "a"})

    def test_image_outside_codomain_rejected(self):
        g = path_graph(["a", "b"])
        with pytest.raises(ValueError, match="outside"):
            Morphism(g, g, {"a": "a", "b": "z"})

    def test_composition(self):
        g = path_graph(["a", "b", "c"])
        e = path_graph(["x", "y"])
        p = point_graph("p")
        f = Morphism(g, e, {"a": "x", "b": "y", "c": "x"})
        c = constant(e, p, "p")
        comp = c.after(f)
        assert comp.domain == g and comp.codomain == p
        assert all(comp(v) == "p" for v in g.vertices)


class TestClassify:
    def test_identity_all_flags(self, hexagon):
        cls = classify(identity(hexagon))
        assert cls.flags() == {
            "homomorphism": True,
            "epimorphism": True,
            "monotone": True,
            "confluent": True,
        }

    def test_constant_map_flags(self, hexagon):
        cls = classify(constant(hexagon, point_graph("p"), "p"))
        assert cls.epimorphism and cls.monotone and cls.confluent

    def test_running_example_confluent(self, collapse_to_triod):
        cls = classify(collapse_to_triod)
        assert cls.epimorphism and cls.confluent and not cls.monotone

    def test_restriction_loses_confluence(self, collapse_to_triod, hexagon):
        fk = restrict(collapse_to_triod, hexagon.vertices)
        cls = classify(fk)
        assert cls.epimorphism and not cls.confluent
        edge, block = cls.confluence_failure
        assert set(edge) == {"A", "B"} and block == frozenset(["a2"])

    def test_non_homomorphism_flagged(self):
        g = path_graph(["a", "b"])
        h = Graph(["x", "y"], [])
        cls = classify(Morphism(g, h, {"a": "x", "b": "y"}))
        assert not cls.homomorphism and cls.homomorphism_failure is not None


class TestDefinitionOracle:
    def test_identity_true(self, hexagon):
        assert confluent_by_definition(identity(hexagon))

    def test_restriction_false(self, collapse_to_triod, hexagon):
        assert not confluent_by_definition(restrict(collapse_to_triod, hexagon.vertices))

    def test_classify_matches_oracle_small(self):
        # spot equivalence on all epimorphisms between graphs of <= 4 vertices;
        # the <= 5 sweep lives in the acceptance suite
        graphs = connected_graphs_up_to(4)
        for g in graphs:
            for h in graphs:
                if len(g.vertices) < len(h.vertices):
                    continue
                for f in enumerate_epimorphisms(g, h):
                    cls = classify(f)
                    assert cls.confluent == confluent_by_definition(f)
                    if cls.monotone:
                        assert cls.confluent


class TestEnumeration:
    def test_point_to_point(self):
        pt = point_graph("p")
        assert len(enumerate_confluent_epis(pt, pt)) == 1

    def test_edge_to_point(self):
        assert len(enumerate_confluent_epis(path_graph(["x", "y"]), point_graph("p"))) == 1

    def test_hexagon_to_triangle_frozen_count(self):
        # frozen from the brute-force oracle over all 3^6 vertex maps
        c6 = cycle_graph([f"d{i}" for i in range(6)])
        c3 = cycle_graph([f"c{i}" for i in range(3)])
        found = enumerate_confluent_epis(c6, c3)
        assert len(found) == 126
        oracle = sum(
            1
            for m in all_vertex_maps(c6, c3)
            if (lambda cls: cls.epimorphism and cls.confluent)(classify(m))
        )
        assert oracle == 126

    def test_deterministic_order(self):
        c4 = cycle_graph(["a", "b", "c", "d"])
        tri = cycle_graph(["x", "y", "z"])
        once = enumerate_confluent_epis(c4, tri)
        twice = enumerate_confluent_epis(c4, tri)
        assert once == twice


class TestLiftArc:
    def test_singleton_arc(self, collapse_to_triod):
        assert lift_arc(collapse_to_triod, ["A"], "a1") == ("a1",)

    def test_identity_lifts_whole_arc(self):
        g = path_graph(["a", "b", "c"])
        assert lift_arc(identity(g), ["a", "b", "c"], "a") == ("a", "b", "c")

    def test_running_example_edge_lift(self, collapse_to_triod):
        lifted = lift_arc(collapse_to_triod, ["A", "B"], "a1")
        assert lifted == ("a1", "b1")

    def test_postconditions_on_all_small_arcs(self, collapse_to_triod):
        f = collapse_to_triod
        for a_set in (["A", "B"], ["B", "A", "C"], ["C", "A", "D"], ["B", "A", "D"]):
            ok, ends = is_arc(f.codomain, a_set)
            assert ok
            for b in sorted(f.fiber(ends[0])):
                lifted = lift_arc(f, a_set, b)
                ok_lift, lift_ends = is_arc(f.domain, lifted)
                assert ok_lift and b in lift_ends and lifted[0] == b
                piece = restrict(f, lifted, a_set)
                cls = classify(piece)
                assert cls.epimorphism and cls.monotone

    def test_wrong_end_rejected(self, collapse_to_triod):
        with pytest.raises(ValueError, match="end-vertex"):
            lift_arc(collapse_to_triod, ["A", "B"], "c1")  # c1 maps to C


class TestLiftCycle:
    def test_identity_returns_same_cycle(self):
        g = cycle_graph(["a", "b", "c", "d"])
        c = OrientedCycle.from_host(g, g.vertices)
        assert lift_cycle(identity(g), c).vertex_set() == c.vertex_set()

    def test_double_cover_lifts_to_hexagon(self):
        c6 = cycle_graph([f"d{i}" for i in range(6)])
        c3 = cycle_graph([f"c{i}" for i in range(3)])
        f = Morphism(c6, c3, {f"d{i}": f"c{i % 3}" for i in range(6)})
        assert is_confluent_epi(f)
        target = OrientedCycle.from_host(c3, c3.vertices)
        lifted = lift_cycle(f, target)
        assert lifted.vertex_set() == frozenset(c6.vertices)
        assert f.image(lifted.order) == frozenset(c3.vertices)

    def test_lift_through_doubled_vertex(self):
        # triangle with one vertex doubled across the edge <x,y>
        tri = cycle_graph(["x", "y", "z"])
        host = Graph(
            ["x", "y", "z", "w"],
            [("x", "y"), ("y", "z"), ("z", "x"), ("w", "x"), ("w", "y")],
        )
        f = Morphism(host, tri, {"x": "x", "y": "y", "z": "z", "w": "x"})
        assert is_confluent_epi(f)
        lifted = lift_cycle(f, OrientedCycle.from_host(tri, tri.vertices))
        assert f.image(lifted.order) == frozenset(tri.vertices)
