from __future__ import annotations

from hypothesis import given, settings

from afecheck.algebra import (
    NotUnique, UltrafilterChain, atoms, compute_tower, extend_chain, ultrafilter_from_atom,
    unique_path_label, weakly_left_resolving_check,
)
from afecheck.graph import LabeledGraph, range_of
from afecheck.oracle import naive_partition
from afecheck.verdict import Status

from fixture_graphs import bi_infinite_window, labeled_graphs, single_loop, two_cycle, two_loops


def classes(tower, level):
    g = tower.graph
    return [g.ordered(c) for c in tower.partition(level)]


class TestTower:
    def test_two_cycle(self):
        t = compute_tower(two_cycle())
        assert classes(t, 1) == [["u"], ["v"]]
        assert t.stabilization_level == 1 and t.saturated

    def test_one_vertex(self):
        t = compute_tower(two_loops())
        assert classes(t, 1) == [["v"]]
        assert t.stabilization_level == 1

    def test_common_predecessor(self):
        g = LabeledGraph(["p", "u1", "u2"],
                         [("p", "u1", "a"), ("p", "u2", "a"), ("u1", "p", "b"), ("u2", "p", "b")],
                         ["a", "b"])
        t = compute_tower(g)
        assert t.class_of("u1", 1) == {"u1", "u2"}
        assert t.final == (frozenset({"p"}), frozenset({"u1", "u2"}))

    def test_window_graph_levels(self):
        t = compute_tower(bi_infinite_window())
        assert classes(t, 1) == [["v-2"], ["v-1", "v0", "v2"], ["v1"]]
        assert classes(t, 2) == [["v-2"], ["v-1"], ["v0"], ["v1"], ["v2"]]

    def test_levels_past_depth_are_final(self):
        t = compute_tower(two_cycle())
        assert t.partition(50) == t.final

    def test_bounded_tower_reports_unsaturated(self):
        g = LabeledGraph(["a", "b", "c"], [("a", "b", "0"), ("b", "c", "0"), ("c", "a", "0"),
                                           ("a", "a", "1")], ["0", "1"])
        t = compute_tower(g, L_max=1)
        assert not t.saturated and t.stabilization_level is None


@settings(max_examples=120, deadline=None)
@given(labeled_graphs())
def test_partitions_match_incoming_words(g):
    t = compute_tower(g)
    for l in range(1, t.depth + 3):
        got = sorted((g.ordered(c) for c in t.partition(l)), key=lambda c: g.vertices.index(c[0]))
        assert got == naive_partition(g, l)


@settings(max_examples=120, deadline=None)
@given(labeled_graphs())
def test_partitions_refine_and_cover(g):
    t = compute_tower(g)
    assert t.saturated
    for l in range(1, t.depth + 1):
        p = t.partition(l)
        assert frozenset().union(*p) == g.all_vertices
        assert sum(len(c) for c in p) == len(g.vertices)
        if l > 1:
            coarse = t.partition(l - 1)
            assert all(any(c <= d for d in coarse) for c in p)
    assert frozenset().union(*atoms(t).atoms) == g.all_vertices


class TestAtoms:
    def test_two_cycle_atoms(self):
        assert atoms(two_cycle()).atoms == (frozenset({"u"}), frozenset({"v"}))

    def test_one_vertex_atoms(self):
        a = atoms(single_loop())
        assert a.atoms == (frozenset({"v"}),)
        assert a.contains({"v"}) and a.contains(set())

    def test_membership_is_union_of_atoms(self):
        g = LabeledGraph(["p", "u1", "u2"],
                         [("p", "u1", "a"), ("p", "u2", "a"), ("u1", "p", "b"), ("u2", "p", "b")],
                         ["a", "b"])
        a = atoms(g)
        assert a.contains({"u1", "u2"}) and not a.contains({"u1"})


class TestUniquePathLabel:
    def test_two_cycle(self):
        g = two_cycle()
        assert unique_path_label(g, {"u"}, 1) == ("b",)
        assert unique_path_label(g, {"u"}, 2) == ("a", "b")

    def test_two_loops_not_unique(self):
        r = unique_path_label(two_loops(), {"v"}, 1)
        assert isinstance(r, NotUnique) and r.witnesses == (("a",), ("b",))

    def test_exact_range_but_two_received_words(self):
        # {v0} = r(c) exactly, yet v0 also receives a: not unique
        g = LabeledGraph(["v0", "v1"], [("v0", "v0", "c"), ("v0", "v0", "a"), ("v0", "v1", "b"),
                                        ("v1", "v1", "a")], ["a", "b", "c"])
        assert range_of(g, "c") == {"v0"}
        r = unique_path_label(g, {"v0"}, 1)
        assert isinstance(r, NotUnique) and r.witnesses == (("a",), ("c",))

    def test_no_witness(self):
        g = two_cycle()
        r = unique_path_label(g, {"u", "v"}, 1)
        assert isinstance(r, NotUnique) and r.no_witness


class TestChains:
    def test_two_cycle_chain(self):
        t = compute_tower(two_cycle())
        xi = ultrafilter_from_atom(t, {"u"}, 4)
        assert isinstance(xi, UltrafilterChain)
        assert [xi.level(l) for l in range(1, 5)] == [frozenset({"u"})] * 4
        assert xi.atom == {"u"}

    def test_extend_chain_keeps_prefix(self):
        g = bi_infinite_window()
        t = compute_tower(g)
        partial = [range_of(g, "1")]
        xi = extend_chain(t, partial, 3)
        assert xi.level(1) == {"v1"}
        assert xi.level(1) >= xi.level(2) >= xi.level(3)

    @settings(max_examples=80, deadline=None)
    @given(labeled_graphs())
    def test_extend_chain_agrees_on_given_levels(self, g):
        t = compute_tower(g)
        depth = t.stabilization_level + 2
        for A in atoms(t).atoms:
            full = ultrafilter_from_atom(t, A, depth)
            for m in range(1, depth + 1):
                ext = extend_chain(t, [full.level(l) for l in range(1, m + 1)], depth)
                assert all(ext.level(l) == full.level(l) for l in range(1, m + 1))


class TestWeakLeftResolving:
    def test_two_cycle_holds(self):
        assert weakly_left_resolving_check(two_cycle()).status is Status.HOLDS

    def test_one_vertex_holds(self):
        assert weakly_left_resolving_check(two_loops()).status is Status.HOLDS

    def test_merging_edges_fail(self):
        g = LabeledGraph(["u1", "u2", "v"],
                         [("u1", "v", "a"), ("u2", "v", "a"), ("u1", "u1", "c"),
                          ("u2", "u2", "d"), ("v", "v", "e")], ["a", "c", "d", "e"])
        v = weakly_left_resolving_check(g)
        assert v.status is Status.FAILS
        assert (v.certificate["A"], v.certificate["B"], v.certificate["letter"]) == (["u1"], ["u2"], "a")
        assert v.certificate["intersection"] == ["v"]
