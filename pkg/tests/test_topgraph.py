from __future__ import annotations

import dataclasses
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from afecheck.algebra import weakly_left_resolving_check
from afecheck.errors import HypothesisError
from afecheck.graph import LabeledGraph, LanguageSpec
from afecheck.oracle import naive_pseudoloop
from afecheck.topgraph import (
    NotFound, PseudoPath, build_top_graph, distance_dr, find_pseudoloop, is_pseudoloop,
    metric_rho, shift_conjugacy_check, suffix_word, top_paths, ultrafilter_word_correspondence,
)
from afecheck.verdict import Status

from fixture_graphs import crossing, labeled_graphs, one_one_language, single_loop, two_cycle, two_loops


def edge(T, label):
    return next(j for j in range(len(T.edges)) if T.edge_label(j) == label)


def split_pair():
    """Atoms ``{u1}`` and ``{u2}`` receive the same letters but different 2-words."""
    return LabeledGraph(
        ["x", "y", "u1", "u2"],
        [("x", "x", "c"), ("y", "y", "d"), ("x", "u1", "a"), ("y", "u2", "a"),
         ("u1", "x", "b"), ("u2", "y", "b")],
        ["a", "b", "c", "d"],
    )


def crossing_words():
    return LanguageSpec.forbidding(("a", "b", "c"), ["aa", "ac", "ba", "bc", "cb"])


class TestBuild:
    def test_two_cycle(self):
        T = build_top_graph(two_cycle())
        assert [T.vertex_label(i) for i in range(2)] == ["{u}", "{v}"]
        a, b = edge(T, "(a,{v})"), edge(T, "(b,{u})")
        assert T.vertex_label(T.d[a]) == "{v}" and T.vertex_label(T.r[a]) == "{u}"
        assert T.vertex_label(T.d[b]) == "{u}" and T.vertex_label(T.r[b]) == "{v}"
        assert T.d_injective

    def test_single_loop(self):
        T = build_top_graph(single_loop())
        assert len(T.vertices) == 1 and len(T.edges) == 1
        assert T.d[0] == T.r[0]

    def test_two_loops_not_injective(self):
        T = build_top_graph(two_loops())
        assert len(T.edges) == 2 and T.d[0] == T.d[1]
        assert not T.d_injective

    def test_requires_weak_left_resolving(self):
        g = LabeledGraph(["u1", "u2", "v"],
                         [("u1", "v", "a"), ("u2", "v", "a"), ("u1", "u1", "c"),
                          ("u2", "u2", "d"), ("v", "v", "e")], ["a", "c", "d", "e"])
        with pytest.raises(HypothesisError):
            build_top_graph(g)

    def test_depth_below_stabilization(self):
        with pytest.raises(HypothesisError):
            build_top_graph(split_pair(), 1)

    def test_mode_b(self):
        T = build_top_graph(one_one_language())
        assert T.mode == "B" and T.truncated
        assert T.depth == 12 and len(T.vertices) == 13

    def test_vertex_index(self):
        T = build_top_graph(two_cycle())
        assert T.vertex_label(T.vertex_index("v")) == "{v}"
        with pytest.raises(KeyError):
            T.vertex_index("w")


class TestMetric:
    def test_zero_on_diagonal(self):
        T = build_top_graph(two_cycle(), 3)
        assert T.rho(0, 0) == 0

    def test_differ_at_level_one(self):
        T = build_top_graph(two_cycle())
        assert T.rho(0, 1) == Fraction(1, 2)

    def test_differ_at_level_two(self):
        T = build_top_graph(split_pair())
        assert T.rho(T.vertex_index("u1"), T.vertex_index("u2")) == Fraction(1, 4)

    def test_words(self):
        assert metric_rho(tuple("00"), tuple("10")) == Fraction(1, 4)
        assert metric_rho(tuple("01"), tuple("00")) == Fraction(1, 2)
        with pytest.raises(ValueError):
            metric_rho(tuple("0"), tuple("00"))


@settings(max_examples=80, deadline=None)
@given(labeled_graphs())
def test_metric_axioms(g):
    assume(weakly_left_resolving_check(g).status is Status.HOLDS)
    T = build_top_graph(g)
    n = len(T.vertices)
    for i in range(n):
        assert T.rho(i, i) == 0
        for j in range(n):
            assert T.rho(i, j) == T.rho(j, i)
            assert (T.rho(i, j) == 0) == (i == j)
            for k in range(n):
                assert T.rho(i, k) <= max(T.rho(i, j), T.rho(j, k))


class TestDistance:
    def test_two_cycle_equal(self):
        T = build_top_graph(two_cycle(), 3)
        c = distance_dr(T, edge(T, "(a,{v})"), edge(T, "(b,{u})"), 2)
        assert c.rho == 0 and c.direct and c.criterion

    def test_two_cycle_far(self):
        T = build_top_graph(two_cycle(), 3)
        e = edge(T, "(b,{u})")
        c = distance_dr(T, e, e, 2)
        assert c.rho == Fraction(1, 2)
        assert not c.direct and not c.criterion and c.failing_level == 1

    def test_single_loop(self):
        T = build_top_graph(single_loop(), 4)
        assert all(distance_dr(T, 0, 0, m).rho == 0 for m in range(1, 4))

    def test_equality_criterion_needs_injective_d(self):
        # r(a) and r(b) meet, and the a-loop at v0 has distance 0 to itself, yet
        # r([v0]_1, a) = {v0, v1} is larger than [v0]_2 = {v0}
        g = LabeledGraph(["v0", "v1"], [("v0", "v0", "a"), ("v0", "v1", "a"), ("v1", "v0", "b")],
                         ["a", "b"])
        T = build_top_graph(g, 3)
        e = edge(T, "(a,{v0})")
        c = distance_dr(T, e, e, 1)
        assert c.rho == 0 and c.direct
        assert not c.criterion and c.failing_level == 1
        assert c.containment


class TestPseudoloops:
    def test_single_loop_definition(self):
        T = build_top_graph(single_loop())
        assert is_pseudoloop(T, PseudoPath((0,), 5))

    def test_two_cycle_definition(self):
        T = build_top_graph(two_cycle())
        p = PseudoPath((edge(T, "(b,{u})"), edge(T, "(a,{v})")), 2)
        assert is_pseudoloop(T, p)
        assert not is_pseudoloop(T, PseudoPath((edge(T, "(a,{v})"),), 2))

    def test_single_loop_search(self):
        T = build_top_graph(single_loop())
        assert find_pseudoloop(T, 0, 6).edges == (0,)

    def test_two_cycle_search(self):
        T = build_top_graph(two_cycle())
        p = find_pseudoloop(T, T.vertex_index("u"), 4)
        assert [T.edges[j].letter for j in p.edges] == ["b", "a"]
        assert p.to_dict(T)["edges"] == ["(b,{u})", "(a,{v})"]
        assert p.to_dict(T)["distances"] == ["0", "0"]

    def test_crossing_graph_has_loop_at_v(self):
        # d is not injective here; the b-loop at {v} is a pseudoloop at every scale
        T = build_top_graph(crossing())
        p = find_pseudoloop(T, T.vertex_index("v"), 4)
        assert [T.edge_label(j) for j in p.edges] == ["(b,{v})"]

    def test_crossing_words_not_found(self):
        T = build_top_graph(crossing_words(), 2)
        r = find_pseudoloop(T, T.vertex_index("ab"), 1)
        assert isinstance(r, NotFound)
        assert r.certificate["block"] == "ab"
        assert r.certificate["prefix_component"] != r.certificate["suffix_component"]
        assert naive_pseudoloop(T, T.vertex_index("ab"), 1) is None

    def test_mode_b_needs_depth(self):
        T = build_top_graph(crossing_words(), 2)
        with pytest.raises(HypothesisError):
            find_pseudoloop(T, 0, 5)

    def test_mode_b_dead_block_is_skipped(self):
        # 0101 avoids both forbidden words but has no left prolongation, so the
        # loop must pass through 1101 instead
        T = build_top_graph(LanguageSpec.forbidding(("0", "1"), ["001", "1010"]), 4)
        assert T.vertex_index("0101") not in T.d
        p = find_pseudoloop(T, T.vertex_index("0110"), 1)
        assert is_pseudoloop(T, p)
        assert [T.vertex_label(T.d[j]) for j in p.edges] == ["0110", "1101"]

    def test_mode_b_dead_base(self):
        T = build_top_graph(LanguageSpec.forbidding(("0", "1"), ["001", "1010"]), 4)
        r = find_pseudoloop(T, T.vertex_index("0101"), 1)
        assert isinstance(r, NotFound) and r.certificate == {"block": "0101"}

    def test_mode_b_zero_word(self):
        T = build_top_graph(one_one_language())
        i = T.vertex_index("0" * 12)
        p = find_pseudoloop(T, i, 6)
        assert is_pseudoloop(T, p)


@settings(max_examples=80, deadline=None)
@given(labeled_graphs())
def test_search_results_are_pseudoloops(g):
    assume(weakly_left_resolving_check(g).status is Status.HOLDS)
    T = build_top_graph(g, None)
    for i in range(len(T.vertices)):
        for k in range(0, 4):
            r = find_pseudoloop(T, i, k)
            if isinstance(r, NotFound):
                assert naive_pseudoloop(T, i, k) is None
            else:
                assert is_pseudoloop(T, r) and T.d[r.edges[0]] == i


@st.composite
def forbidden_languages(draw):
    alphabet = draw(st.sampled_from([("0", "1"), ("a", "b", "c")]))
    ws = draw(st.lists(st.lists(st.sampled_from(alphabet), min_size=2, max_size=4).map(tuple),
                       min_size=1, max_size=3))
    return LanguageSpec.forbidding(alphabet, ws)


@settings(max_examples=80, deadline=None)
@given(forbidden_languages())
def test_mode_b_search_matches_naive(spec):
    T = build_top_graph(spec, 4)
    for i in range(len(T.vertices)):
        for k in range(3):
            r = find_pseudoloop(T, i, k)
            if isinstance(r, NotFound):
                assert naive_pseudoloop(T, i, k) is None
            else:
                assert is_pseudoloop(T, r) and T.d[r.edges[0]] == i


class TestWordsAndShift:
    def test_two_cycle_suffix_word(self):
        T = build_top_graph(two_cycle(), 3)
        u = T.vertex_index("u")
        assert suffix_word(T, u, 3) == tuple("bab")
        assert ultrafilter_word_correspondence(T, u) == tuple("bab")

    def test_single_loop_word(self):
        T = build_top_graph(single_loop(), 3)
        assert ultrafilter_word_correspondence(T, 0) == tuple("aaa")

    def test_mode_b_word_is_vertex(self):
        T = build_top_graph(crossing_words(), 3)
        assert all(ultrafilter_word_correspondence(T, i) == T.vertices[i] for i in range(len(T.vertices)))

    def test_single_loop_conjugacy(self):
        assert shift_conjugacy_check(build_top_graph(single_loop(), 3)).status is Status.HOLDS

    def test_two_cycle_conjugacy(self):
        T = build_top_graph(two_cycle(), 3)
        assert shift_conjugacy_check(T, 4).status is Status.HOLDS
        assert len(top_paths(T, 4)) == 2

    def test_corrupted_range_map_fails(self):
        T = build_top_graph(two_cycle(), 3)
        assert shift_conjugacy_check(T, 4).status is Status.HOLDS
        v = shift_conjugacy_check(dataclasses.replace(T, r=tuple(1 - x for x in T.r)), 4)
        assert v.status is Status.FAILS
        assert v.certificate["shifted"] != v.certificate["expected"]

    def test_not_injective_is_unknown(self):
        assert shift_conjugacy_check(build_top_graph(two_loops())).status is Status.UNKNOWN
