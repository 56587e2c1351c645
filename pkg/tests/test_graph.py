from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afecheck.errors import AlphabetError, ValidationError
from afecheck.graph import (
    LabeledGraph, LanguageSpec, SkewProductSpec, as_word, expand_pattern, fmt_word, label_blocks,
    label_blocks_into, range_of, relative_range, skew_product, source_of, trivially_labeled,
)
from afecheck.oracle import naive_relative_range

from fixture_graphs import bi_infinite_window, labeled_graphs, two_cycle, two_loops


class TestValidation:
    def test_two_cycle_builds(self):
        g = two_cycle()
        assert len(g.vertices) == 2 and len(g.edges) == 2

    @pytest.mark.parametrize(
        "vertices, edges, alphabet, invariant",
        [
            (["u", "v", "w"], [("u", "v", "a"), ("v", "u", "b"), ("u", "w", "a")], ["a", "b"], "sink"),
            (["u", "v"], [("u", "u", "a"), ("v", "u", "a")], ["a"], "source"),
            (["u"], [("u", "u", "a")], ["a", "b"], "labeling-not-onto"),
            (["u"], [("u", "x", "a")], ["a"], "unknown-vertex"),
            (["u"], [("u", "u", "z")], ["a"], "unknown-letter"),
            (["u", "u"], [("u", "u", "a")], ["a"], "duplicate-vertex"),
            ([], [], [], "empty"),
        ],
    )
    def test_invariants(self, vertices, edges, alphabet, invariant):
        with pytest.raises(ValidationError) as info:
            LabeledGraph(vertices, edges, alphabet)
        assert info.value.invariant == invariant

    def test_non_strict_allows_boundary(self):
        g = bi_infinite_window()
        assert not g.strict and len(g.edges) == 4


class TestWords:
    def test_as_word_and_format(self):
        assert as_word("ab") == ("a", "b")
        assert fmt_word(("a", "b")) == "ab"
        assert fmt_word(("(a,0)", "(b,1)")) == "(a,0) (b,1)"

    def test_expand_pattern(self):
        assert expand_pattern("10{0,2}1") == ["11", "101", "1001"]
        assert expand_pattern("a{2}b") == ["aab"]
        with pytest.raises(ValueError):
            expand_pattern("a{3,1}")


class TestRanges:
    def test_two_cycle_relative_range(self):
        g = two_cycle()
        assert relative_range(g, {"u"}, "a") == {"v"}
        assert range_of(g, "ab") == {"u"}
        assert source_of(g, "a") == {"u"}

    def test_empty_start(self):
        g = two_cycle()
        assert relative_range(g, set(), "ab") == frozenset()

    def test_empty_word_is_identity(self):
        assert relative_range(two_cycle(), {"u"}, "") == {"u"}

    def test_two_loops_equal_ranges(self):
        g = two_loops()
        assert range_of(g, "a") == range_of(g, "b") == {"v"}

    def test_window_graph(self):
        g = bi_infinite_window()
        assert relative_range(g, g.vertices, "1") == {"v1"}
        assert label_blocks(g, {"v0"}, 2) == {("1", "0")}

    def test_label_blocks(self):
        g = two_cycle()
        assert label_blocks(g, {"u"}, 2) == {("a", "b")}
        assert label_blocks(g, g.vertices, 1) == {("a",), ("b",)}
        assert label_blocks_into(g, {"u"}, 2) == {("a", "b")}

    def test_unknown_letter(self):
        with pytest.raises(AlphabetError):
            relative_range(two_cycle(), {"u"}, "z")


@settings(max_examples=150, deadline=None)
@given(labeled_graphs(), st.data())
def test_relative_range_matches_enumeration(g, data):
    A = data.draw(st.sets(st.sampled_from(g.vertices)))
    w = tuple(data.draw(st.lists(st.sampled_from(g.alphabet), max_size=4)))
    assert relative_range(g, A, w) == naive_relative_range(g, A, w)


@settings(max_examples=150, deadline=None)
@given(labeled_graphs(), st.data())
def test_relative_range_union_and_composition(g, data):
    A = frozenset(data.draw(st.sets(st.sampled_from(g.vertices))))
    B = frozenset(data.draw(st.sets(st.sampled_from(g.vertices))))
    u = tuple(data.draw(st.lists(st.sampled_from(g.alphabet), max_size=3)))
    v = tuple(data.draw(st.lists(st.sampled_from(g.alphabet), max_size=3)))
    assert relative_range(g, A | B, u) == relative_range(g, A, u) | relative_range(g, B, u)
    assert relative_range(g, A, u + v) == relative_range(g, relative_range(g, A, u), v)
    assert relative_range(g, A & B, u) <= relative_range(g, A, u) & relative_range(g, B, u)


@settings(max_examples=100, deadline=None)
@given(labeled_graphs())
def test_full_alphabet_is_read(g):
    assert label_blocks(g, g.vertices, 1) == {(a,) for a in g.alphabet}


class TestSkewProduct:
    def test_unit_cocycle_single_edge(self):
        g = two_cycle()
        sp = skew_product(SkewProductSpec(g, c=1, d=0, window=1))
        assert ("(u,0)", "(v,1)", "(a,0)") in sp.graph.edges

    def test_two_cycle_window_one(self):
        sp = skew_product(SkewProductSpec(two_cycle(), c=1, d=0, window=1))
        pairs = {(e.source, e.target) for e in sp.graph.edges}
        # all edges whose two layers lie in -1..1
        assert pairs == {("(u,-1)", "(v,0)"), ("(v,-1)", "(u,0)"), ("(u,0)", "(v,1)"),
                         ("(v,0)", "(u,1)")}
        assert sp.truncated

    def test_zero_cocycle_copies_layers(self):
        g = two_cycle()
        sp = skew_product(SkewProductSpec(g, c=0, d=0, window=2))
        assert len(sp.graph.edges) == 5 * len(g.edges)
        assert not sp.truncated
        for e in sp.graph.edges:
            assert e.source[-2:] == e.target[-2:]

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError):
            SkewProductSpec(two_cycle(), window=0)

    def test_cocycle_length_checked(self):
        with pytest.raises(ValueError):
            SkewProductSpec(two_cycle(), c=[1, 2, 3])


def test_language_spec_requires_one_source():
    with pytest.raises(ValueError):
        LanguageSpec(("a",))
    with pytest.raises(AlphabetError):
        LanguageSpec.forbidding(("a",), ["b"])


def test_trivially_labeled_is_identity():
    g = trivially_labeled(["u", "v"], [("u", "v"), ("v", "u"), ("u", "u")])
    assert g.is_identity_labeled()
    assert not bi_infinite_window().is_identity_labeled()
