"""Labeled graphs over a finite alphabet and their path/range computations.

Vertex ids and letters are strings. A word is a tuple of letters; the empty
tuple is the empty word, whose relative range from ``A`` is ``A`` itself.
Vertex sets are plain frozensets of vertex ids; :meth:`LabeledGraph.ordered`
gives them the graph's canonical (declaration) order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from .errors import AlphabetError, ValidationError

Word = tuple
VertexSet = frozenset
EMPTY_WORD: Word = ()


class Edge(NamedTuple):
    source: str
    target: str
    label: str


def as_word(value, alphabet: Sequence[str] | None = None) -> Word:
    """Coerce a string, list or tuple into a word.

    Strings containing whitespace are split on it; otherwise a string is read
    one character per letter. The empty string is the empty word.
    """
    if isinstance(value, tuple):
        word = value
    elif isinstance(value, str):
        word = tuple(value.split()) if any(c.isspace() for c in value) else tuple(value)
    else:
        word = tuple(value)
    if alphabet is not None:
        check_word(word, alphabet)
    return word


def check_word(word: Word, alphabet: Iterable[str]) -> None:
    letters = set(alphabet)
    for a in word:
        if a not in letters:
            raise AlphabetError(f"letter {a!r} is not in the alphabet")


def fmt_word(word: Word) -> str:
    """Render a word as a string; multi-character letters are space separated."""
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return " ".join(word)


@dataclass(frozen=True)
class LabeledGraph:
    """Finite directed multigraph with an onto labeling E^1 -> alphabet.

    With ``strict=True`` (the default) the constructor enforces the standing
    assumptions: no sinks, no sources, and every letter used by some edge.
    Truncated constructions (skew products) build with ``strict=False``.
    """

    vertices: tuple
    edges: tuple
    alphabet: tuple
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        self._check_references()
        if self.strict:
            self.check_standing_assumptions()

    def _check_references(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate-vertex", "vertex ids must be distinct")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValidationError("duplicate-letter", "alphabet letters must be distinct")
        known = set(self.vertices)
        letters = set(self.alphabet)
        for i, (s, t, a) in enumerate(self.edges):
            for end in (s, t):
                if end not in known:
                    raise ValidationError(
                        "unknown-vertex", f"edge {i} references undeclared vertex {end}"
                    )
            if a not in letters:
                raise ValidationError(
                    "unknown-letter", f"edge {i} is labeled {a!r}, which is not in the alphabet"
                )

    def check_standing_assumptions(self):
        """Raise :class:`ValidationError` on a sink, a source or an unused letter."""
        if not self.vertices:
            raise ValidationError("empty", "graph has no vertices")
        outs = {e.source for e in self.edges}
        ins = {e.target for e in self.edges}
        for v in self.vertices:
            if v not in outs:
                raise ValidationError("sink", f"vertex {v} is a sink (no outgoing edge)")
            if v not in ins:
                raise ValidationError("source", f"vertex {v} is a source (no incoming edge)")
        used = {e.label for e in self.edges}
        for a in self.alphabet:
            if a not in used:
                raise ValidationError(
                    "labeling-not-onto", f"letter {a!r} labels no edge (labeling must be onto)"
                )

    # -- indexes -----------------------------------------------------------

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def all_vertices(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def _forward(self) -> dict:
        table: dict = {}
        for s, t, a in self.edges:
            table.setdefault((s, a), set()).add(t)
        return {k: frozenset(v) for k, v in table.items()}

    @cached_property
    def _backward(self) -> dict:
        table: dict = {}
        for s, t, a in self.edges:
            table.setdefault((t, a), set()).add(s)
        return {k: frozenset(v) for k, v in table.items()}

    @cached_property
    def out_letters(self) -> dict:
        table = {v: set() for v in self.vertices}
        for s, _, a in self.edges:
            table[s].add(a)
        return {v: frozenset(x) for v, x in table.items()}

    def successors(self, v: str, a: str) -> frozenset:
        return self._forward.get((v, a), frozenset())

    def predecessors(self, v: str, a: str) -> frozenset:
        return self._backward.get((v, a), frozenset())

    def ordered(self, vs: Iterable[str]) -> list:
        """Vertices of ``vs`` in canonical order."""
        return sorted(vs, key=self.index.__getitem__)

    def step(self, vs: frozenset, a: str) -> frozenset:
        """One-letter relative range ``r(vs, a)``."""
        out = set()
        for v in vs:
            out |= self._forward.get((v, a), frozenset())
        return frozenset(out)

    def back_step(self, vs: frozenset, a: str) -> frozenset:
        out = set()
        for v in vs:
            out |= self._backward.get((v, a), frozenset())
        return frozenset(out)

    @cached_property
    def _range_levels(self) -> list:
        return [{(): self.all_vertices}]

    def word_ranges(self, k: int) -> dict:
        """Map every length-``k`` word of ``L(E^k)`` to its range ``r(word)``.

        Memoized per length; callers must not mutate the returned dict.
        """
        levels = self._range_levels
        while len(levels) <= k:
            nxt = {}
            for word, vs in levels[-1].items():
                for a in self.alphabet:
                    t = self.step(vs, a)
                    if t:
                        nxt[word + (a,)] = t
            levels.append(nxt)
        return levels[k]

    def is_identity_labeled(self) -> bool:
        return len({e.label for e in self.edges}) == len(self.edges)


def trivially_labeled(vertices: Sequence[str], pairs: Iterable[tuple], prefix: str = "e") -> LabeledGraph:
    """Graph whose labeling is the identity on edges (letter ``e<i>`` for edge i)."""
    edges = [(s, t, f"{prefix}{i}") for i, (s, t) in enumerate(pairs)]
    return LabeledGraph(vertices, edges, [e[2] for e in edges])


def _letters_ok(g: LabeledGraph, w: Word):
    check_word(w, g.alphabet)


def relative_range(g: LabeledGraph, A: Iterable[str], w) -> frozenset:
    """``r(A, w)``: endpoints of paths labeled ``w`` that start in ``A``.

    Computed one letter at a time as a subset transition. ``r(A, ()) = A``.
    """
    w = as_word(w)
    _letters_ok(g, w)
    current = frozenset(A)
    for a in w:
        if not current:
            break
        current = g.step(current, a)
    return current


def range_of(g: LabeledGraph, w) -> frozenset:
    """``r(w)``, the relative range from the whole vertex set."""
    return relative_range(g, g.all_vertices, w)


def source_of(g: LabeledGraph, w) -> frozenset:
    """``s(w)``: start vertices of paths labeled ``w``."""
    w = as_word(w)
    _letters_ok(g, w)
    current = g.all_vertices
    for a in reversed(w):
        if not current:
            break
        current = g.back_step(current, a)
    return current


def label_blocks(g: LabeledGraph, A: Iterable[str], k: int) -> frozenset:
    """``L(A E^k)``: labels of length-``k`` paths starting in ``A``."""
    if k < 1:
        raise ValueError("block length must be at least 1")
    level = {(): frozenset(A)}
    for _ in range(k):
        nxt = {}
        for word, vs in level.items():
            for a in g.alphabet:
                t = g.step(vs, a)
                if t:
                    nxt[word + (a,)] = t
        level = nxt
    return frozenset(level)


def label_blocks_into(g: LabeledGraph, A: Iterable[str], k: int) -> frozenset:
    """``L(E^k A)``: labels of length-``k`` paths ending in ``A``."""
    if k < 1:
        raise ValueError("block length must be at least 1")
    level = {(): frozenset(A)}
    for _ in range(k):
        nxt = {}
        for word, vs in level.items():
            for a in g.alphabet:
                s = g.back_step(vs, a)
                if s:
                    nxt[(a,) + word] = s
        level = nxt
    return frozenset(level)


# -- languages -----------------------------------------------------------------

_REPEAT = re.compile(r"(.)\{(\d+)(?:,(\d+))?\}")


def expand_pattern(pattern: str) -> list:
    """Expand single-letter repetitions ``x{lo,hi}`` / ``x{k}`` in a forbidden pattern.

    ``"10{0,2}1"`` expands to ``["11", "101", "1001"]``. Each letter is one
    character.
    """
    parts = []
    pos = 0
    for m in _REPEAT.finditer(pattern):
        if m.start() > pos:
            parts.append([pattern[pos:m.start()]])
        lo = int(m.group(2))
        hi = int(m.group(3)) if m.group(3) is not None else lo
        if hi < lo:
            raise ValueError(f"bad repetition {m.group(0)!r}")
        parts.append([m.group(1) * k for k in range(lo, hi + 1)])
        pos = m.end()
    if pos < len(pattern):
        parts.append([pattern[pos:]])
    words = [""]
    for choices in parts:
        words = [w + c for w in words for c in choices]
    return words


@dataclass(frozen=True)
class LanguageSpec:
    """A shift language given by a labeled graph or by forbidden words."""

    alphabet: tuple
    graph: LabeledGraph | None = None
    forbidden: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if (self.graph is None) == (self.forbidden is None):
            raise ValueError("exactly one of graph / forbidden must be given")
        if self.forbidden is not None:
            words = tuple(sorted({as_word(w) for w in self.forbidden}))
            for w in words:
                if not w:
                    raise ValidationError("empty-forbidden-word", "forbidden words must be nonempty")
                check_word(w, self.alphabet)
            object.__setattr__(self, "forbidden", words)
        elif tuple(self.graph.alphabet) != self.alphabet:
            raise ValidationError("alphabet-mismatch", "language alphabet differs from graph alphabet")

    @classmethod
    def from_graph(cls, g: LabeledGraph) -> "LanguageSpec":
        return cls(g.alphabet, graph=g)

    @classmethod
    def forbidding(cls, alphabet, words) -> "LanguageSpec":
        return cls(alphabet, forbidden=tuple(as_word(w) for w in words))

    @property
    def is_graph_derived(self) -> bool:
        return self.graph is not None


def at_most_one_one(window: int = 22) -> LanguageSpec:
    """Binary blocks with at most one ``1``, as the forbidden list ``1 0^k 1``, k <= window.

    Blocks of length up to ``window + 2`` agree with the bi-infinite language.
    """
    return LanguageSpec.forbidding(("0", "1"), expand_pattern("10{0,%d}1" % window))


# -- skew products -------------------------------------------------------------


def _cocycle(values, n_edges: int) -> tuple:
    if isinstance(values, int):
        return (values,) * n_edges
    if isinstance(values, Mapping):
        return tuple(int(values.get(i, 0)) for i in range(n_edges))
    values = tuple(int(x) for x in values)
    if len(values) != n_edges:
        raise ValueError(f"cocycle needs {n_edges} values, got {len(values)}")
    return values


@dataclass(frozen=True)
class SkewProductSpec:
    """Base graph, integer cocycles ``c`` (ranges) and ``d`` (labels), window ``W``.

    Cocycles may be given as a constant, a per-edge sequence or a mapping from
    edge index to value (missing edges get 0).
    """

    base: LabeledGraph
    c: Union[int, Sequence[int], Mapping] = 1
    d: Union[int, Sequence[int], Mapping] = 0
    window: int = 1

    def __post_init__(self):
        n = len(self.base.edges)
        object.__setattr__(self, "c", _cocycle(self.c, n))
        object.__setattr__(self, "d", _cocycle(self.d, n))
        if self.window < 1:
            raise ValueError("empty window: the group window must be at least 1")


@dataclass(frozen=True)
class SkewProduct:
    graph: LabeledGraph
    boundary: frozenset  # vertices that are sinks or sources after truncation

    @property
    def truncated(self) -> bool:
        return bool(self.boundary)


def layer(v: str, g: int) -> str:
    return f"({v},{g})"


def skew_product(spec: SkewProductSpec) -> SkewProduct:
    """Truncation of ``(E x_c Z, L_d)`` to layers ``-W..W``.

    Edge ``(e, g)`` runs from ``(s(e), g)`` to ``(r(e), g + c(e))`` with label
    ``(L(e), g + d(e))``; it is kept when both layers lie in the window.
    """
    W = spec.window
    base = spec.base
    layers = range(-W, W + 1)
    vertices = [layer(v, g) for g in layers for v in base.vertices]
    edges = []
    for g in layers:
        for i, (s, t, a) in enumerate(base.edges):
            h = g + spec.c[i]
            if -W <= h <= W:
                edges.append((layer(s, g), layer(t, h), layer(a, g + spec.d[i])))
    alphabet = sorted({e[2] for e in edges})
    graph = LabeledGraph(vertices, edges, alphabet, strict=False)
    outs = {e[0] for e in edges}
    ins = {e[1] for e in edges}
    boundary = frozenset(v for v in vertices if v not in outs or v not in ins)
    return SkewProduct(graph, boundary)
