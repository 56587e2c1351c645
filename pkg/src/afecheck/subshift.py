"""Block languages, overlap graphs and bounded dynamical checks on the shift.

A source is either a :class:`LabeledGraph` (the language of its labeled
paths) or a :class:`LanguageSpec`. Forbidden-word specs are read as shifts of
finite type: a block is allowed when it has no forbidden factor.

Both presentations are run as a deterministic automaton over finite words
(subset construction over the vertices, or a sliding suffix window), so a
word is allowed exactly when its run never dies.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Union

import networkx as nx

from .errors import BoundExceeded, HypothesisError
from .graph import LabeledGraph, LanguageSpec, Word, as_word, fmt_word
from .verdict import Verdict

Source = Union[LabeledGraph, LanguageSpec]

DEFAULT_MAX_BLOCKS = 400_000


class BlockLanguage:
    """Memoized factor language of a source. Block sets are write-once per length."""

    def __init__(self, source: Source, max_blocks: int = DEFAULT_MAX_BLOCKS):
        self.source = source
        self.max_blocks = max_blocks
        if isinstance(source, LanguageSpec) and source.is_graph_derived:
            source = source.graph
        if isinstance(source, LabeledGraph):
            self.graph = source
            self.forbidden = None
            self.alphabet = source.alphabet
            self.start = source.all_vertices
        else:
            self.graph = None
            self.forbidden = source.forbidden
            self.alphabet = source.alphabet
            self.memory = max(len(f) for f in self.forbidden) - 1
            self._by_last: dict = {}
            for f in self.forbidden:
                self._by_last.setdefault(f[-1], []).append(f)
            self.start = ()
        self._levels = [{(): self.start}]

    @property
    def graph_derived(self) -> bool:
        return self.graph is not None

    def step(self, state, a):
        """Advance the automaton by one letter; ``None`` when the word dies."""
        if self.graph is not None:
            nxt = self.graph.step(state, a)
            return nxt or None
        w = state + (a,)
        for f in self._by_last.get(a, ()):
            if len(f) <= len(w) and w[len(w) - len(f):] == f:
                return None
        return w[max(0, len(w) - self.memory):]

    def run(self, word) -> object:
        state = self.start
        for a in word:
            state = self.step(state, a)
            if state is None:
                return None
        return state

    def accepts(self, word) -> bool:
        return self.run(as_word(word)) is not None

    def level(self, m: int) -> dict:
        """Allowed ``m``-blocks mapped to their automaton state."""
        levels = self._levels
        while len(levels) <= m:
            nxt = {}
            for word, state in levels[-1].items():
                for a in self.alphabet:
                    t = self.step(state, a)
                    if t is not None:
                        nxt[word + (a,)] = t
            if len(nxt) > self.max_blocks:
                raise BoundExceeded(
                    f"more than {self.max_blocks} blocks of length {len(levels)}"
                )
            levels.append(nxt)
        return levels[m]

    def blocks(self, m: int) -> frozenset:
        if m < 0:
            raise ValueError("block length must be nonnegative")
        return frozenset(self.level(m))

    def count(self, m: int) -> int:
        return len(self.level(m))


@lru_cache(maxsize=512)
def block_language(source: Source) -> BlockLanguage:
    return BlockLanguage(source)


def blocks(source: Source, m: int) -> frozenset:
    """Allowed words of length ``m``."""
    if m < 1:
        raise ValueError("block length must be at least 1")
    return block_language(source).blocks(m)


# -- overlap graphs ------------------------------------------------------------


@dataclass(frozen=True)
class OverlapGraph:
    """Nodes are allowed ``(m-1)``-blocks, arcs are allowed ``m``-blocks.

    Arc ``w`` runs from ``w[:-1]`` to ``w[1:]``. Closed walks are exactly the
    cyclic letter sequences all of whose ``m``-windows are allowed.
    """

    m: int
    nodes: tuple
    arcs: tuple

    @cached_property
    def digraph(self) -> nx.DiGraph:
        G = nx.DiGraph()
        G.add_nodes_from(self.nodes)
        for w in self.arcs:
            G.add_edge(w[:-1], w[1:])
        return G

    @cached_property
    def component(self) -> dict:
        comp = {}
        sccs = sorted((sorted(c) for c in nx.strongly_connected_components(self.digraph)))
        for i, c in enumerate(sccs):
            for node in c:
                comp[node] = i
        return comp

    def on_cycle(self, arc: Word) -> bool:
        return self.component[arc[:-1]] == self.component[arc[1:]]

    def off_cycle_arcs(self) -> list:
        return [w for w in self.arcs if not self.on_cycle(w)]

    def return_path(self, arc: Word) -> list | None:
        """Shortest node path from ``arc[1:]`` back to ``arc[:-1]``, or ``None``."""
        start, goal = arc[1:], arc[:-1]
        if start == goal:
            return [start]
        prev = {start: None}
        queue = deque([start])
        succ = self._successors
        while queue:
            node = queue.popleft()
            for nxt in succ.get(node, ()):
                if nxt not in prev:
                    prev[nxt] = node
                    if nxt == goal:
                        path = [nxt]
                        while prev[path[-1]] is not None:
                            path.append(prev[path[-1]])
                        return path[::-1]
                    queue.append(nxt)
        return None

    @cached_property
    def _successors(self) -> dict:
        succ: dict = {}
        for w in self.arcs:
            succ.setdefault(w[:-1], []).append(w[1:])
        return succ

    def closed_walk(self, arc: Word) -> Word | None:
        """A cyclic word (one period) whose first ``m``-window is ``arc``."""
        path = self.return_path(arc)
        if path is None:
            return None
        # path runs arc[1:] -> ... -> arc[:-1]; each step appends one letter
        word = list(arc)
        for node in path[1:]:
            word.append(node[-1])
        # the last m-1 letters repeat arc[:-1]; drop them to get one period
        period = word[: len(word) - (self.m - 1)]
        return tuple(period)


def overlap_graph(source: Source, m: int) -> OverlapGraph:
    if m < 2:
        raise ValueError("overlap graphs need block length m >= 2")
    lang = block_language(source)
    return OverlapGraph(m, tuple(sorted(lang.level(m - 1))), tuple(sorted(lang.level(m))))


def non_recurrent_blocks(source: Source, m: int) -> frozenset:
    """Allowed ``m``-blocks lying on no closed walk of the overlap graph."""
    return frozenset(overlap_graph(source, m).off_cycle_arcs())


def pseudo_periodicity_check(source: Source, M: int = 12) -> Verdict:
    """Every allowed ``m``-block, ``2 <= m <= M``, lies on a closed walk of ``overlap_graph(m)``."""
    if M < 2:
        raise ValueError("M must be at least 2")
    for m in range(2, M + 1):
        try:
            bad = overlap_graph(source, m).off_cycle_arcs()
        except BoundExceeded as exc:
            return Verdict.unknown({"M": M}, note=str(exc), checked_through=m - 1)
        if bad:
            return Verdict.fails(
                {"M": M}, m=m, block=fmt_word(bad[0]),
                reason="block endpoints lie in different strongly connected components",
                offending=[fmt_word(w) for w in bad],
            )
    return Verdict.holds({"M": M})


# -- minimality ----------------------------------------------------------------


def _avoiding_block(lang: BlockLanguage, alpha: Word, N: int) -> Word | None:
    """Lexicographically least allowed ``N``-block with no occurrence of ``alpha``."""
    keep = len(alpha) - 1
    frontier = {(lang.start, ()): ()}
    for _ in range(N):
        nxt: dict = {}
        for (state, tail), word in sorted(frontier.items(), key=lambda kv: _lex(lang, kv[1])):
            for a in lang.alphabet:
                t = lang.step(state, a)
                if t is None:
                    continue
                window = tail + (a,)
                if len(window) == len(alpha) and window == alpha:
                    continue
                key = (t, window[max(0, len(window) - keep):] if keep else ())
                if key not in nxt:
                    nxt[key] = word + (a,)
        frontier = nxt
        if not frontier:
            return None
    return min(frontier.values(), key=lambda w: _lex(lang, w))


def _lex(lang: BlockLanguage, word: Word) -> tuple:
    order = {a: i for i, a in enumerate(lang.alphabet)}
    return tuple(order[a] for a in word)


def minimality_check(source: Source, k: int = 4, N: int = 24) -> Verdict:
    """Bounded uniform recurrence: every allowed ``N``-block contains every allowed block of length <= ``k``.

    Fails carries the shortest (then least) block ``alpha`` and an allowed
    ``N``-block avoiding it.
    """
    if not 1 <= k <= N:
        raise ValueError("need 1 <= k <= N")
    lang = block_language(source)
    for length in range(1, k + 1):
        for alpha in sorted(lang.level(length), key=lambda w: _lex(lang, w)):
            w = _avoiding_block(lang, alpha, N)
            if w is not None:
                return Verdict.fails({"k": k, "N": N}, alpha=fmt_word(alpha), block=fmt_word(w))
    return Verdict.holds({"k": k, "N": N})


# -- finiteness of the closure -------------------------------------------------


def presentation_graph(source: Source) -> LabeledGraph | None:
    """A graph whose bi-infinite label sequences are exactly the shift's points.

    For a forbidden-word spec this is the essential part of the de Bruijn
    graph on allowed ``(L-1)``-blocks, ``L`` the longest forbidden length
    (at least 2); ``None`` when the shift is empty.
    """
    if isinstance(source, LabeledGraph):
        return source
    if source.is_graph_derived:
        return source.graph
    lang = block_language(source)
    L = max(2, lang.memory + 1)
    nodes = set(lang.level(L - 1))
    arcs = set(lang.level(L))
    while True:
        outs = {w[:-1] for w in arcs}
        ins = {w[1:] for w in arcs}
        live = nodes & outs & ins
        kept = {w for w in arcs if w[:-1] in live and w[1:] in live}
        if live == nodes and kept == arcs:
            break
        nodes, arcs = live, kept
    if not arcs:
        return None
    name = {n: "[" + " ".join(n) + "]" for n in nodes}
    used = {w[-1] for w in arcs}
    alphabet = [a for a in source.alphabet if a in used]
    edges = [(name[w[:-1]], name[w[1:]], w[-1]) for w in sorted(arcs)]
    return LabeledGraph(sorted(name.values()), edges, alphabet)


def closure_infinite_check(source: Source, M: int = 12) -> Verdict:
    """Decide whether the closure of the bi-infinite label sequences is infinite.

    With ``p(m)`` the number of ``m``-blocks of a presentation graph with ``n``
    vertices: a finite closure has at most ``n`` points, so ``p(m) > n``
    certifies an infinite one; ``p(m) == p(m-1)`` forces unique extensions and
    hence a finite union of periodic orbits. One of the two happens by
    ``m = n + 1``.
    """
    g = presentation_graph(source)
    if g is None:
        return Verdict.fails({"M": M}, reason="the shift is empty", points=0)
    bound = len(g.vertices)
    lang = block_language(g)
    counts = []
    for m in range(1, M + 1):
        try:
            p = lang.count(m)
        except BoundExceeded as exc:
            return Verdict.unknown({"M": M}, note=str(exc), counts=counts)
        counts.append(p)
        if p > bound:
            return Verdict.holds(
                {"M": M}, m=m, blocks=p, finite_closure_max_points=bound, counts=counts,
                reason="more m-blocks than a finite closure can have points",
            )
        if m > 1 and p == counts[-2]:
            return Verdict.fails(
                {"M": M}, m=m - 1, points=p, counts=counts,
                reason="every block has a unique extension: finite union of periodic orbits",
            )
    return Verdict.unknown({"M": M}, counts=counts)


# -- the shift on bi-infinite windows ------------------------------------------


@dataclass(frozen=True)
class BiInfiniteWindow:
    """Finite view ``a_[-left, right]`` of a bi-infinite word.

    ``letters[left]`` is the letter at position 0. The text form puts a dot
    before position 0: ``"00.1000"``.
    """

    letters: Word
    left: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if not 0 <= self.left <= len(self.letters):
            raise ValueError("position 0 must lie in the window")

    @classmethod
    def parse(cls, text: str) -> "BiInfiniteWindow":
        if text.count(".") != 1:
            raise ValueError("window text needs exactly one '.' before position 0")
        lhs, rhs = text.split(".")
        return cls(as_word(lhs) + as_word(rhs), len(as_word(lhs)))

    @property
    def right(self) -> int:
        """Largest position in the window."""
        return len(self.letters) - self.left - 1

    def at(self, i: int) -> str:
        if not -self.left <= i <= self.right:
            raise IndexError(i)
        return self.letters[self.left + i]

    def segment(self, lo: int, hi: int) -> Word:
        """Letters at positions ``lo..hi`` inclusive."""
        return tuple(self.at(i) for i in range(lo, hi + 1))

    def __str__(self):
        return fmt_word(self.letters[: self.left]) + "." + fmt_word(self.letters[self.left:])


def shift(w: BiInfiniteWindow) -> BiInfiniteWindow:
    """``tau(a)(i) = a(i + 1)``, keeping positions ``-left .. right-1``."""
    if not w.letters:
        raise ValueError("window is empty")
    return BiInfiniteWindow(w.letters[1:], w.left)


def pimsner_pseudoperiodic_point_check(source: Source, w: BiInfiniteWindow, k: int) -> Verdict:
    """Is the point seen through ``w`` pseudoperiodic at ``eps = 2**-k``?

    With the metric ``2**-min{|i| : x_i != y_i}``, ``rho(tau(x_i), x_{i+1}) < eps``
    says that consecutive central ``(2k+1)``-blocks overlap along an allowed
    ``(2k+2)``-block. A chain back to ``x`` is a closed walk in
    ``overlap_graph(2k+2)`` through the block ``w[-k .. k+1]``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if w.left < k or w.right < k + 1:
        raise HypothesisError(f"window too narrow for eps=2^-{k}: need positions -{k}..{k + 1}")
    block = w.segment(-k, k + 1)
    lang = block_language(source)
    if not lang.accepts(block):
        raise HypothesisError(f"block {fmt_word(block)} of the window is not allowed")
    og = overlap_graph(source, 2 * k + 2)
    path = og.return_path(block)
    bound = {"eps": f"2^-{k}"}
    if path is None:
        return Verdict.fails(
            bound, block=fmt_word(block),
            reason="no return from the shifted central block to the starting one",
        )
    # path runs block[1:] -> ... -> block[:-1]; the chain revisits x at the end
    centers = [block[:-1]] + path[:-1] if len(path) > 1 else [block[:-1]]
    return Verdict.holds(bound, chain_length=len(centers), centers=[fmt_word(c) for c in centers])


# -- left-infinite words and recurring suffixes ---------------------------------


@dataclass(frozen=True)
class LeftInfiniteWord:
    """Eventually periodic left-infinite word ``... period period tail``."""

    period: Word
    tail: Word = ()

    def __post_init__(self):
        object.__setattr__(self, "period", as_word(self.period))
        object.__setattr__(self, "tail", as_word(self.tail))
        if not self.period:
            raise ValueError("period must be nonempty")

    def suffix(self, n: int) -> Word:
        """The last ``n`` letters."""
        reps = -(-max(0, n - len(self.tail)) // len(self.period)) + 1
        s = self.period * reps + self.tail
        return s[len(s) - n:] if n else ()

    def __str__(self):
        return "..." + fmt_word(self.period * 3) + fmt_word(self.tail)


def suffix_recurs(x: LeftInfiniteWord, m: int) -> int | None:
    """Least ``n >= 1`` with ``a_{n+m}..a_{n+1} == a_m..a_1``, or ``None``.

    Offsets past the tail are periodic in ``n``, so ``n <= |tail| + |period|``
    is exhaustive.
    """
    n_max = len(x.tail) + len(x.period)
    s = x.suffix(n_max + m)
    target = s[len(s) - m:]
    for n in range(1, n_max + 1):
        end = len(s) - n
        if s[end - m:end] == target:
            return n
    return None


def sample_limit_words(source: Source, length: int = 12, period_max: int = 2, tail_max: int = 3) -> list:
    """Eventually periodic left-infinite words whose ``length``-suffix parts are allowed.

    Ordered by period length, period, tail length, tail (alphabet order).
    """
    lang = block_language(source)
    out = []
    seen = set()
    for p in range(1, period_max + 1):
        for period in product(lang.alphabet, repeat=p):
            if any(period == period[:d] * (p // d) for d in range(1, p) if p % d == 0):
                continue
            for t in range(0, tail_max + 1):
                for tail in product(lang.alphabet, repeat=t):
                    x = LeftInfiniteWord(period, tail)
                    key = x.suffix(length + p + t)
                    if key in seen:
                        continue
                    if all(lang.accepts(x.suffix(n)) for n in range(1, length + p + t + 1)):
                        seen.add(key)
                        out.append(x)
    return out


def recurrence_hypothesis_check(source: Source, M: int = 12, period_max: int = 2, tail_max: int = 3) -> Verdict:
    """Sampled check that every allowed left-infinite word has recurring suffixes.

    Holds only means no counterexample among the samples.
    """
    bound = {"M": M, "period_max": period_max, "tail_max": tail_max}
    samples = sample_limit_words(source, M, period_max, tail_max)
    for x in samples:
        for m in range(1, M + 1):
            if suffix_recurs(x, m) is None:
                return Verdict.fails(bound, word=str(x), period=fmt_word(x.period),
                                     tail=fmt_word(x.tail), m=m, suffix=fmt_word(x.suffix(m)))
    return Verdict.holds(bound, samples=len(samples))
