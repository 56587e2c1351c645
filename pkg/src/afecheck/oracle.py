"""Brute-force reference implementations and the small-graph corpus.

Everything here works by explicit path or word enumeration and shares no
code with the fast paths beyond the data types. Test-only: the CLI never
imports this module.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import BoundExceeded
from .graph import LabeledGraph, LanguageSpec, Word, as_word
from .verdict import Verdict


@dataclass(frozen=True)
class OracleConfig:
    max_vertices: int = 8
    max_word_length: int = 5
    max_block_length: int = 6
    seed: int = 0
    exhaustive_vertices: int = 4
    exhaustive_edges: int = 6
    random_graphs: int = 500
    random_labelings: int = 2
    path_limit: int = 200_000

    def __post_init__(self):
        for name in ("max_vertices", "max_word_length", "max_block_length",
                     "exhaustive_vertices", "exhaustive_edges", "path_limit"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


# -- paths ---------------------------------------------------------------------


def _paths_from(g: LabeledGraph, starts, length: int, limit: int) -> list:
    """All edge sequences of the given length starting in ``starts``."""
    frontier = [(s, ()) for s in starts]
    for _ in range(length):
        nxt = []
        for v, p in frontier:
            for i, e in enumerate(g.edges):
                if e.source == v:
                    nxt.append((e.target, p + (i,)))
        if len(nxt) > limit:
            raise BoundExceeded(f"more than {limit} paths")
        frontier = nxt
    return [p for _, p in frontier]


def naive_relative_range(g: LabeledGraph, A, w, limit: int = 200_000) -> frozenset:
    """Ends of all paths from ``A`` whose label is ``w``, by enumeration."""
    w = as_word(w)
    A = frozenset(A)
    if not w:
        return A
    ends = set()
    for p in _paths_from(g, sorted(A), len(w), limit):
        if tuple(g.edges[i].label for i in p) == w:
            ends.add(g.edges[p[-1]].target)
    return frozenset(ends)


def naive_blocks(source, m: int, limit: int = 200_000) -> frozenset:
    """Allowed ``m``-words: labels of ``m``-paths, or words with no forbidden factor."""
    if isinstance(source, LanguageSpec) and source.is_graph_derived:
        source = source.graph
    if isinstance(source, LabeledGraph):
        paths = _paths_from(source, source.vertices, m, limit)
        return frozenset(tuple(source.edges[i].label for i in p) for p in paths)
    out = set()
    for w in itertools.product(source.alphabet, repeat=m):
        if not any(_has_factor(w, f) for f in source.forbidden):
            out.add(w)
    return frozenset(out)


def _has_factor(w: Word, f: Word) -> bool:
    n = len(f)
    return any(w[i:i + n] == f for i in range(len(w) - n + 1))


def incoming_words(g: LabeledGraph, v: str, l: int) -> frozenset:
    """Labels of all paths of length ``1..l`` ending at ``v``."""
    out = set()
    frontier = [(v, ())]
    for _ in range(l):
        nxt = []
        for u, word in frontier:
            for e in g.edges:
                if e.target == u:
                    nxt.append((e.source, (e.label,) + word))
        out.update(word for _, word in nxt)
        frontier = nxt
    return frozenset(out)


def naive_partition(g: LabeledGraph, l: int) -> list:
    """Classes of vertices with equal incoming word sets up to length ``l``, as sorted lists."""
    groups: dict = {}
    for v in g.vertices:
        groups.setdefault(incoming_words(g, v, l), []).append(v)
    return sorted(groups.values(), key=lambda c: g.vertices.index(c[0]))


# -- pseudo-periodicity ---------------------------------------------------------


def _recurs(alpha: Word, allowed: frozenset, alphabet, m: int, n_max: int) -> bool:
    """Is there a cyclic word of period ``n <= n_max`` with window ``alpha`` and every
    cyclic ``m``-window allowed?"""
    for n in range(1, min(m, n_max + 1)):
        if all(alpha[i] == alpha[i + n] for i in range(m - n)):
            u = alpha[:n]
            if all(tuple(u[(s + j) % n] for j in range(m)) in allowed for s in range(n)):
                return True
    # n >= m: the word is alpha + t; track the last m-1 letters while extending
    frontier = {alpha[1:]}
    for n in range(m, n_max + 1):
        for tail in frontier:
            closing = tail + alpha[: m - 1]
            if all(closing[i:i + m] in allowed for i in range(m - 1)):
                return True
        nxt = set()
        for tail in frontier:
            for a in alphabet:
                if tail + (a,) in allowed:
                    nxt.add(tail[1:] + (a,))
        frontier = nxt
        if not frontier:
            break
    return False


def naive_non_recurrent(source, m: int, n_max: int | None = None) -> frozenset:
    """Allowed ``m``-blocks lying on no cyclic word of period ``<= n_max``."""
    allowed = naive_blocks(source, m)
    alphabet = source.alphabet
    n_max = n_max if n_max is not None else max(len(allowed), m)
    return frozenset(a for a in allowed if not _recurs(a, allowed, alphabet, m, n_max))


def naive_pseudo_periodicity(source, m: int, n_max: int | None = None) -> Verdict:
    """Exhaustive cyclic-sequence search at block length ``m``."""
    bad = sorted(naive_non_recurrent(source, m, n_max))
    if bad:
        return Verdict.fails({"m": m}, block=bad[0])
    return Verdict.holds({"m": m})


# -- pseudoloops ---------------------------------------------------------------


def _naive_chains(T) -> list:
    """Per vertex, its generalized vertices recomputed from incoming word sets."""
    g = T.graph
    chains = []
    for v in T.vertices:
        rep = sorted(v.atom, key=g.vertices.index)[0]
        chains.append(tuple(frozenset(incoming_words(g, rep, l)) for l in range(1, T.depth + 1)))
    return chains


def _naive_rho(T, chains, i: int, j: int) -> Fraction:
    if T.mode == "B":
        x, y = T.vertices[i], T.vertices[j]
        for l in range(1, len(x) + 1):
            if x[-l] != y[-l]:
                return Fraction(1, 2 ** l)
        return Fraction(0)
    for l in range(T.depth):
        if chains[i][l] != chains[j][l]:
            return Fraction(1, 2 ** (l + 1))
    return Fraction(0)


def naive_pseudoloop(T, vertex: int, k: int, max_len: int = 12):
    """Shortest ``2**-k`` pseudoloop at ``vertex`` with at most ``max_len`` edges, by search.

    Returns the edge index tuple, or ``None``.
    """
    eps = Fraction(1, 2 ** k)
    chains = _naive_chains(T) if T.mode == "A" else None
    n = len(T.edges)

    def close(e, f):
        return _naive_rho(T, chains, T.r[e], T.d[f]) < eps

    for s in (e for e in range(n) if T.d[e] == vertex):
        if close(s, s):
            return (s,)
    best = None
    for s in (e for e in range(n) if T.d[e] == vertex):
        seen = {s}
        layer = [(s,)]
        for _ in range(max_len - 1):
            nxt = []
            for p in layer:
                for f in range(n):
                    if close(p[-1], f) and f not in seen:
                        seen.add(f)
                        q = p + (f,)
                        if close(f, s):
                            if best is None or len(q) < len(best):
                                best = q
                            break
                        nxt.append(q)
            layer = nxt
    return best


# -- corpus --------------------------------------------------------------------


def _canonical(n: int, edges) -> tuple:
    return min(tuple(sorted((p[s], p[t]) for s, t in edges))
               for p in itertools.permutations(range(n)))


def exhaustive_graphs(max_vertices: int = 4, max_edges: int = 6) -> list:
    """One representative per isomorphism class of multigraphs with no sinks or sources."""
    out = []
    for n in range(1, max_vertices + 1):
        pairs = [(s, t) for s in range(n) for t in range(n)]
        seen = set()
        for k in range(n, max_edges + 1):
            for ms in itertools.combinations_with_replacement(range(len(pairs)), k):
                es = [pairs[i] for i in ms]
                if len({s for s, _ in es}) < n or len({t for _, t in es}) < n:
                    continue
                can = _canonical(n, es)
                if can not in seen:
                    seen.add(can)
                    out.append((n, can))
    return out


def random_graphs(count: int = 500, max_vertices: int = 8, seed: int = 0) -> list:
    """Seeded random multigraphs with no sinks or sources, ``n`` to ``2n`` edges."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, max_vertices)
        k = rng.randint(n, 2 * n)
        es = tuple(sorted((rng.randrange(n), rng.randrange(n)) for _ in range(k)))
        if len({s for s, _ in es}) == n and len({t for _, t in es}) == n:
            out.append((n, es))
    return out


def identity_labeled(n: int, edges) -> LabeledGraph:
    vertices = [f"v{i}" for i in range(n)]
    return LabeledGraph(vertices, [(f"v{s}", f"v{t}", f"e{i}") for i, (s, t) in enumerate(edges)],
                        [f"e{i}" for i in range(len(edges))])


def randomly_labeled(n: int, edges, rng: random.Random) -> LabeledGraph:
    """Random onto labeling with 1 to 3 letters."""
    k = rng.randint(1, min(3, len(edges)))
    letters = "abc"[:k]
    labels = list(letters) + [rng.choice(letters) for _ in range(len(edges) - k)]
    rng.shuffle(labels)
    vertices = [f"v{i}" for i in range(n)]
    return LabeledGraph(vertices, [(f"v{s}", f"v{t}", a) for (s, t), a in zip(edges, labels)],
                        list(letters))


def corpus_generator(cfg: OracleConfig = OracleConfig()) -> Iterator[LabeledGraph]:
    """Identity and seeded random labelings of every small graph, then of random larger graphs."""
    rng = random.Random(cfg.seed)
    shapes = exhaustive_graphs(min(cfg.exhaustive_vertices, cfg.max_vertices), cfg.exhaustive_edges)
    shapes += random_graphs(cfg.random_graphs, cfg.max_vertices, cfg.seed)
    for n, edges in shapes:
        yield identity_labeled(n, edges)
        for _ in range(cfg.random_labelings):
            yield randomly_labeled(n, edges, rng)
