"""The dual topological graph of a labeled graph and its pseudoloops.

Mode A (finite labeled graphs): vertices are the atoms of the accommodating
set, each carried as its chain of generalized vertices. The edge ``e^a_P``
exists for every atom ``P`` inside ``r(a)``; ``d(e^a_P) = P`` and ``r(e^a_P)``
is the unique atom ``C`` with ``r(C, a) >= P``.

Mode B (forbidden-word languages): vertices are allowed ``L``-blocks, read as
suffixes ``a_L .. a_1`` of left-infinite words. The edge over ``w`` has
``d = w`` and ``r = x + w[:-1]``, one edge per admissible prolongation ``x``.

Distances are exact dyadic :class:`~fractions.Fraction` values.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Union

import networkx as nx

from .algebra import (
    GvPartitionTower, NotUnique, UltrafilterChain, atoms, compute_tower, extend_chain,
    ultrafilter_from_atom, unique_path_label, weakly_left_resolving_check,
)
from .errors import HypothesisError
from .graph import LabeledGraph, LanguageSpec, Word, as_word, fmt_word, range_of
from .subshift import BiInfiniteWindow, OverlapGraph, block_language, overlap_graph, shift
from .verdict import Status, Verdict

Vertex = Union[UltrafilterChain, tuple]


def dyadic(k: int) -> Fraction:
    return Fraction(1, 2 ** k)


@dataclass(frozen=True)
class TopEdge:
    """Edge ``e^letter_base``; ``ext`` is the prolongation letter of a Mode B edge."""

    letter: str
    base: int
    ext: str | None = None


@dataclass(frozen=True)
class TopGraph:
    mode: str
    depth: int
    vertices: tuple
    edges: tuple
    d: tuple
    r: tuple
    graph: LabeledGraph | None = None
    tower: GvPartitionTower | None = None
    language: LanguageSpec | None = None
    truncated: bool = False

    @cached_property
    def d_injective(self) -> bool:
        return len(set(self.d)) == len(self.d)

    def vertex_label(self, i: int) -> str:
        v = self.vertices[i]
        if self.mode == "A":
            return "{" + ",".join(self.graph.ordered(v.atom)) + "}"
        return fmt_word(v)

    def edge_label(self, j: int) -> str:
        e = self.edges[j]
        return f"({e.letter},{self.vertex_label(e.base)})"

    def rho(self, i: int, j: int) -> Fraction:
        return metric_rho(self.vertices[i], self.vertices[j])

    def vertex_index(self, key) -> int:
        """Mode A: an original vertex id (its atom); Mode B: an ``L``-block."""
        if self.mode == "A":
            for i, v in enumerate(self.vertices):
                if key in v.atom:
                    return i
            raise KeyError(f"no vertex {key!r}")
        word = as_word(key)
        try:
            return self.vertices.index(word)
        except ValueError:
            raise KeyError(f"{fmt_word(word)!r} is not an allowed block of length {self.depth}") from None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "depth": self.depth,
            "truncated": self.truncated,
            "d_injective": self.d_injective,
            "vertices": [self.vertex_label(i) for i in range(len(self.vertices))],
            "edges": [
                {"letter": e.letter, "base": self.vertex_label(e.base),
                 "d": self.vertex_label(self.d[j]), "r": self.vertex_label(self.r[j])}
                for j, e in enumerate(self.edges)
            ],
        }


def metric_rho(xi: Vertex, eta: Vertex) -> Fraction:
    """``2**-n`` for the first level ``n`` where the two vertices differ, else 0.

    Chains compare generalized vertices level by level; Mode B words compare
    suffixes of growing length.
    """
    if isinstance(xi, UltrafilterChain):
        if xi.depth != eta.depth:
            raise ValueError("chains must have equal depth")
        for l in range(1, xi.depth + 1):
            if xi.level(l) != eta.level(l):
                return dyadic(l)
        return Fraction(0)
    if len(xi) != len(eta):
        raise ValueError("words must have equal length")
    for l in range(1, len(xi) + 1):
        if xi[-l] != eta[-l]:
            return dyadic(l)
    return Fraction(0)


# -- construction --------------------------------------------------------------


def _mode_a(g: LabeledGraph, L: int | None) -> TopGraph:
    tower = compute_tower(g)
    atom_set = atoms(tower)
    wlr = weakly_left_resolving_check(g, atom_set)
    if wlr.status is not Status.HOLDS:
        c = wlr.certificate
        raise HypothesisError(
            f"labeled graph is not weakly left-resolving: atoms {c['A']} and {c['B']} "
            f"meet in {c['intersection']} under letter {c['letter']!r}"
        )
    depth = tower.stabilization_level if L is None else L
    if depth < tower.stabilization_level:
        raise HypothesisError(
            f"depth {depth} is below the stabilization level {tower.stabilization_level}"
        )
    vertices = tuple(ultrafilter_from_atom(tower, P, depth) for P in atom_set.atoms)
    index = {P: i for i, P in enumerate(atom_set.atoms)}
    edges, d, r = [], [], []
    for a in g.alphabet:
        ra = range_of(g, (a,))
        for P in atom_set.atoms:
            if not P <= ra:
                continue
            targets = [C for C in atom_set.atoms if P <= g.step(C, a)]
            assert len(targets) == 1, "weak left-resolving forces a unique range atom"
            edges.append(TopEdge(a, index[P]))
            d.append(index[P])
            r.append(index[targets[0]])
    return TopGraph("A", depth, vertices, tuple(edges), tuple(d), tuple(r), graph=g, tower=tower)


def _mode_b(spec: LanguageSpec, L: int | None) -> TopGraph:
    lang = block_language(spec)
    depth = L if L is not None else max(2, lang.memory + 1)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    words = tuple(sorted(lang.level(depth)))
    index = {w: i for i, w in enumerate(words)}
    edges, d, r = [], [], []
    for w in words:
        for x in lang.alphabet:
            v = (x,) + w[:-1]
            if v in index:
                edges.append(TopEdge(w[-1], index[w], x))
                d.append(index[w])
                r.append(index[v])
    return TopGraph("B", depth, words, tuple(edges), tuple(d), tuple(r),
                    language=spec, truncated=True)


def build_top_graph(source, L: int | None = None) -> TopGraph:
    """Mode A for labeled graphs (needs weak left-resolving), Mode B for forbidden words."""
    if isinstance(source, LanguageSpec):
        if source.is_graph_derived:
            return _mode_a(source.graph, L)
        return _mode_b(source, L)
    return _mode_a(source, L)


# -- distances between edges ---------------------------------------------------


@dataclass(frozen=True)
class DistanceComparison:
    """``direct`` is the distance test; ``criterion`` the range equalities level by
    level, ``containment`` the weaker ``r([xi]_l, b) >= [eta]_{l+1}``."""

    rho: Fraction
    direct: bool
    criterion: bool
    failing_level: int | None = None
    containment: bool = True


def distance_dr(T: TopGraph, e1: int, e2: int, m: int) -> DistanceComparison:
    """Compare ``rho(d(e1), r(e2)) <= 2**-(m+1)`` with the relative-range criterion.

    The criterion asks ``r([xi]_l, b) == [eta]_{l+1}`` for ``1 <= l <= m``, where
    ``e1 = e^a_xi`` and ``e2 = e^b_eta``. With ``d`` injective it matches the
    distance test; otherwise only the containment form does.
    """
    xi = T.vertices[T.d[e1]]
    eta = T.vertices[T.edges[e2].base]
    b = T.edges[e2].letter
    rho = T.rho(T.d[e1], T.r[e2])
    direct = rho <= dyadic(m + 1)
    failing = None
    contained = True
    for l in range(1, m + 1):
        if T.mode == "A":
            image, target = T.graph.step(xi.level(l), b), eta.level(l + 1)
            ok, inside = image == target, image >= target
        else:
            if l + 1 > T.depth:
                raise ValueError("criterion level exceeds the truncation depth")
            ok = inside = xi[len(xi) - l:] + (b,) == eta[len(eta) - l - 1:]
        if not ok and failing is None:
            failing = l
        contained = contained and inside
    return DistanceComparison(rho, direct, failing is None, failing, contained)


# -- pseudopaths ---------------------------------------------------------------


@dataclass(frozen=True)
class PseudoPath:
    """Edges ``e_1, ..., e_n`` (indices into ``T.edges``) and ``eps = 2**-k``."""

    edges: tuple
    k: int

    @property
    def eps(self) -> Fraction:
        return dyadic(self.k)

    def steps(self, T: TopGraph) -> list:
        """Distances ``rho(r(e_i), d(e_{i+1}))``, the last one wrapping around."""
        n = len(self.edges)
        return [T.rho(T.r[self.edges[i]], T.d[self.edges[(i + 1) % n]]) for i in range(n)]

    def to_dict(self, T: TopGraph) -> dict:
        return {
            "eps": f"2^-{self.k}",
            "base": T.vertex_label(T.d[self.edges[0]]),
            "edges": [T.edge_label(j) for j in self.edges],
            "letters": [T.edges[j].letter for j in self.edges],
            "distances": [str(x) for x in self.steps(T)],
        }


@dataclass(frozen=True)
class NotFound:
    """No pseudoloop; ``certificate`` names the obstruction."""

    reason: str
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"found": False, "reason": self.reason, "certificate": self.certificate}


def is_pseudopath(T: TopGraph, p: PseudoPath) -> bool:
    e = p.edges
    return bool(e) and all(T.rho(T.r[e[i]], T.d[e[i + 1]]) < p.eps for i in range(len(e) - 1))


def is_pseudoloop(T: TopGraph, p: PseudoPath) -> bool:
    """Definitional check, including the wrap-around step ``r(e_n)`` to ``d(e_1)``."""
    return is_pseudopath(T, p) and T.rho(T.r[p.edges[-1]], T.d[p.edges[0]]) < p.eps


def suffix_word(T: TopGraph, vertex: int, m: int) -> Word:
    """The unique length-``m`` word ``w`` with ``[xi]_m == r(w)`` (d injective)."""
    v = T.vertices[vertex]
    if T.mode == "B":
        if m > T.depth:
            raise HypothesisError(f"level {m} exceeds the truncation depth {T.depth}")
        return v[len(v) - m:]
    w = unique_path_label(T.graph, v.level(m), m)
    if isinstance(w, NotUnique):
        raise HypothesisError(f"generalized vertex at level {m} is not the range of a unique word")
    return w


def _eps_level(k: int) -> int:
    if k < 0:
        raise ValueError("eps must be 2^-k with k >= 0")
    return k + 1


def find_pseudoloop(T: TopGraph, vertex: int, k: int):
    """An ``eps = 2**-k`` pseudoloop based at ``vertex``, or :class:`NotFound`.

    Agreement of consecutive vertices below ``2**-k`` is agreement through level
    ``k``, so with ``d`` injective the letters of a pseudoloop are a cyclic word
    whose ``(k+1)``-windows are allowed and whose last window is the
    ``(k+1)``-suffix word of the base: a closed walk through that arc of
    ``overlap_graph(k+1)``. In Mode B only suffixes of blocks that prolong to
    the left count. Without injective ``d`` the edge-level search is run
    directly.
    """
    m = _eps_level(k)
    if not T.d_injective and T.mode == "A":
        return _direct_search(T, vertex, k)
    if T.mode == "B" and m > T.depth:
        raise HypothesisError(f"eps=2^-{k} needs depth at least {m}, have {T.depth}")
    alpha = suffix_word(T, vertex, m)
    if T.mode == "B" and vertex not in T.d:
        return NotFound("the base block has no left prolongation", {"block": fmt_word(T.vertices[vertex])})
    if m == 1:
        period = alpha
    else:
        og = overlap_graph(T.graph, m) if T.mode == "A" else _live_overlap_graph(T, m)
        walk = og.closed_walk(alpha)
        if walk is None:
            comp = og.component
            return NotFound(
                "the suffix block lies on no closed walk of the overlap graph",
                {"m": m, "block": fmt_word(alpha),
                 "prefix_component": comp[alpha[:-1]], "suffix_component": comp[alpha[1:]]},
            )
        n = len(walk)
        shift_by = m % n
        period = walk[shift_by:] + walk[:shift_by]
    n = len(period)
    # a_i is period[n - i]; the window of xi_i is a_{i+m-1} .. a_i
    def window(i: int) -> Word:
        return tuple(period[(n - i - j) % n] for j in range(m - 1, -1, -1))

    chosen = []
    for i in range(1, n + 1):
        target = vertex if i == 1 else _vertex_with_suffix(T, window(i))
        if target is None:
            return NotFound("no vertex carries a required window", {"window": fmt_word(window(i))})
        letter = window(i)[-1]
        cands = [j for j, e in enumerate(T.edges) if T.d[j] == target and e.letter == letter]
        if not cands:
            return NotFound("no edge with the required letter", {"window": fmt_word(window(i))})
        chosen.append(cands[0])
    # in Mode B any prolongation works: eps >= 2^-(depth-1) never sees the first letter
    p = PseudoPath(tuple(chosen), k)
    assert is_pseudoloop(T, p), "reconstructed chain must be a pseudoloop"
    return p


def _vertex_with_suffix(T: TopGraph, w: Word) -> int | None:
    m = len(w)
    if T.mode == "A":
        tower = T.tower
        partial = [range_of(T.graph, w[m - l:]) for l in range(1, min(m, T.depth) + 1)]
        chain = extend_chain(tower, partial, T.depth)
        for i, v in enumerate(T.vertices):
            if v.atom == chain.atom:
                return i
        return None
    for i, v in enumerate(T.vertices):
        if v[len(v) - m:] == w and i in T.d:
            return i
    return None


def _live_overlap_graph(T: TopGraph, m: int) -> OverlapGraph:
    """Overlap graph on the ``m``-suffixes of Mode B vertices that carry an edge.

    A forbidden-word block need not prolong to the left; such vertices carry no
    edge, so a pseudoloop can only pass through suffixes of the others.
    """
    arcs = sorted({T.vertices[i][len(T.vertices[i]) - m:] for i in set(T.d)})
    nodes = sorted({w[:-1] for w in arcs} | {w[1:] for w in arcs})
    return OverlapGraph(m, tuple(nodes), tuple(arcs))


def _direct_search(T: TopGraph, vertex: int, k: int):
    eps = dyadic(k)
    n = len(T.edges)
    succ = [[f for f in range(n) if T.rho(T.r[e], T.d[f]) < eps] for e in range(n)]
    starts = [e for e in range(n) if T.d[e] == vertex]
    best = None
    for s in starts:
        prev = {s: None}
        queue = deque([s])
        found = None
        while queue and found is None:
            e = queue.popleft()
            for f in succ[e]:
                if f == s:
                    found = e
                    break
                if f not in prev:
                    prev[f] = e
                    queue.append(f)
        if found is not None:
            path = [found]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            path.reverse()
            if best is None or len(path) < len(best):
                best = path
    if best is not None:
        p = PseudoPath(tuple(best), k)
        assert is_pseudoloop(T, p)
        return p
    G = nx.DiGraph()
    G.add_nodes_from(range(n))
    G.add_edges_from((e, f) for e in range(n) for f in succ[e])
    comp = {}
    for i, c in enumerate(sorted(sorted(c) for c in nx.strongly_connected_components(G))):
        for e in c:
            comp[e] = i
    return NotFound(
        "no edge based here lies on a cycle of the eps-adjacency digraph",
        {"eps": f"2^-{k}", "edges": [T.edge_label(e) for e in starts],
         "components": [comp[e] for e in starts],
         "reachable": sorted(T.edge_label(f) for f in nx.descendants(G, starts[0]))
         if starts else []},
    )


# -- words of vertices and the shift -------------------------------------------


def ultrafilter_word_correspondence(T: TopGraph, vertex: int) -> Word:
    """The depth-``L`` word whose suffixes have ranges ``[xi]_1, ..., [xi]_L``."""
    if not T.d_injective and T.mode == "A":
        raise HypothesisError("d is not injective: vertices carry no unique word")
    if T.mode == "B":
        return T.vertices[vertex]
    w = suffix_word(T, vertex, T.depth)
    chain = T.vertices[vertex]
    for l in range(1, T.depth + 1):
        if range_of(T.graph, w[T.depth - l:]) != chain.level(l):
            raise HypothesisError(f"suffix of length {l} does not match the chain")
    return w


def top_paths(T: TopGraph, n: int) -> list:
    """All paths ``(e_1, .., e_n)`` with ``d(e_i) == r(e_{i+1})``."""
    paths = [(e,) for e in range(len(T.edges))]
    by_r: dict = {}
    for f in range(len(T.edges)):
        by_r.setdefault(T.r[f], []).append(f)
    for _ in range(n - 1):
        paths = [p + (f,) for p in paths for f in by_r.get(T.d[p[-1]], ())]
    return paths


def path_window(T: TopGraph, words: dict, path: tuple) -> BiInfiniteWindow:
    """Window ``word(xi_1)[:-1] . a_1 a_2 .. a_n`` of the bi-infinite word of a path."""
    w1 = words[T.edges[path[0]].base]
    right = tuple(T.edges[e].letter for e in path)
    return BiInfiniteWindow(w1[:-1] + right, len(w1) - 1)


def shift_conjugacy_check(T: TopGraph, window: int = 4) -> Verdict:
    """Dropping the first edge of a path shifts its bi-infinite word by one.

    Enumerates every path of ``T`` of length ``2..window`` with ``T``'s own
    ``d`` and ``r`` and compares the truncated words.
    """
    bound = {"window": window}
    if not T.d_injective and T.mode == "A":
        return Verdict.unknown(bound, note="d is not injective")
    words = {i: ultrafilter_word_correspondence(T, i) for i in range(len(T.vertices))}
    for j, e in enumerate(T.edges):
        if words[e.base][-1] != e.letter:
            return Verdict.fails(bound, edge=T.edge_label(j), reason="word does not end in the letter")
    for n in range(2, window + 1):
        for path in top_paths(T, n):
            lhs = shift(path_window(T, words, path))
            rhs = path_window(T, words, path[1:])
            if lhs != rhs:
                return Verdict.fails(
                    bound, path=[T.edge_label(e) for e in path],
                    shifted=str(lhs), expected=str(rhs),
                )
    return Verdict.holds(bound)


# -- disjointness agreement -----------------------------------------------------


def letter_ranges_disjoint(g: LabeledGraph) -> bool:
    ranges = [range_of(g, (a,)) for a in g.alphabet]
    return all(not (ranges[i] & ranges[j]) for i in range(len(ranges)) for j in range(i))


def path_labels_total(g: LabeledGraph, tower: GvPartitionTower | None = None) -> bool:
    """Every generalized vertex at levels ``<= l*`` is the range of exactly one word."""
    tower = tower or compute_tower(g)
    for l in range(1, tower.stabilization_level + 1):
        for c in tower.partition(l):
            if isinstance(unique_path_label(g, c, l), NotUnique):
                return False
    return True


def edge_domains_injective(g: LabeledGraph, tower: GvPartitionTower | None = None) -> bool:
    """``d`` on edges ``e^a_P`` is injective; defined without weak left-resolving."""
    tower = tower or compute_tower(g)
    seen = set()
    for a in g.alphabet:
        ra = range_of(g, (a,))
        for P in tower.final:
            if P <= ra:
                if P in seen:
                    return False
                seen.add(P)
    return True
