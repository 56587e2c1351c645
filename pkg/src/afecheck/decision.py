"""Certified verdicts on finiteness (AF-embeddability) and simplicity.

Every verdict is about a combinatorial condition: letter ranges pairwise
disjoint plus pseudo-periodicity for AF-embeddability, bounded minimality of
the two-sided shift for simplicity. The operator-algebraic reading is
attached as a note, never computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .algebra import atoms, compute_tower, weakly_left_resolving_check
from .errors import BoundExceeded, HypothesisError
from .graph import LabeledGraph, fmt_word, range_of
from .subshift import (
    Source, block_language, closure_infinite_check, minimality_check, pseudo_periodicity_check,
)
from .topgraph import (
    build_top_graph, edge_domains_injective, find_pseudoloop, letter_ranges_disjoint,
    path_labels_total,
)
from .verdict import Status, Verdict

AFE_NOTE = "the algebra is AF-embeddable, quasidiagonal, stably finite and finite"
AFE_FAIL_NOTE = "the algebra is not finite, so not stably finite, quasidiagonal or AF-embeddable"


def _as_graph(source: Source) -> LabeledGraph | None:
    if isinstance(source, LabeledGraph):
        return source
    return source.graph if source.is_graph_derived else None


def letter_disjointness_check(source: Source) -> Verdict:
    """``r(a) & r(b) == {}`` for distinct letters."""
    g = _as_graph(source)
    if g is None:
        return Verdict.holds(note="distinct last letters give disjoint cylinders of left-infinite words")
    ranges = {a: range_of(g, (a,)) for a in g.alphabet}
    for i, a in enumerate(g.alphabet):
        for b in g.alphabet[i + 1:]:
            meet = ranges[a] & ranges[b]
            if meet:
                return Verdict.fails(a=a, b=b, intersection=g.ordered(meet))
    return Verdict.holds()


def equal_length_disjointness_check(source: Source, M: int) -> Verdict:
    """Distinct words of equal length ``k <= M`` have disjoint ranges."""
    g = _as_graph(source)
    bound = {"M": M}
    if g is None:
        return Verdict.holds(bound, note="distinct words give disjoint cylinders")
    lang = block_language(g)
    for k in range(1, M + 1):
        try:
            words = lang.level(k)
        except BoundExceeded as exc:
            return Verdict.unknown(bound, note=str(exc), checked_through=k - 1)
        owner: dict = {}
        for w in sorted(words):
            for v in g.ordered(words[w]):
                if v in owner:
                    return Verdict.fails(bound, k=k, alpha=fmt_word(owner[v]), beta=fmt_word(w),
                                         vertex=v)
                owner[v] = w
    return Verdict.holds(bound)


def afe_verdict(source: Source, M: int = 12) -> Verdict:
    """Disjoint equal-length ranges and pseudo-periodicity through ``M``.

    Fails on the first broken condition with its certificate; Holds(M) only
    when both are verified through the bound. A finite graph that is not
    weakly left-resolving is outside the hypotheses and gets UnknownAtBound.
    """
    bound = {"M": M}
    letters = letter_disjointness_check(source)
    if letters.status is Status.FAILS:
        return Verdict.fails(bound, note=AFE_FAIL_NOTE, condition="letter ranges disjoint", **letters.certificate)
    lengths = equal_length_disjointness_check(source, M)
    if lengths.status is Status.FAILS:
        return Verdict.fails(bound, note=AFE_FAIL_NOTE, condition="equal-length ranges disjoint", **lengths.certificate)
    g = _as_graph(source)
    if g is not None:
        wlr = weakly_left_resolving_check(g)
        if wlr.status is not Status.HOLDS:
            return Verdict.unknown(bound, note="hypotheses not met: not weakly left-resolving",
                                   **wlr.certificate)
    pp = pseudo_periodicity_check(source, M)
    if pp.status is Status.FAILS:
        return Verdict.fails(bound, note=AFE_FAIL_NOTE, condition="pseudo-periodic", **pp.certificate)
    if pp.status is Status.UNKNOWN or lengths.status is Status.UNKNOWN:
        return Verdict.unknown(bound, note=pp.note or lengths.note)
    return Verdict.holds(bound, note=AFE_NOTE)


def no_loop_with_exit(g: LabeledGraph) -> bool:
    """True iff no loop has an exit: every vertex on a cycle has out-degree 1."""
    G = nx.MultiDiGraph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from((e.source, e.target) for e in g.edges)
    on_cycle = set()
    for comp in nx.strongly_connected_components(G):
        if len(comp) > 1:
            on_cycle |= comp
    on_cycle |= {v for v in g.vertices if G.has_edge(v, v)}
    return all(G.out_degree(v) == 1 for v in on_cycle)


def forced_word(g: LabeledGraph, A: frozenset, length: int) -> tuple:
    """Longest prefix (up to ``length``) of the only label word readable from ``A``."""
    word = []
    current = A
    while len(word) < length:
        letters = {a for v in current for a in g.out_letters[v]}
        if len(letters) != 1:
            break
        (a,) = letters
        word.append(a)
        current = g.step(current, a)
    return tuple(word)


def disagreeable_check(g: LabeledGraph, bound: int = 4) -> Verdict:
    """For each atom ``A`` and ``beta`` with ``|beta| <= bound`` seek ``n <= bound``
    with ``L(A E^{|beta| n}) != {beta^n}``.

    Only ``beta`` equal to a prefix of the forced word of ``A`` can fail, so
    the search is over those.
    """
    b = {"bound": bound}
    for A in atoms(g).atoms:
        f = forced_word(g, A, bound * bound)
        for k in range(1, bound + 1):
            beta = f[:k]
            if len(beta) < k:
                break
            if f[: k * bound] == beta * bound:
                return Verdict.fails(b, A=g.ordered(A), beta=fmt_word(beta))
    return Verdict.holds(b)


def simplicity_verdict(source: Source, k: int = 4, N: int = 24, M: int = 12) -> Verdict:
    """Bounded minimality of the shift, applied only under injective ``d`` and an infinite closure."""
    bound = {"k": k, "N": N}
    try:
        T = build_top_graph(source)
    except HypothesisError as exc:
        return Verdict.unknown(bound, note=f"inapplicable: {exc}", inapplicable=True)
    if not T.d_injective and T.mode == "A":
        return Verdict.unknown(bound, note="inapplicable: d is not injective", inapplicable=True)
    closure = closure_infinite_check(source, M)
    if closure.status is not Status.HOLDS:
        reason = "closure is finite" if closure.status is Status.FAILS else "closure finiteness undecided"
        return Verdict.unknown(bound, note=f"inapplicable: {reason}", inapplicable=True,
                               closure=closure.to_dict())
    mini = minimality_check(source, k, N)
    if mini.status is Status.FAILS:
        return Verdict.fails(bound, note="the shift is not minimal: the algebra is not simple",
                             **mini.certificate)
    return Verdict.holds(
        bound,
        note="minimal at the bound: simple, hence quasidiagonal; "
             "isomorphic to the crossed product of the closure by the shift",
    )


# -- reports -------------------------------------------------------------------


def cross_checks(source: Source, M: int, afe: Verdict) -> list:
    """Agreements between independent code paths that theorems force."""
    checks = []
    g = _as_graph(source)
    if g is None:
        return checks
    tower = compute_tower(g)
    a = letter_ranges_disjoint(g)
    b = edge_domains_injective(g, tower)
    c = path_labels_total(g, tower)
    wlr = weakly_left_resolving_check(g, atoms(tower)).status is Status.HOLDS
    checks.append({
        "name": "letter-disjointness / d-injective / unique path labels",
        "values": [a, b, c], "agree": a == b == c, "applicable": wlr,
    })
    if g.is_identity_labeled():
        nle = no_loop_with_exit(g)
        checks.append({
            "name": "identity labeling: finite iff no loop with an exit",
            "values": [afe.status.value, nle],
            "agree": (afe.status is Status.HOLDS) == nle, "applicable": afe.status is not Status.UNKNOWN,
        })
    if wlr and b and M >= 2:
        T = build_top_graph(g)
        found = all(not hasattr(find_pseudoloop(T, i, M - 1), "reason")
                    for i in range(len(T.vertices)))
        pp = pseudo_periodicity_check(g, M).status is Status.HOLDS
        checks.append({
            "name": f"pseudo-periodic through {M} implies pseudoloops at eps=2^-{M - 1}",
            "values": [pp, found], "agree": (not pp) or found, "applicable": True,
        })
    return checks


@dataclass(frozen=True)
class AnalysisReport:
    summary: dict
    letter_disjointness: Verdict
    weak_left_resolving: Verdict
    pseudo_periodicity: Verdict
    afe_verdict: Verdict
    simplicity: Verdict
    closure_infinite: Verdict
    disagreeable: Verdict
    cross_checks: list = field(default_factory=list)

    VERDICTS = ("letter_disjointness", "weak_left_resolving", "pseudo_periodicity", "afe_verdict",
                "closure_infinite", "simplicity", "disagreeable")

    def to_dict(self) -> dict:
        out = {"summary": self.summary, "cross_checks": self.cross_checks}
        for name in self.VERDICTS:
            out[name] = getattr(self, name).to_dict()
        return out


def summarize(source: Source) -> dict:
    g = _as_graph(source)
    if g is None:
        return {"mode": "B", "alphabet": list(source.alphabet),
                "forbidden": len(source.forbidden),
                "longest_forbidden": max(len(w) for w in source.forbidden)}
    out = {"mode": "A", "vertices": len(g.vertices), "edges": len(g.edges),
           "alphabet": list(g.alphabet)}
    tower = compute_tower(g)
    out["stabilization_level"] = tower.stabilization_level
    out["atoms"] = [g.ordered(c) for c in tower.final]
    return out


def analyze(source: Source, M: int = 12, k: int = 4, N: int = 24, bound: int = 4) -> AnalysisReport:
    g = _as_graph(source)
    afe = afe_verdict(source, M)
    inapplicable = Verdict.unknown(note="not applicable to forbidden-word languages")
    return AnalysisReport(
        summary=summarize(source),
        letter_disjointness=letter_disjointness_check(source),
        weak_left_resolving=weakly_left_resolving_check(g) if g is not None else inapplicable,
        pseudo_periodicity=pseudo_periodicity_check(source, M),
        afe_verdict=afe,
        simplicity=simplicity_verdict(source, k, N, M),
        closure_infinite=closure_infinite_check(source, M),
        disagreeable=disagreeable_check(g, bound) if g is not None else inapplicable,
        cross_checks=cross_checks(source, M, afe),
    )
