"""Generalized vertices, the smallest accommodating set and its ultrafilters.

For a finite graph the smallest accommodating set is represented by its atoms:
the classes of the generalized-vertex partition once it has stopped
refining. Level-``l`` classes are the atoms of the Boolean algebra generated
by the ranges ``r(w)`` of words with ``1 <= |w| <= l``, which is exactly the
relation "same incoming label words of length at most ``l``".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BoundExceeded, HypothesisError
from .graph import LabeledGraph
from .verdict import Verdict


def canonical_partition(g: LabeledGraph, classes: Iterable[frozenset]) -> tuple:
    idx = g.index
    return tuple(sorted((frozenset(c) for c in classes), key=lambda c: min(idx[v] for v in c)))


def _refine(classes: list, splitter: frozenset) -> list:
    out = []
    for c in classes:
        inside = c & splitter
        if inside and inside != c:
            out.append(inside)
            out.append(c - inside)
        else:
            out.append(c)
    return out


@dataclass(frozen=True)
class GvPartitionTower:
    """Partitions ``P_1, ..., P_L`` of the vertex set into generalized vertices.

    ``saturated`` means no word of any length produces a new range, so the
    last partition is final; ``stabilization_level`` is then the first level
    whose partition equals it. Levels past ``L`` of a saturated tower
    return the final partition.
    """

    graph: LabeledGraph
    partitions: tuple
    saturated: bool
    stabilization_level: int | None

    @property
    def depth(self) -> int:
        return len(self.partitions)

    @property
    def final(self) -> tuple:
        if not self.saturated:
            raise BoundExceeded(
                f"generalized-vertex partition not stabilized within {self.depth} levels"
            )
        return self.partitions[-1]

    def partition(self, level: int) -> tuple:
        if level < 1:
            raise ValueError("levels start at 1")
        if level <= self.depth:
            return self.partitions[level - 1]
        return self.final

    def class_of(self, v: str, level: int) -> frozenset:
        for c in self.partition(level):
            if v in c:
                return c
        raise KeyError(v)

    def to_dict(self) -> dict:
        g = self.graph
        return {
            "levels": [[g.ordered(c) for c in p] for p in self.partitions],
            "stabilization_level": self.stabilization_level,
            "saturated": self.saturated,
        }


def compute_tower(g: LabeledGraph, L_max: int | None = None) -> GvPartitionTower:
    """Refine level by level until the set of word ranges saturates (or ``L_max``).

    New ranges at level ``l+1`` are one-letter relative ranges of the ranges
    first seen at level ``l``; once a level adds no new range none ever will.
    """
    frontier = {g.all_vertices}
    seen: set = set()
    classes = [g.all_vertices]
    partitions = []
    saturated = False
    level = 0
    while L_max is None or level < L_max:
        level += 1
        nxt = set()
        for R in frontier:
            for a in g.alphabet:
                S = g.step(R, a)
                if S:
                    nxt.add(S)
        new = nxt - seen
        seen |= new
        for R in new:
            classes = _refine(classes, R)
        partitions.append(canonical_partition(g, classes))
        frontier = new
        if not new:
            saturated = True
            break
    stab = None
    if saturated:
        last = partitions[-1]
        stab = next(i + 1 for i, p in enumerate(partitions) if p == last)
    return GvPartitionTower(g, tuple(partitions), saturated, stab)


@dataclass(frozen=True)
class AccommodatingAtoms:
    """Atoms of the smallest accommodating set: the stabilized classes."""

    graph: LabeledGraph
    atoms: tuple
    level: int

    def atom_of(self, v: str) -> frozenset:
        for c in self.atoms:
            if v in c:
                return c
        raise KeyError(v)

    def contains(self, vs: Iterable[str]) -> bool:
        """True if ``vs`` is a union of atoms, i.e. an element of the accommodating set."""
        vs = frozenset(vs)
        return all(c <= vs or not (c & vs) for c in self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)


def atoms(g_or_tower, L_max: int | None = None) -> AccommodatingAtoms:
    tower = g_or_tower if isinstance(g_or_tower, GvPartitionTower) else compute_tower(g_or_tower, L_max)
    if not tower.saturated:
        raise BoundExceeded(
            f"generalized-vertex partition not stabilized within L_max={tower.depth}"
        )
    return AccommodatingAtoms(tower.graph, tower.final, tower.stabilization_level)


@dataclass(frozen=True)
class NotUnique:
    """Result of :func:`unique_path_label` when the class is not the range of exactly one word.

    ``witnesses`` holds the (sorted) words every vertex of the class receives:
    two of them when there are several, the single received word when its
    range is larger than the class, and nothing when no word is received.
    """

    witnesses: tuple

    @property
    def no_witness(self) -> bool:
        return not self.witnesses


def words_with_range(g: LabeledGraph, vs: frozenset, level: int) -> list:
    return sorted(w for w, r in g.word_ranges(level).items() if r == vs)


def received_words(g: LabeledGraph, vs: frozenset, level: int) -> list:
    """Words of length ``level`` that every vertex of ``vs`` receives."""
    return sorted(w for w, r in g.word_ranges(level).items() if vs <= r)


def unique_path_label(g: LabeledGraph, cls: Iterable[str], level: int):
    """The only ``w`` in ``L(E^level)`` received by ``cls``, provided ``r(w) == cls``.

    A class receiving two words of the same length is :class:`NotUnique`
    even when one of them has the class as its exact range.
    """
    cls = frozenset(cls)
    found = received_words(g, cls, level)
    if len(found) == 1 and g.word_ranges(level)[found[0]] == cls:
        return found[0]
    return NotUnique(tuple(found[:2]))


@dataclass(frozen=True)
class UltrafilterChain:
    """Decreasing chain ``[xi]_1 >= [xi]_2 >= ...`` of generalized vertices.

    ``stable`` marks chains that reach the stabilized level, so that every
    deeper level repeats the last class.
    """

    classes: tuple
    stable: bool = True

    @property
    def depth(self) -> int:
        return len(self.classes)

    @property
    def atom(self) -> frozenset:
        return self.classes[-1]

    def level(self, l: int) -> frozenset:
        if l < 1:
            raise ValueError("levels start at 1")
        if l <= self.depth:
            return self.classes[l - 1]
        if self.stable:
            return self.classes[-1]
        raise IndexError(f"chain has depth {self.depth}")


def ultrafilter_from_atom(tower: GvPartitionTower, atom: Iterable[str], depth: int | None = None) -> UltrafilterChain:
    atom = frozenset(atom)
    if atom not in tower.final:
        raise HypothesisError("not an atom of the stabilized partition")
    depth = depth or tower.stabilization_level
    v = next(iter(atom))
    return UltrafilterChain(tuple(tower.class_of(v, l) for l in range(1, depth + 1)),
                            stable=depth >= tower.stabilization_level)


def _least(g: LabeledGraph, classes: Iterable[frozenset]) -> frozenset:
    idx = g.index
    return min(classes, key=lambda c: sorted(idx[v] for v in c))


def extend_chain(tower: GvPartitionTower, partial: Sequence[Iterable[str]], depth: int | None = None) -> UltrafilterChain:
    """Complete a partial chain, taking the lexicographically least refinement at each level."""
    partial = [frozenset(c) for c in partial]
    for l, c in enumerate(partial, start=1):
        if c not in tower.partition(l):
            raise HypothesisError(f"entry {l} of the chain is not a level-{l} generalized vertex")
        if l > 1 and not c <= partial[l - 2]:
            raise HypothesisError(f"chain is not decreasing at level {l}")
    depth = max(depth or tower.stabilization_level, len(partial))
    chain = list(partial)
    g = tower.graph
    while len(chain) < depth:
        l = len(chain) + 1
        options = [c for c in tower.partition(l) if not chain or c <= chain[-1]]
        chain.append(_least(g, options))
    return UltrafilterChain(tuple(chain), stable=depth >= tower.stabilization_level)


def weakly_left_resolving_check(g: LabeledGraph, atom_set: AccommodatingAtoms | None = None) -> Verdict:
    """Check ``r(A, a) & r(B, a) == r(A & B, a)`` over the accommodating set.

    Relative ranges preserve unions, so it is enough that distinct atoms have
    disjoint one-letter images.
    """
    atom_set = atom_set or atoms(g)
    for a in g.alphabet:
        owner: dict = {}
        for C in atom_set.atoms:
            for v in g.step(C, a):
                if v in owner:
                    D = owner[v]
                    meet = g.step(D, a) & g.step(C, a)
                    return Verdict.fails(
                        A=g.ordered(D), B=g.ordered(C), letter=a, intersection=g.ordered(meet),
                    )
                owner[v] = C
    return Verdict.holds(atoms=len(atom_set))
