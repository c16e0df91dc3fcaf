"""Finite trichotomous ordinals and a classifying set built by quotienting a coproduct.

Over a finite carrier ``A`` we enumerate every pair ``(L, <)`` with
``L ⊆ A`` and ``< ⊆ L × L``, keep those accepted by
:func:`check_trichotomous_ordinal`, group them by isomorphism, and build
for each group ``C`` a canonical representative: the disjoint union of
the members of ``C`` modulo identification along the (unique)
isomorphisms between them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Hashable, Iterable

from .caps import Caps, current_caps
from .errors import CarrierTooLarge, InvariantViolation
from .order import FinitePoset, canon_key
from .ordinals import SegmentRelation


@dataclass(frozen=True)
class FiniteStrictOrder:
    elements: frozenset
    lt: frozenset

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))
        object.__setattr__(self, "lt", frozenset(tuple(p) for p in self.lt))
        for a, b in self.lt:
            if a not in self.elements or b not in self.elements:
                raise ValueError(f"pair {(a, b)!r} mentions an element outside the order")

    @classmethod
    def linear(cls, ids: Iterable[Hashable]) -> "FiniteStrictOrder":
        ids = list(ids)
        return cls(frozenset(ids), frozenset((a, b) for i, a in enumerate(ids) for b in ids[i + 1:]))

    def __len__(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list:
        return sorted(self.elements, key=canon_key)


@dataclass(frozen=True)
class Accept:
    length: int
    order: tuple  # the elements in increasing order

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Reject:
    reason: str  # "transitivity", "trichotomy" or "inductivity"
    witness: tuple

    def __bool__(self) -> bool:
        return False


def check_trichotomous_ordinal(R: FiniteStrictOrder) -> Accept | Reject:
    """Accept a transitive, trichotomous, inductive relation and report its length.

    Inductivity is checked as well-foundedness, which for a finite
    relation means having no cycle.
    """
    lt = R.lt
    succ: dict = {}
    for a, b in lt:
        succ.setdefault(a, set()).add(b)
    for a, b in sorted(lt, key=canon_key):
        for c in sorted(succ.get(b, ()), key=canon_key):
            if (a, c) not in lt:
                return Reject("transitivity", (a, b, c))
    for x, y in itertools.combinations(R.sorted_elements(), 2):
        if (x, y) not in lt and (y, x) not in lt:
            return Reject("trichotomy", (x, y))
    # predecessors as dependencies: a static order lists smaller elements first
    graph = {x: {a for a, b in lt if b == x} for x in R.elements}
    try:
        order = tuple(TopologicalSorter(graph).static_order())
    except CycleError as exc:
        return Reject("inductivity", tuple(exc.args[1]))
    # consequences of inductivity
    for a, b in lt:
        if a == b or (b, a) in lt:
            raise InvariantViolation(f"inductive relation is not asymmetric at {(a, b)!r}")
    return Accept(len(R.elements), order)


def isomorphisms(R: FiniteStrictOrder, S: FiniteStrictOrder) -> list[dict]:
    """Every order isomorphism ``R -> S``, found by trying all bijections."""
    if len(R) != len(S):
        return []
    src = R.sorted_elements()
    out = []
    for image in itertools.permutations(S.sorted_elements()):
        m = dict(zip(src, image))
        if all(((m[a], m[b]) in S.lt) == ((a, b) in R.lt) for a in src for b in src):
            out.append(m)
    return out


def rigidity_check(R: FiniteStrictOrder) -> bool:
    """True iff the identity is the only automorphism of ``R``."""
    autos = isomorphisms(R, R)
    return len(autos) == 1 and all(k == v for k, v in autos[0].items())


def embeds_as_initial_segment(R: FiniteStrictOrder, S: FiniteStrictOrder) -> bool:
    """Whether ``R`` is isomorphic to a downward-closed part of ``S`` (both accepted)."""
    r, s = check_trichotomous_ordinal(R), check_trichotomous_ordinal(S)
    if not (r and s) or r.length > s.length:
        return False
    m = dict(zip(r.order, s.order))
    image = set(m.values())
    preserves = all(((m[a], m[b]) in S.lt) == ((a, b) in R.lt) for a in r.order for b in r.order)
    downward = all(a in image for a, b in S.lt if b in image)
    return preserves and downward


def segment_relation(R: FiniteStrictOrder, S: FiniteStrictOrder) -> SegmentRelation:
    forward, backward = embeds_as_initial_segment(R, S), embeds_as_initial_segment(S, R)
    if forward and backward:
        return SegmentRelation.EQUAL
    if forward:
        return SegmentRelation.A_INITIAL_IN_B
    if backward:
        return SegmentRelation.B_INITIAL_IN_A
    raise InvariantViolation("accepted orders must be comparable by initial segments")


def successor_order(R: FiniteStrictOrder, top: Hashable = ("top",)) -> FiniteStrictOrder:
    """``R + 1``: adjoin a new element above everything."""
    if top in R.elements:
        raise ValueError(f"{top!r} already occurs in the order")
    return FiniteStrictOrder(R.elements | {top}, R.lt | {(x, top) for x in R.elements})


@dataclass(frozen=True)
class OrdinalClassifier:
    carrier: tuple
    onwk: tuple  # accepted FiniteStrictOrder over subsets of the carrier
    classes: tuple  # tuples of indices into onwk, one per isomorphism class
    representatives: tuple  # one FiniteStrictOrder per class
    lengths: tuple  # order type of each class

    def representative_of(self, R: FiniteStrictOrder) -> int:
        hits = [k for k, rep in enumerate(self.representatives) if isomorphisms(R, rep)]
        if len(hits) != 1:
            raise InvariantViolation(f"order matches {len(hits)} representatives")
        return hits[0]

    def poset(self) -> FinitePoset:
        """Class indices ordered by the initial-segment relation between representatives."""
        ids = list(range(len(self.representatives)))
        pairs = [
            (i, j)
            for i in ids
            for j in ids
            if embeds_as_initial_segment(self.representatives[i], self.representatives[j])
        ]
        return FinitePoset(ids, pairs)


def _candidate_orders(carrier: tuple) -> Iterable[FiniteStrictOrder]:
    for r in range(len(carrier) + 1):
        for L in itertools.combinations(carrier, r):
            pairs = [(a, b) for a in L for b in L]
            for bits in range(1 << len(pairs)):
                rel = frozenset(pairs[k] for k in range(len(pairs)) if (bits >> k) & 1)
                yield FiniteStrictOrder(frozenset(L), rel)


def _quotient_representative(members: list[FiniteStrictOrder]) -> FiniteStrictOrder:
    """Coproduct of ``members`` modulo identification along their unique isomorphisms."""
    isos = {}
    for i, Li in enumerate(members):
        for j, Lj in enumerate(members):
            found = isomorphisms(Li, Lj)
            if len(found) != 1:
                raise InvariantViolation(f"expected a unique isomorphism, found {len(found)}")
            isos[i, j] = found[0]
    # the class of (i, x) is every (j, iso_ij(x)); transitivity of ~ follows from uniqueness
    points = {}
    for i, Li in enumerate(members):
        for x in Li.elements:
            cls = frozenset((j, isos[i, j][x]) for j in range(len(members)))
            points.setdefault(cls, cls)
    elements = frozenset(points)

    def component(cls, i):
        (x,) = [y for j, y in cls if j == i]
        return x

    lt = set()
    for u in elements:
        for v in elements:
            votes = {(component(u, i), component(v, i)) in L.lt for i, L in enumerate(members)}
            if len(votes) != 1:
                raise InvariantViolation("transferred order depends on the chosen bijection")
            if votes.pop():
                lt.add((u, v))
    rep = FiniteStrictOrder(elements, frozenset(lt))
    for i, L in enumerate(members):
        beta = {u: component(u, i) for u in elements}
        found = isomorphisms(rep, L)
        if found != [beta]:
            raise InvariantViolation("natural bijection is not the unique isomorphism")
    return rep


def build_classifier(carrier: Iterable[Hashable], caps: Caps | None = None) -> OrdinalClassifier:
    caps = caps or current_caps()
    carrier = tuple(sorted(set(carrier), key=canon_key))
    if len(carrier) > caps.classifier_carrier:
        raise CarrierTooLarge("classifier carrier", len(carrier), caps.classifier_carrier)
    onwk = []
    lengths = []
    for R in _candidate_orders(carrier):
        verdict = check_trichotomous_ordinal(R)
        if verdict:
            onwk.append(R)
            lengths.append(verdict.length)
    by_length: dict[int, list[int]] = {}
    for k, n in enumerate(lengths):
        by_length.setdefault(n, []).append(k)
    classes, reps, class_lengths = [], [], []
    for n in sorted(by_length):
        idx = by_length[n]
        classes.append(tuple(idx))
        reps.append(_quotient_representative([onwk[k] for k in idx]))
        class_lengths.append(n)
    for a, b in itertools.combinations(reps, 2):
        if isomorphisms(a, b):
            raise InvariantViolation("representatives are not pairwise non-isomorphic")
    return OrdinalClassifier(carrier, tuple(onwk), tuple(classes), tuple(reps), tuple(class_lengths))


@dataclass(frozen=True)
class SuccessorEntry:
    length: int
    target: int | None  # index of the representative isomorphic to the successor
    strictly_above: bool

    @property
    def escapes_carrier(self) -> bool:
        return self.target is None


def classifier_successor_scan(c: OrdinalClassifier) -> list[SuccessorEntry]:
    """Locate the successor of every representative among the representatives.

    The successor of the longest representative has no counterpart: it
    would need more points than the carrier holds.
    """
    out = []
    for k, rep in enumerate(c.representatives):
        succ = successor_order(rep)
        hits = [j for j, other in enumerate(c.representatives) if isomorphisms(succ, other)]
        if len(hits) > 1:
            raise InvariantViolation("successor matches several representatives")
        if not hits:
            out.append(SuccessorEntry(c.lengths[k], None, False))
            continue
        j = hits[0]
        above = segment_relation(rep, c.representatives[j]) is SegmentRelation.A_INITIAL_IN_B
        out.append(SuccessorEntry(c.lengths[k], j, above))
    return out
