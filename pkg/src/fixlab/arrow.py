"""A finite model checker for the arrow topos ``Set^{·→·}``.

Objects are maps ``X1 -> X0``; internal posets are monotone maps of
posets; internal ordinals are strictly monotone maps of finite ordinals.
This module computes chain objects and internal supremum maps, and runs
the stage-wise transfinite iteration of the blow-up map ``f_n`` on
``P_n = [chain(n+1) -> 1]`` along families of internal ordinals,
checking that no family with short stage-0 ordinals can reach its fixed
point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .caps import Caps, current_caps
from .classifier import FiniteStrictOrder, check_trichotomous_ordinal
from .errors import InvariantViolation, NotAPartialOrder, SizeLimit
from .forcing import App, Forall, Model, Sort, Var, chain_formula, forces, lub_formula
from .order import EndoMap, FinitePoset, canon_key, classify_map, enumerate_chains, is_chain, sup_chain

POINT = "*"


def _subsets(items) -> Iterable[frozenset]:
    items = list(items)
    for r in range(len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c)


def _sorted(xs) -> tuple:
    return tuple(sorted(xs, key=canon_key))


@dataclass(frozen=True)
class ArrowObject:
    x1: tuple
    x0: tuple
    restrict: Mapping

    def __post_init__(self):
        object.__setattr__(self, "x1", _sorted(set(self.x1)))
        object.__setattr__(self, "x0", _sorted(set(self.x0)))
        object.__setattr__(self, "restrict", dict(self.restrict))
        for x in self.x1:
            if x not in self.restrict:
                raise ValueError(f"restriction undefined at {x!r}")
            if self.restrict[x] not in self.x0:
                raise ValueError(f"restriction sends {x!r} outside stage 0")

    def __hash__(self) -> int:
        return hash((self.x1, self.x0, tuple(self.restrict[x] for x in self.x1)))


@dataclass(frozen=True, eq=False)
class ArrowPoset:
    """A monotone map ``p1 -> p0`` of finite posets."""

    p1: FinitePoset
    p0: FinitePoset
    restrict: Mapping

    def __post_init__(self):
        object.__setattr__(self, "restrict", dict(self.restrict))
        ArrowObject(self.p1.elements(), self.p0.elements(), self.restrict)
        for a, b in self.p1.covers():
            if not self.p0.leq(self.restrict[a], self.restrict[b]):
                raise NotAPartialOrder(f"restriction is not monotone at {a!r} <= {b!r}")

    @property
    def underlying(self) -> ArrowObject:
        return ArrowObject(self.p1.elements(), self.p0.elements(), self.restrict)

    def leq(self, stage: int, a, b) -> bool:
        return (self.p1 if stage == 1 else self.p0).leq(a, b)

    def sort(self, name: str = "P") -> Sort:
        return Sort(name, self.p1.elements(), self.p0.elements(), self.restrict.__getitem__)

    def _key(self):
        return (self.p1, self.p0, tuple(self.restrict[x] for x in self.p1.elements()))

    def __eq__(self, other) -> bool:
        return isinstance(other, ArrowPoset) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def describe(self) -> str:
        return f"[{self.p1.describe()} -> {self.p0.describe()}]"


@dataclass(frozen=True)
class ArrowEndoMap:
    domain: ArrowPoset
    f1: EndoMap
    f0: EndoMap

    def __post_init__(self):
        r = self.domain.restrict
        for x in self.domain.p1.elements():
            if r[self.f1(x)] != self.f0(r[x]):
                raise InvariantViolation(f"endomap does not commute with restriction at {x!r}")

    @property
    def progressive(self) -> bool:
        return self.f1.progressive and self.f0.progressive

    @property
    def monotone(self) -> bool:
        return self.f1.monotone and self.f0.monotone


def point_poset() -> FinitePoset:
    return FinitePoset.discrete([POINT])


def int_chain(k: int) -> FinitePoset:
    """The chain ``0 < 1 < ... < k-1`` on integers."""
    return FinitePoset(range(k), [(i, i + 1) for i in range(k - 1)], closure=True, name=f"chain({k})")


def direct_image(P: FinitePoset) -> ArrowPoset:
    """``[P -> 1]``: the direct image of a poset along the geometric morphism with inverse image ``ev1``."""
    return ArrowPoset(P, point_poset(), {x: POINT for x in P.elements()})


def inverse_image(P: ArrowPoset) -> FinitePoset:
    """``ev1``."""
    return P.p1


def ev0(P: ArrowPoset) -> FinitePoset:
    return P.p0


@dataclass(frozen=True)
class ArrowMorphism:
    source: ArrowObject
    target: ArrowObject
    m1: Mapping
    m0: Mapping

    def __post_init__(self):
        for x in self.source.x1:
            if self.target.restrict[self.m1[x]] != self.m0[self.source.restrict[x]]:
                raise InvariantViolation(f"morphism does not commute with restriction at {x!r}")


def unit(A: ArrowObject) -> ArrowMorphism:
    """``A -> [A1 -> 1]``: identity at stage 1, the unique map at stage 0."""
    target = ArrowObject(A.x1, (POINT,), {x: POINT for x in A.x1})
    return ArrowMorphism(A, target, {x: x for x in A.x1}, {x: POINT for x in A.x0})


def unit_naturality(g: ArrowMorphism) -> bool:
    """``[ev1 g -> 1] . unit(A) == unit(B) . g`` for ``g: A -> B``."""
    ua, ub = unit(g.source), unit(g.target)
    stage1 = all(g.m1[ua.m1[x]] == ub.m1[g.m1[x]] for x in g.source.x1)
    stage0 = all(ua.m0[x] == ub.m0[g.m0[x]] for x in g.source.x0)
    return stage1 and stage0


# -- internal ordinals -------------------------------------------------------


@dataclass(frozen=True)
class ArrowOrdinal:
    """``[l1 -> l0]`` with ``embed`` strictly increasing from ``range(l1)`` to ``range(l0)``."""

    l1: int
    l0: int
    embed: tuple

    def __post_init__(self):
        object.__setattr__(self, "embed", tuple(self.embed))
        if len(self.embed) != self.l1 or any(not 0 <= e < self.l0 for e in self.embed):
            raise ValueError("embedding must send each of range(l1) into range(l0)")
        if any(a >= b for a, b in zip(self.embed, self.embed[1:])):
            raise ValueError("embedding is not strictly monotone")

    @classmethod
    def all_embeddings(cls, l1: int, l0: int) -> list["ArrowOrdinal"]:
        return [cls(l1, l0, c) for c in itertools.combinations(range(l0), l1)]


def check_arrow_ordinal(R1: FiniteStrictOrder, R0: FiniteStrictOrder, restrict: Mapping) -> bool:
    """Whether ``[R1 -> R0]`` is an internal ordinal: both stages ordinals, restriction strictly monotone."""
    a1, a0 = check_trichotomous_ordinal(R1), check_trichotomous_ordinal(R0)
    if not (a1 and a0):
        return False
    if any(restrict.get(x) not in R0.elements for x in R1.elements):
        return False
    ok = all((restrict[a], restrict[b]) in R0.lt for a, b in R1.lt)
    if ok and a1.length > a0.length:
        raise InvariantViolation("strictly monotone map into a shorter ordinal")
    return ok


@dataclass(frozen=True)
class OrdinalFamily:
    """A family ``L -> B`` of internal ordinals.

    ``lengths0[b]`` is the stage-0 ordinal over ``b in B0``; ``fibres[b]``
    is the stage-1 ordinal over ``b in B1``, embedded into the stage-0
    ordinal over ``restrict[b]``.
    """

    b1: tuple
    b0: tuple
    restrict: Mapping
    lengths0: Mapping
    fibres: Mapping

    def __post_init__(self):
        ArrowObject(self.b1, self.b0, self.restrict)
        for b in self.b0:
            if self.lengths0.get(b, -1) < 0:
                raise ValueError(f"missing stage-0 length for {b!r}")
        for b in self.b1:
            L = self.fibres[b]
            if L.l0 != self.lengths0[self.restrict[b]]:
                raise ValueError(f"fibre over {b!r} does not embed into its stage-0 ordinal")

    @property
    def inhabited(self) -> bool:
        return bool(self.b1)

    @property
    def max_length0(self) -> int:
        return max((self.lengths0[b] for b in self.b0), default=0)


def enumerate_families(max_b0: int, max_length: int, max_b1: int = 2) -> Iterable[OrdinalFamily]:
    """Every inhabited family with ``|B0| <= max_b0``, ``|B1| <= max_b1`` and stage-0 lengths ``<= max_length``."""
    for k0 in range(1, max_b0 + 1):
        b0 = tuple(f"c{i}" for i in range(k0))
        for lens in itertools.product(range(max_length + 1), repeat=k0):
            lengths0 = dict(zip(b0, lens))
            for k1 in range(1, max_b1 + 1):
                b1 = tuple(f"b{i}" for i in range(k1))
                for targets in itertools.product(b0, repeat=k1):
                    restrict = dict(zip(b1, targets))
                    options = [
                        [L for l1 in range(lengths0[t] + 1) for L in ArrowOrdinal.all_embeddings(l1, lengths0[t])]
                        for t in targets
                    ]
                    for fibres in itertools.product(*options):
                        yield OrdinalFamily(b1, b0, restrict, lengths0, dict(zip(b1, fibres)))


# -- the blow-up poset ---------------------------------------------------------


def blowup_poset(n: int, caps: Caps | None = None) -> tuple[ArrowPoset, ArrowEndoMap]:
    """``P_n = [chain(n+1) -> 1]`` with successor (capped at ``n``) at stage 1 and identity at stage 0."""
    caps = caps or current_caps()
    if n < 0:
        raise ValueError("n must be a natural number")
    if n > caps.blowup_n:
        raise SizeLimit("blow-up index", n, caps.blowup_n)
    P = direct_image(int_chain(n + 1))
    f1 = classify_map(P.p1, {i: min(i + 1, n) for i in range(n + 1)}, name=f"successor_upto({n})")
    f0 = classify_map(P.p0, {POINT: POINT}, name="identity")
    f = ArrowEndoMap(P, f1, f0)
    if not f.progressive:
        raise InvariantViolation("blow-up map is not progressive")
    return P, f


def blowup_sup_maps(n: int) -> tuple[Callable, Callable]:
    """The explicit supremum maps of ``P_n``: largest element of ``S`` at stage 1, the point at stage 0."""
    return (lambda S, T: max(S, default=0)), (lambda T: POINT)


# -- power and chain objects ------------------------------------------------------


@dataclass(frozen=True)
class StagedSet:
    """The two stages of an object whose stage-1 elements are ``(S, T)`` restricting to ``T``."""

    stage1: frozenset
    stage0: frozenset

    def sort(self, name: str) -> Sort:
        return Sort(name, _sorted(self.stage1), _sorted(self.stage0), lambda st: st[1])


def _check_stage_size(P: ArrowObject, caps: Caps) -> None:
    for what, stage in (("stage-1 elements", P.x1), ("stage-0 elements", P.x0)):
        if len(stage) > caps.arrow_stage:
            raise SizeLimit(what, len(stage), caps.arrow_stage)


def power_object(X: ArrowObject, caps: Caps | None = None) -> StagedSet:
    """``Ω^X`` with stage ``s`` the subobjects of ``y(s) × X``.

    ``y(1) = [1 -> 1]`` gives pairs ``S ⊆ X1``, ``T ⊆ X0`` closed under
    restriction; ``y(0) = [∅ -> 1]`` leaves only ``T ⊆ X0``.
    """
    caps = caps or current_caps()
    _check_stage_size(X, caps)
    stage1 = frozenset(
        (S, T)
        for S in _subsets(X.x1)
        for T in _subsets(X.x0)
        if all(X.restrict[x] in T for x in S)
    )
    # y(0) is empty at stage 1, so a subobject is just a subset of X0
    stage0 = frozenset(_subsets(X.x0))
    return StagedSet(stage1, stage0)


@dataclass(frozen=True)
class ChainObjectOfP:
    poset: ArrowPoset
    stage1: frozenset  # (S, T) pairs
    stage0: frozenset

    def staged(self) -> StagedSet:
        return StagedSet(self.stage1, self.stage0)


def _membership(stage: int, a, A) -> bool:
    return a in (A[0] if stage == 1 else A)


def internal_chain_object(P: ArrowPoset, caps: Caps | None = None) -> ChainObjectOfP:
    """Subobjects of ``P`` satisfying the chain formula, decided by its stage-wise clauses.

    Stage 1: ``S`` is a chain of ``p1``, ``T`` a chain of ``p0``, and
    ``S`` restricts into ``T``.  Stage 0: ``T`` is a chain of ``p0``.
    """
    power = power_object(P.underlying, caps)
    stage1 = frozenset((S, T) for S, T in power.stage1 if is_chain(P.p1, S) and is_chain(P.p0, T))
    stage0 = frozenset(T for T in power.stage0 if is_chain(P.p0, T))
    return ChainObjectOfP(P, stage1, stage0)


def forced_chain_object(P: ArrowPoset, caps: Caps | None = None) -> ChainObjectOfP:
    """Oracle: evaluate the chain formula by generic forcing on every subobject."""
    power = power_object(P.underlying, caps)
    model = Model({"P": P.sort(), "A": power.sort("A")}, P.leq, _membership)
    phi = chain_formula("A", "P")
    keep = {
        s: frozenset(A for A in power.sort("A").at(s) if forces(model, s, phi, {"A": ("A", A)}))
        for s in (1, 0)
    }
    return ChainObjectOfP(P, keep[1], keep[0])


@dataclass(frozen=True)
class ArrowComplete:
    chain_object: ChainObjectOfP
    sup1: Mapping  # (S, T) -> element of p1
    sup0: Mapping  # T -> element of p0

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class ArrowFailing:
    stage: int
    chain: object
    candidates: tuple = field(default=())

    def __bool__(self) -> bool:
        return False


def _sup_model(P: ArrowPoset, ch: ChainObjectOfP, sup1=None, sup0=None) -> Model:
    fns = {"sup": (sup1, sup0)} if sup1 is not None else {}
    return Model({"P": P.sort(), "C": ch.staged().sort("C")}, P.leq, _membership, fns)


@lru_cache(maxsize=256)
def _internal_chain_complete(P: ArrowPoset, caps: Caps) -> ArrowComplete | ArrowFailing:
    ch = internal_chain_object(P, caps)
    model = _sup_model(P, ch)
    phi = lub_formula(Var("c"), Var("s"), "P")

    def lub_candidates(stage, c, pool):
        return [p for p in pool if forces(model, stage, phi, {"c": ("C", c), "s": ("P", p)})]

    sup0 = {}
    for T in _sorted(ch.stage0):
        found = lub_candidates(0, T, P.p0.elements())
        if len(found) != 1:
            return ArrowFailing(0, T, tuple(found))
        sup0[T] = found[0]
    sup1 = {}
    for S, T in _sorted(ch.stage1):
        pool = [p for p in P.p1.elements() if P.restrict[p] == sup0[T]]
        found = lub_candidates(1, (S, T), pool)
        if len(found) != 1:
            return ArrowFailing(1, (S, T), tuple(found))
        sup1[S, T] = found[0]
    # the assembled pair must be a morphism forcing the lub formula for every chain
    verify = _sup_model(P, ch, sup1, sup0)
    c = Var("c")
    if not forces(verify, 1, Forall("c", "C", lub_formula(c, App("sup", c), "P"))):
        raise InvariantViolation("assembled supremum maps fail the internal lub formula")
    return ArrowComplete(ch, sup1, sup0)


def internal_chain_complete(P: ArrowPoset, caps: Caps | None = None) -> ArrowComplete | ArrowFailing:
    """Search for the internal supremum map ``Ch(P) -> P``.

    Suprema are unique when they exist, so the search is per chain: at
    stage 0 among all points, at stage 1 among the points restricting to
    the stage-0 supremum.  A chain with no candidate is returned as the
    failing witness.
    """
    return _internal_chain_complete(P, caps or current_caps())


# -- rank and the blow-up bound ---------------------------------------------------


@dataclass(frozen=True)
class RankTable:
    """Truncated ranks with values in ``0..n``, where ``n`` plays the role of ⊤."""

    n: int
    stage0: Mapping  # (b0, i) -> rank
    stage1: Mapping  # (b1, j) -> rank

    @property
    def top(self) -> int:
        return self.n

    def symbol(self, v: int) -> str:
        return "⊤" if v == self.n else str(v)


def _truncate(i: int, n: int) -> int:
    return i if i < n else n


def rank_function(family: OrdinalFamily, n: int) -> RankTable:
    """Rank each stage-0 point by its position, truncated at ⊤; stage-1 points inherit it through restriction."""
    stage0 = {(b, i): _truncate(i, n) for b in family.b0 for i in range(family.lengths0[b])}
    stage1 = {
        (b, j): stage0[family.restrict[b], L.embed[j]]
        for b, L in sorted(family.fibres.items(), key=lambda kv: canon_key(kv[0]))
        for j in range(L.l1)
    }
    table = RankTable(n, stage0, stage1)
    for (b, i), r in stage0.items():
        if (b, i + 1) in stage0:
            nxt = stage0[b, i + 1]
            if not (r < nxt or r == nxt == n):
                raise InvariantViolation(f"rank is not nearly strictly monotone at {(b, i)!r}")
    for (b, j), r in stage1.items():
        if (b, j + 1) in stage1:
            nxt = stage1[b, j + 1]
            if not (r < nxt or r == nxt == n):
                raise InvariantViolation(f"rank is not nearly strictly monotone at {(b, j)!r}")
    return table


@dataclass(frozen=True)
class BlowupIteration:
    """Stage-wise values of the iteration of ``f_n`` along every fibre of a family."""

    stage0: Mapping  # (b0, i) -> point
    stage1: Mapping  # (b1, j) -> element of chain(n+1)
    sups0: Mapping  # b0 -> supremum of the fibre's iteration
    sups1: Mapping  # b1 -> same at stage 1


def _sup_maps(P: ArrowPoset, n: int, caps: Caps):
    if n + 1 <= caps.arrow_stage:
        found = internal_chain_complete(P, caps)
        if not found:
            raise InvariantViolation(f"P_{n} is not internally chain-complete")
        return (lambda S, T: found.sup1[S, T]), (lambda T: found.sup0[T])
    return blowup_sup_maps(n)


def iterate_blowup(family: OrdinalFamily, n: int, caps: Caps | None = None) -> BlowupIteration:
    """``f~(i) = sup{f(f~(j)) | j < i}`` computed stage by stage with the internal supremum map."""
    caps = caps or current_caps()
    P, f = blowup_poset(n, caps)
    sup1, sup0 = _sup_maps(P, n, caps)
    ch = None if n + 1 > caps.arrow_stage else internal_chain_complete(P, caps).chain_object

    def check(stage, element):
        if ch is not None and element not in (ch.stage1 if stage == 1 else ch.stage0):
            raise InvariantViolation(f"{element!r} is not a stage-{stage} chain")

    v0: dict = {}
    sups0 = {}
    for b in family.b0:
        for i in range(family.lengths0[b]):
            T = frozenset(f.f0(v0[b, z]) for z in range(i))
            check(0, T)
            v0[b, i] = sup0(T)
        T = frozenset(v0[b, i] for i in range(family.lengths0[b]))
        check(0, T)
        sups0[b] = sup0(T)
    v1: dict = {}
    sups1 = {}
    for b in family.b1:
        L, base = family.fibres[b], family.restrict[b]
        for j in range(L.l1):
            S = frozenset(f.f1(v1[b, y]) for y in range(j))
            T = frozenset(f.f0(v0[base, z]) for z in range(L.embed[j]))
            check(1, (S, T))
            v1[b, j] = sup1(S, T)
            if P.restrict[v1[b, j]] != v0[base, L.embed[j]]:
                raise InvariantViolation("iteration does not commute with restriction")
        S = frozenset(v1[b, j] for j in range(L.l1))
        T = frozenset(v0[base, i] for i in range(L.l0))
        check(1, (S, T))
        sups1[b] = sup1(S, T)
    return BlowupIteration(v0, v1, sups0, sups1)


@dataclass(frozen=True)
class BoundHolds:
    n: int
    max_length0: int
    computes_fixed_point: bool
    iteration: BlowupIteration = field(repr=False, compare=False)

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class FamilyTooShort:
    """Every stage-0 ordinal has length ``<= n``.

    ``computes_fixed_point`` can only be true for ``n = 0`` with every
    stage-0 ordinal empty: there the supremum of the empty iteration is
    the bottom of the one-point chain, which is already fixed.
    """

    n: int
    max_length0: int
    computes_fixed_point: bool
    iteration: BlowupIteration = field(repr=False, compare=False)

    def __bool__(self) -> bool:
        return False


def verify_blowup_bound(family: OrdinalFamily, n: int, caps: Caps | None = None) -> BoundHolds | FamilyTooShort:
    """Iterate ``f_n`` along ``family`` and compare with the length of its stage-0 ordinals.

    The stage-1 values are checked against the truncated rank pointwise.
    The family computes the fixed point when every fibre's supremum is
    fixed by ``f_n`` at its stage.
    """
    if not family.inhabited:
        raise ValueError("family must be inhabited at stage 1")
    caps = caps or current_caps()
    P, f = blowup_poset(n, caps)
    it = iterate_blowup(family, n, caps)
    rk = rank_function(family, n)
    for key, v in it.stage1.items():
        if not P.p1.leq(v, rk.stage1[key]):
            raise InvariantViolation(f"iteration value {v} exceeds rank {rk.symbol(rk.stage1[key])} at {key!r}")
    computes = all(f.f1(s) == s for s in it.sups1.values()) and all(f.f0(s) == s for s in it.sups0.values())
    longest = family.max_length0
    if longest <= n:
        if computes and not (n == 0 and longest == 0):
            raise InvariantViolation("a short family reached the fixed point")
        return FamilyTooShort(n, longest, computes, it)
    return BoundHolds(n, longest, computes, it)


# -- ev0 is logical ---------------------------------------------------------------


def default_instances() -> list[ArrowPoset]:
    out = [blowup_poset(n)[0] for n in range(3)]
    two = int_chain(2)
    out.append(ArrowPoset(two, two, {0: 0, 1: 1}))
    out.append(ArrowPoset(FinitePoset.discrete(["a", "b"]), point_poset(), {"a": POINT, "b": POINT}))
    vee = FinitePoset(["x", "y", "z"], [("x", "y"), ("x", "z")], closure=True)
    out.append(direct_image(vee))
    out.append(ArrowPoset(vee, two, {"x": 0, "y": 1, "z": 1}))
    return out


EV0_CONSTRUCTIONS = ("identity", "power", "chain_object", "sup_map")


def ev0_logical_check(construction: str, instances: Iterable[ArrowPoset] | None = None) -> bool:
    """Stage 0 of an internal construction equals the same construction on stage-0 data in sets."""
    if construction not in EV0_CONSTRUCTIONS:
        raise ValueError(f"unknown construction {construction!r}; choose from {', '.join(EV0_CONSTRUCTIONS)}")
    instances = list(default_instances() if instances is None else instances)
    for P in instances:
        P0 = P.p0
        if construction == "identity":
            ok = P.underlying.x0 == P0.elements()
        elif construction == "power":
            classical = {frozenset(c) for c in _subsets(P0.elements())}
            ok = set(power_object(P.underlying).stage0) == classical
        elif construction == "chain_object":
            ok = set(internal_chain_object(P).stage0) == set(enumerate_chains(P0))
        else:
            found = internal_chain_complete(P)
            if not found:
                if found.stage == 0:
                    return False
                continue
            ok = all(found.sup0[T] == sup_chain(P0, T) for T in found.sup0)
        if not ok:
            return False
    return True


__all__ = [
    "ArrowComplete", "ArrowEndoMap", "ArrowFailing", "ArrowMorphism", "ArrowObject", "ArrowOrdinal",
    "ArrowPoset", "BlowupIteration", "BoundHolds", "ChainObjectOfP", "EV0_CONSTRUCTIONS",
    "FamilyTooShort", "OrdinalFamily", "RankTable", "StagedSet", "blowup_poset", "blowup_sup_maps",
    "check_arrow_ordinal", "default_instances", "direct_image", "enumerate_families", "ev0",
    "ev0_logical_check", "forced_chain_object", "internal_chain_complete", "internal_chain_object",
    "int_chain", "inverse_image", "iterate_blowup", "point_poset", "power_object", "rank_function",
    "unit", "unit_naturality", "verify_blowup_bound",
]
