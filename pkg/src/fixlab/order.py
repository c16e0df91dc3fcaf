"""Posets, chains, directed sets, completeness checks and map classification.

Every poset is reached through the :class:`Poset` handle interface, which
answers order queries and resolves suprema of chains.  Finite posets come
in three flavours: :class:`FinitePoset` (explicit relation), and the lazy
:class:`ProductPoset` and :class:`PowersetLattice` whose order is computed
structurally.  The symbolic posets :class:`OmegaPlusOne` and
:class:`OrdinalSegment` supply limit stages; their chains may be given as
tagged cofinal descriptions (:class:`AllFinite`, :class:`AllBelow`,
:class:`Orbit`) instead of finite sets.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

from .caps import Caps, current_caps
from .errors import (
    InvariantViolation,
    NotAChain,
    NotAPartialOrder,
    PartialFunction,
    SizeLimit,
    SupUnresolvable,
    UnknownElement,
)
from .ordinals import OMEGA, ZERO, Ordinal

Element = Hashable


def canon_key(x: Any):
    """Total, hash-seed independent sort key for element ids."""
    if isinstance(x, str):
        return (0, x)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(canon_key(y) for y in x))
    if isinstance(x, (frozenset, set)):
        return (3, tuple(sorted(canon_key(y) for y in x)))
    sort_key = getattr(x, "sort_key", None)
    if sort_key is not None:
        return (4, sort_key())
    return (5, repr(x))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- symbolic elements and chain descriptions ---------------------------


@dataclass(frozen=True, order=True)
class Fin:
    n: int

    def __str__(self) -> str:
        return f"Fin({self.n})"

    def sort_key(self):
        return (0, self.n)


class _Inf:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Inf"

    def __reduce__(self):
        return (_Inf, ())

    def sort_key(self):
        return (1, 0)


INF = _Inf()


@dataclass(frozen=True)
class AllFinite:
    """The chain of all ``Fin(n)`` (all finite notations in an ordinal segment)."""


@dataclass(frozen=True)
class AllBelow:
    """The chain of all notations strictly below ``limit``."""

    limit: Ordinal


@dataclass(frozen=True)
class Orbit:
    """The chain ``start <= f(start) <= f(f(start)) <= ...`` of a map progressive on it."""

    map: Any
    start: Element


ChainDescription = (AllFinite, AllBelow, Orbit)


# -- handles ------------------------------------------------------------


class Poset(ABC):
    """Uniform interface over finite and symbolic posets."""

    is_finite = True

    @abstractmethod
    def leq(self, a, b) -> bool: ...

    @abstractmethod
    def __contains__(self, x) -> bool: ...

    def check(self, x) -> None:
        if x not in self:
            raise UnknownElement(x, self.describe())

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a, b) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def describe(self) -> str:
        return type(self).__name__

    # finite handles
    def elements(self) -> tuple:
        raise TypeError(f"{self.describe()} is not finite")

    def size(self) -> int:
        return len(self.elements())

    def covers(self) -> Iterator[tuple]:
        """Pairs ``a < b`` with nothing strictly between (generates the order)."""
        raise TypeError(f"{self.describe()} is not finite")

    def sup_finite(self, members) -> Element | None:
        members = list(members)
        uppers = [u for u in self.elements() if all(self.leq(m, u) for m in members)]
        for u in uppers:
            if all(self.leq(u, v) for v in uppers):
                return u
        return None

    def inf_finite(self, members) -> Element | None:
        members = list(members)
        lowers = [u for u in self.elements() if all(self.leq(u, m) for m in members)]
        for u in lowers:
            if all(self.leq(v, u) for v in lowers):
                return u
        return None

    def sup(self, chain) -> Element | None:
        """Supremum of a chain (finite collection or tagged description), ``None`` if absent."""
        if isinstance(chain, ChainDescription):
            return self._sup_described(chain)
        return self.sup_finite(chain)

    def _sup_described(self, chain) -> Element | None:
        if isinstance(chain, Orbit):
            return _resolve_orbit(self, chain)
        raise SupUnresolvable(f"{self.describe()} cannot resolve {chain!r}")

    def bottom(self) -> Element | None:
        return self.sup_finite(())

    # symbolic handles override
    certified_chain_complete = False

    def sample(self) -> tuple:
        return self.elements()


def _resolve_orbit(P: Poset, chain: Orbit, horizon: int | None = None) -> Element:
    f, y = chain.map, chain.start
    if horizon is None:
        horizon = P.size() + 1 if P.is_finite else current_caps().iteration_horizon
    bound = getattr(getattr(f, "rule", None), "fixed_free_from", None)
    for _ in range(horizon + 1):
        fy = f(y)
        if fy == y:
            return y
        if not P.leq(y, fy):
            raise NotAChain(f"orbit is not increasing at {y!r}")
        if isinstance(P, (OmegaPlusOne, UpSet)) and bound is not None and isinstance(y, Fin) and y.n >= bound:
            # strictly increasing through Fin with no fixed point left: unbounded
            return INF
        y = fy
    raise SupUnresolvable(f"orbit from {chain.start!r} did not resolve within {horizon} steps")


class FinitePoset(Poset):
    """An explicit finite poset; the relation is checked on construction."""

    def __init__(self, elements: Iterable, leq: Iterable[tuple], *, closure: bool = False, name: str = ""):
        elements = list(elements)
        if len(set(elements)) != len(elements):
            raise NotAPartialOrder("element ids are not unique")
        elems = tuple(sorted(elements, key=canon_key))
        index = {e: i for i, e in enumerate(elems)}
        up = [0] * len(elems)
        for pair in leq:
            a, b = pair
            for x in (a, b):
                if x not in index:
                    raise UnknownElement(x, "leq relation")
            up[index[a]] |= 1 << index[b]
        if closure:
            up = _reflexive_transitive_closure(up)
        self._init(elems, index, up, name)
        self._validate()

    @classmethod
    def _from_masks(cls, elems: tuple, up: list[int], name: str = "") -> "FinitePoset":
        obj = cls.__new__(cls)
        obj._init(elems, {e: i for i, e in enumerate(elems)}, up, name)
        return obj

    def _init(self, elems, index, up, name):
        self._elements = elems
        self._index = index
        self._up = tuple(up)
        down = [0] * len(elems)
        for i, m in enumerate(up):
            for j in _bits(m):
                down[j] |= 1 << i
        self._down = tuple(down)
        self.name = name

    def _validate(self):
        for i, m in enumerate(self._up):
            if not (m >> i) & 1:
                raise NotAPartialOrder(f"leq is not reflexive at {self._elements[i]!r}")
            for j in _bits(m):
                if self._up[j] & ~m:
                    k = next(_bits(self._up[j] & ~m))
                    raise NotAPartialOrder(
                        "leq is not transitive: "
                        f"{self._elements[i]!r} <= {self._elements[j]!r} <= {self._elements[k]!r}"
                    )
                if j != i and (self._up[j] >> i) & 1:
                    raise NotAPartialOrder(
                        f"leq is not antisymmetric: {self._elements[i]!r}, {self._elements[j]!r}"
                    )

    # construction helpers
    @classmethod
    def chain(cls, n: int, prefix: str = "") -> "FinitePoset":
        ids = [f"{prefix}{i}" for i in range(n)]
        return cls(ids, [(a, b) for i, a in enumerate(ids) for b in ids[i:]], name=f"chain({n})")

    @classmethod
    def discrete(cls, ids: Iterable) -> "FinitePoset":
        ids = list(ids)
        return cls(ids, [(a, a) for a in ids], name="discrete")

    # interface
    def elements(self) -> tuple:
        return self._elements

    def size(self) -> int:
        return len(self._elements)

    def index(self, x) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise UnknownElement(x, self.describe()) from None

    def __contains__(self, x) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def leq(self, a, b) -> bool:
        return bool((self._up[self.index(a)] >> self.index(b)) & 1)

    def mask(self, members: Iterable) -> int:
        m = 0
        for x in members:
            m |= 1 << self.index(x)
        return m

    def members(self, mask: int) -> frozenset:
        return frozenset(self._elements[i] for i in _bits(mask))

    def up_mask(self, x) -> int:
        return self._up[self.index(x)]

    def down_mask(self, x) -> int:
        return self._down[self.index(x)]

    def _least_in(self, mask: int) -> int | None:
        for i in _bits(mask):
            if mask & ~self._up[i] == 0:
                return i
        return None

    def _greatest_in(self, mask: int) -> int | None:
        for i in _bits(mask):
            if mask & ~self._down[i] == 0:
                return i
        return None

    def sup_mask(self, mask: int) -> int | None:
        ub = (1 << len(self._elements)) - 1
        for i in _bits(mask):
            ub &= self._up[i]
        return self._least_in(ub)

    def sup_finite(self, members) -> Element | None:
        i = self.sup_mask(self.mask(members))
        return None if i is None else self._elements[i]

    def inf_finite(self, members) -> Element | None:
        lb = (1 << len(self._elements)) - 1
        for x in members:
            lb &= self._down[self.index(x)]
        i = self._greatest_in(lb)
        return None if i is None else self._elements[i]

    def covers(self) -> Iterator[tuple]:
        n = len(self._elements)
        for i in range(n):
            above = self._up[i] & ~(1 << i)
            for j in _bits(above):
                between = above & self._down[j] & ~(1 << j)
                if not between:
                    yield self._elements[i], self._elements[j]

    def restrict(self, members: Iterable) -> "FinitePoset":
        keep = sorted({self.index(x) for x in members})
        remap = {old: new for new, old in enumerate(keep)}
        up = []
        for old in keep:
            m = 0
            for j in _bits(self._up[old]):
                if j in remap:
                    m |= 1 << remap[j]
            up.append(m)
        return FinitePoset._from_masks(tuple(self._elements[i] for i in keep), up)

    def relation(self) -> list[tuple]:
        """The order as sorted ``(a, b)`` pairs, reflexive pairs included."""
        return [(a, self._elements[j]) for i, a in enumerate(self._elements) for j in _bits(self._up[i])]

    def describe(self) -> str:
        return self.name or f"FinitePoset({len(self._elements)})"

    def __repr__(self) -> str:
        return f"FinitePoset({list(self._elements)!r}, {self.relation()!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinitePoset)
            and self._elements == other._elements
            and self._up == other._up
        )

    def __hash__(self) -> int:
        return hash((self._elements, self._up))

    def __reduce__(self):
        return (FinitePoset._from_masks, (self._elements, list(self._up), self.name))


def _reflexive_transitive_closure(up: list[int]) -> list[int]:
    n = len(up)
    up = [m | (1 << i) for i, m in enumerate(up)]
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if up[i] & bit:
                up[i] |= up[k]
    return up


def as_finite_poset(P: Poset) -> FinitePoset:
    """Materialise a lazy finite handle as an explicit :class:`FinitePoset`."""
    if isinstance(P, FinitePoset):
        return P
    elems = tuple(sorted(P.elements(), key=canon_key))
    up = [0] * len(elems)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            if P.leq(a, b):
                up[i] |= 1 << j
    return FinitePoset._from_masks(elems, up, name=P.describe())


class ProductPoset(Poset):
    """Cartesian product of finite posets under the pointwise order."""

    def __init__(self, factors: Iterable[Poset], name: str = ""):
        self.factors = tuple(factors)
        self.name = name

    @cached_property
    def _elements(self) -> tuple:
        return tuple(itertools.product(*(f.elements() for f in self.factors)))

    def elements(self) -> tuple:
        return self._elements

    def size(self) -> int:
        n = 1
        for f in self.factors:
            n *= f.size()
        return n

    def __contains__(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(c in f for c, f in zip(x, self.factors))
        )

    def leq(self, a, b) -> bool:
        self.check(a)
        self.check(b)
        return all(f.leq(x, y) for f, x, y in zip(self.factors, a, b))

    def sup_finite(self, members) -> Element | None:
        members = list(members)
        for m in members:
            self.check(m)
        out = []
        for k, f in enumerate(self.factors):
            s = f.sup_finite([m[k] for m in members])
            if s is None:
                return None
            out.append(s)
        return tuple(out)

    def inf_finite(self, members) -> Element | None:
        members = list(members)
        out = []
        for k, f in enumerate(self.factors):
            s = f.inf_finite([m[k] for m in members])
            if s is None:
                return None
            out.append(s)
        return tuple(out)

    def covers(self) -> Iterator[tuple]:
        factor_covers = [list(f.covers()) for f in self.factors]
        for x in self._elements:
            for k, cov in enumerate(factor_covers):
                for a, b in cov:
                    if x[k] == a:
                        yield x, x[:k] + (b,) + x[k + 1:]

    def describe(self) -> str:
        return self.name or f"Product({', '.join(f.describe() for f in self.factors)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductPoset) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(("product", self.factors))


class PowersetLattice(Poset):
    """All subsets of a finite universe under inclusion, built lazily."""

    def __init__(self, universe: Iterable, name: str = ""):
        self.universe = tuple(sorted(set(universe), key=canon_key))
        self._universe_set = frozenset(self.universe)
        self.name = name

    @cached_property
    def _elements(self) -> tuple:
        u = self.universe
        return tuple(
            frozenset(u[i] for i in _bits(m)) for m in range(1 << len(u))
        )

    def elements(self) -> tuple:
        return self._elements

    def size(self) -> int:
        return 1 << len(self.universe)

    def __contains__(self, x) -> bool:
        return isinstance(x, frozenset) and x <= self._universe_set

    def leq(self, a, b) -> bool:
        self.check(a)
        self.check(b)
        return a <= b

    def sup_finite(self, members) -> frozenset:
        out = frozenset()
        for m in members:
            self.check(m)
            out |= m
        return out

    def inf_finite(self, members) -> frozenset:
        out = self._universe_set
        for m in members:
            self.check(m)
            out &= m
        return out

    def covers(self) -> Iterator[tuple]:
        for x in self._elements:
            for u in self.universe:
                if u not in x:
                    yield x, x | {u}

    def describe(self) -> str:
        return self.name or f"Powerset({len(self.universe)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PowersetLattice) and self.universe == other.universe

    def __hash__(self) -> int:
        return hash(("powerset", self.universe))


class OmegaPlusOne(Poset):
    """The chain ``Fin(0) < Fin(1) < ... < Inf``."""

    is_finite = False
    certified_chain_complete = True

    def __contains__(self, x) -> bool:
        return x is INF or (isinstance(x, Fin) and isinstance(x.n, int) and x.n >= 0)

    def leq(self, a, b) -> bool:
        self.check(a)
        self.check(b)
        if b is INF:
            return True
        if a is INF:
            return False
        return a.n <= b.n

    def sup_finite(self, members) -> Element:
        members = list(members)
        for m in members:
            self.check(m)
        if INF in members:
            return INF
        return Fin(max((m.n for m in members), default=0))

    def _sup_described(self, chain) -> Element:
        if isinstance(chain, AllFinite):
            return INF
        if isinstance(chain, AllBelow):
            if chain.limit.is_finite:
                return Fin(max(chain.limit.as_int() - 1, 0))
            if chain.limit == OMEGA:
                return INF
            raise NotAChain(f"{chain.limit} exceeds omega+1")
        return super()._sup_described(chain)

    def sample(self) -> tuple:
        return tuple(Fin(n) for n in range(17)) + (INF,)

    def describe(self) -> str:
        return "omega+1"

    def __eq__(self, other) -> bool:
        return isinstance(other, OmegaPlusOne)

    def __hash__(self) -> int:
        return hash("omega+1")


class OrdinalSegment(Poset):
    """All notations ``<= beta``, i.e. the ordinal ``beta + 1``."""

    is_finite = False
    certified_chain_complete = True

    def __init__(self, beta: Ordinal):
        self.beta = beta

    def __contains__(self, x) -> bool:
        return isinstance(x, Ordinal) and x <= self.beta

    def leq(self, a, b) -> bool:
        self.check(a)
        self.check(b)
        return a <= b

    def sup_finite(self, members) -> Ordinal:
        members = list(members)
        for m in members:
            self.check(m)
        return max(members, default=ZERO)

    def _sup_described(self, chain) -> Ordinal:
        if isinstance(chain, AllFinite):
            chain = AllBelow(OMEGA)
        if isinstance(chain, AllBelow):
            if chain.limit > self.beta:
                raise NotAChain(f"{chain.limit} exceeds segment bound {self.beta}")
            if chain.limit.is_zero:
                return ZERO
            if chain.limit.is_successor:
                return chain.limit.predecessor()
            return chain.limit
        return super()._sup_described(chain)

    def sample(self) -> tuple:
        from .ordinals import successor

        out, x = [], ZERO
        for _ in range(8):
            if x > self.beta:
                break
            out.append(x)
            x = successor(x)
        if self.beta not in out:
            out.append(self.beta)
        return tuple(out)

    def describe(self) -> str:
        return f"segment({self.beta})"

    def __eq__(self, other) -> bool:
        return isinstance(other, OrdinalSegment) and self.beta == other.beta

    def __hash__(self) -> int:
        return hash(("segment", self.beta))


class UpSet(Poset):
    """``{y | base <= y}`` inside a symbolic parent; suprema as in the parent, empty sup is ``base``."""

    def __init__(self, parent: Poset, base):
        parent.check(base)
        self.parent = parent
        self.base = base
        self.is_finite = parent.is_finite
        self.certified_chain_complete = parent.certified_chain_complete

    def __contains__(self, x) -> bool:
        return x in self.parent and self.parent.leq(self.base, x)

    def leq(self, a, b) -> bool:
        self.check(a)
        self.check(b)
        return self.parent.leq(a, b)

    def sup_finite(self, members) -> Element | None:
        members = list(members)
        for m in members:
            self.check(m)
        return self.parent.sup_finite(members or [self.base])

    def _sup_described(self, chain) -> Element | None:
        if isinstance(chain, Orbit):
            return _resolve_orbit(self, chain)
        return self.parent.sup(chain)

    def sample(self) -> tuple:
        return tuple(x for x in self.parent.sample() if x in self)

    def describe(self) -> str:
        return f"up({self.parent.describe()}, {self.base})"

    def __eq__(self, other) -> bool:
        return isinstance(other, UpSet) and (self.parent, self.base) == (other.parent, other.base)

    def __hash__(self) -> int:
        return hash(("up", self.parent, self.base))


# -- subsets ------------------------------------------------------------


@dataclass(frozen=True)
class SubsetWitness:
    parent: Poset
    members: frozenset
    classification: str  # "chain", "directed" or "neither"


def _check_members(P: Poset, S) -> list:
    S = list(S)
    for x in S:
        P.check(x)
    return S


def is_chain(P: Poset, S: Iterable) -> bool:
    S = _check_members(P, S)
    return all(P.comparable(a, b) for a, b in itertools.combinations(S, 2))


def is_directed(P: Poset, S: Iterable) -> bool:
    S = _check_members(P, S)
    if not S:
        return False
    return all(
        any(P.leq(a, u) and P.leq(b, u) for u in S)
        for a, b in itertools.combinations(S, 2)
    )


def classify_subset(P: Poset, S: Iterable) -> SubsetWitness:
    S = frozenset(_check_members(P, S))
    if is_chain(P, S):
        kind = "chain"
    elif is_directed(P, S):
        kind = "directed"
    else:
        kind = "neither"
    return SubsetWitness(P, S, kind)


def sup_chain(P: Poset, C) -> Element | None:
    """Least upper bound of a chain in ``P``; ``None`` when it does not exist."""
    if not isinstance(C, ChainDescription):
        C = list(C)
        if not is_chain(P, C):
            raise NotAChain(f"{sorted(C, key=canon_key)!r} is not a chain in {P.describe()}")
    return P.sup(C)


def enumerate_chains(P: Poset, caps: Caps | None = None) -> tuple[frozenset, ...]:
    """All chains of a finite poset, the empty chain first."""
    caps = caps or current_caps()
    if not P.is_finite:
        raise TypeError("chain enumeration needs a finite poset")
    if P.size() > caps.chains:
        raise SizeLimit("chain enumeration", P.size(), caps.chains)
    F = as_finite_poset(P)
    return tuple(F.members(m) for m in _chain_masks(F))


def _chain_masks(F: FinitePoset) -> list[int]:
    out = [0]
    strict_up = [m & ~(1 << i) for i, m in enumerate(F._up)]

    def extend(mask: int, last: int):
        out.append(mask)
        for j in _bits(strict_up[last]):
            extend(mask | (1 << j), j)

    for i in range(F.size()):
        extend(1 << i, i)
    return out


# -- completeness ---------------------------------------------------------


@dataclass(frozen=True)
class Complete:
    method: str

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class FailingChain:
    chain: frozenset

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class FailingDirected:
    subset: frozenset

    def __bool__(self) -> bool:
        return False


def check_chain_complete(P: Poset, caps: Caps | None = None) -> Complete | FailingChain:
    """Decide chain-completeness.

    Finite posets within the chain cap are decided by computing the
    supremum of every chain.  Larger finite posets use the fact that a
    non-empty finite chain contains its own maximum, so only the empty
    chain can fail.  Symbolic posets carry a certificate.
    """
    caps = caps or current_caps()
    if not P.is_finite:
        if P.certified_chain_complete:
            return Complete("certified")
        raise SupUnresolvable(f"{P.describe()} has no certified sup resolver")
    if P.size() <= caps.chains:
        F = as_finite_poset(P)
        for m in _chain_masks(F):
            if F.sup_mask(m) is None:
                return FailingChain(F.members(m))
        return Complete("enumeration")
    if P.bottom() is None:
        return FailingChain(frozenset())
    return Complete("least-element")


def _directed_masks(F: FinitePoset) -> Iterator[int]:
    # a finite directed set contains an upper bound of itself, i.e. a maximum
    for i in range(F.size()):
        below = F._down[i] & ~(1 << i)
        idx = list(_bits(below))
        for r in range(len(idx) + 1):
            for combo in itertools.combinations(idx, r):
                m = 1 << i
                for j in combo:
                    m |= 1 << j
                yield m


def check_directed_complete(
    P: Poset, caps: Caps | None = None, *, cross_check: bool = True
) -> Complete | FailingDirected:
    """Decide directed-completeness.

    With ``cross_check`` a complete result on a poset with a least
    element is confirmed to be chain-complete as well.
    """
    caps = caps or current_caps()
    if not P.is_finite:
        if P.certified_chain_complete:
            return Complete("certified")
        raise SupUnresolvable(f"{P.describe()} has no certified sup resolver")
    if P.size() <= caps.chains:
        F = as_finite_poset(P)
        for m in _directed_masks(F):
            if F.sup_mask(m) is None:
                return FailingDirected(F.members(m))
        result = Complete("enumeration")
    else:
        result = Complete("finite-directed-has-maximum")
    if cross_check and P.bottom() is not None and not check_chain_complete(P, caps):
        raise InvariantViolation("directed-complete with bottom but not chain-complete")
    return result


def check_complete_lattice(P: Poset) -> bool:
    """A finite poset is a complete lattice iff it has a least element and binary joins."""
    if isinstance(P, PowersetLattice):
        return True
    if isinstance(P, ProductPoset):
        return all(check_complete_lattice(f) for f in P.factors)
    if not P.is_finite or P.size() == 0:
        return False
    F = as_finite_poset(P)
    if F.sup_mask(0) is None:
        return False
    n = F.size()
    return all(
        F.sup_mask((1 << i) | (1 << j)) is not None for i in range(n) for j in range(i + 1, n)
    )


# -- maps -----------------------------------------------------------------


class SymbolicRule:
    """An endomap of a symbolic poset with certified properties.

    ``fixed_free_from`` (``OmegaPlusOne`` only) certifies that no
    ``Fin(n)`` with ``n >= fixed_free_from`` is a fixed point.
    """

    name = "rule"
    progressive = False
    monotone = False
    fixed_free_from: int | None = None

    def __call__(self, x):
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and vars(self) == vars(other)

    def __hash__(self) -> int:
        return hash((type(self).__name__, tuple(sorted(vars(self).items(), key=repr))))


class SuccessorRule(SymbolicRule):
    """``Fin(n) -> Fin(n+1)``, ``Inf -> Inf``."""

    name = "successor"
    progressive = True
    monotone = True
    fixed_free_from = 0

    def __call__(self, x):
        return INF if x is INF else Fin(x.n + 1)


class CappedSuccessorRule(SymbolicRule):
    """Successor below ``cap``, identity from ``Fin(cap)`` on."""

    progressive = True
    monotone = True

    def __init__(self, cap: int):
        self.cap = cap
        self.name = f"capped_successor({cap})"

    def __call__(self, x):
        if x is INF or x.n >= self.cap:
            return x
        return Fin(x.n + 1)


class IdentityRule(SymbolicRule):
    name = "identity"
    progressive = True
    monotone = True

    def __call__(self, x):
        return x


class OrdinalSuccessorRule(SymbolicRule):
    """Notation successor capped at ``beta`` (an endomap of ``OrdinalSegment(beta)``)."""

    progressive = True
    monotone = True

    def __init__(self, beta: Ordinal):
        self.beta = beta
        self.name = f"successor_upto({beta})"

    def __call__(self, x):
        from .ordinals import successor

        return self.beta if x >= self.beta else min(successor(x), self.beta)


class ConstantRule(SymbolicRule):
    monotone = True

    def __init__(self, value):
        self.value = value
        self.name = f"const({value})"

    def __call__(self, x):
        return self.value


RULES: dict[str, Callable[..., SymbolicRule]] = {
    "successor": SuccessorRule,
    "identity": IdentityRule,
    "capped_successor": CappedSuccessorRule,
    "ordinal_successor": OrdinalSuccessorRule,
}


@dataclass(frozen=True, eq=False)
class EndoMap:
    """An endofunction of a poset with checked progressive/monotone flags."""

    domain: Poset
    progressive: bool
    monotone: bool
    table: Mapping | None = None
    rule: SymbolicRule | None = None
    name: str = ""

    def __call__(self, x):
        if self.table is not None:
            try:
                return self.table[x]
            except (KeyError, TypeError):
                raise UnknownElement(x, self.domain.describe()) from None
        return self.rule(x)

    @cached_property
    def signature(self) -> tuple:
        if self.table is None:
            return (self.rule,)
        return tuple(self.table[e] for e in self.domain.elements())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EndoMap)
            and self.domain == other.domain
            and self.signature == other.signature
        )

    def __hash__(self) -> int:
        return hash(self.signature)

    def __repr__(self) -> str:
        label = self.name or (repr(self.rule) if self.rule else dict(self.table))
        return f"EndoMap({label}, progressive={self.progressive}, monotone={self.monotone})"


def classify_map(P: Poset, f, name: str = "") -> EndoMap:
    """Wrap ``f`` (mapping, callable or :class:`SymbolicRule`) as an :class:`EndoMap`.

    On finite posets both flags come from an exhaustive check (monotonicity
    over covering pairs, which generate the order).  On symbolic posets the
    rule's certificate is taken and spot-checked against sample elements.
    """
    if isinstance(f, EndoMap):
        f = f.table if f.table is not None else f.rule
    if not P.is_finite:
        if not isinstance(f, SymbolicRule):
            raise PartialFunction("maps on symbolic posets must be certified rules")
        sample = P.sample()
        for x in sample:
            fx = f(x)
            if fx not in P:
                raise PartialFunction(f"{f!r} leaves {P.describe()} at {x!r}")
            if f.progressive and not P.leq(x, fx):
                raise InvariantViolation(f"{f!r} certified progressive but {x!r} > {fx!r}")
        if f.monotone:
            for a, b in itertools.product(sample, repeat=2):
                if P.leq(a, b) and not P.leq(f(a), f(b)):
                    raise InvariantViolation(f"{f!r} certified monotone but fails at {a!r} <= {b!r}")
        return EndoMap(P, f.progressive, f.monotone, rule=f, name=name or f.name)
    lookup = f.__getitem__ if isinstance(f, Mapping) else f
    table = {}
    for x in P.elements():
        try:
            fx = lookup(x)
        except (KeyError, IndexError):
            raise PartialFunction(f"map undefined at {x!r}") from None
        if fx not in P:
            raise PartialFunction(f"map sends {x!r} outside the poset ({fx!r})")
        table[x] = fx
    progressive = all(P.leq(x, fx) for x, fx in table.items())
    monotone = all(P.leq(table[a], table[b]) for a, b in P.covers())
    return EndoMap(P, progressive, monotone, table=table, name=name)


def up_set(P: Poset, x) -> Poset:
    """The subposet ``{y | x <= y}``."""
    P.check(x)
    if isinstance(P, FinitePoset):
        return P.restrict(P.members(P.up_mask(x)))
    if P.is_finite:
        return as_finite_poset(P).restrict([y for y in P.elements() if P.leq(x, y)])
    return UpSet(P, x)


@dataclass(frozen=True)
class FixedPointWitness:
    """``map(point) == point`` and ``above <= point``, verified on construction."""

    poset: Poset
    map: EndoMap
    point: Any
    above: Any
    engine: str = ""
    stage: Ordinal | None = None
    trail: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.map(self.point) != self.point:
            raise InvariantViolation(f"{self.point!r} is not fixed by {self.map!r}")
        if not self.poset.leq(self.above, self.point):
            raise InvariantViolation(f"{self.point!r} is not above {self.above!r}")
