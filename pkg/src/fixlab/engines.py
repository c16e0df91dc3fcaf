"""Fixed-point engines.

Each engine follows one classical existence proof step by step and
returns a verified :class:`~fixlab.order.FixedPointWitness`:

* :func:`tarski_lfp`: infimum of the pre-fixed points above the start.
* :func:`pataraia_fix`: top element of the directed set of monotone
  progressive maps on the post-fixed points.
* :func:`dacar_reduction`: a progressive map on the chains of ``P``
  (ordered by inclusion) whose fixed chain has a fixed supremum.
* :func:`kt_via_bw`: the same idea restricted to *nice* chains, for
  monotone maps.
* :func:`build_fpo` / :func:`aggregate_family`: fixed points of the
  "apply every progressive map" endomap on ``P^Prog(P)`` and on products
  of such powers.

:func:`iterative_fix_oracle` is the plain ``x, f(x), f(f(x)), ...``
iteration and serves as the independent cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .caps import Caps, current_caps
from .errors import (
    InvariantViolation,
    MSizeLimit,
    NoProgress,
    NotChainComplete,
    NotCompleteLattice,
    NotDirectedComplete,
    NotMonotone,
    NotPostFixed,
    NotProgressive,
    SizeLimit,
)
from .generate import progressive_maps
from .order import (
    EndoMap,
    FinitePoset,
    FixedPointWitness,
    Poset,
    ProductPoset,

    _chain_masks,
    as_finite_poset,
    check_chain_complete,
    check_complete_lattice,
    check_directed_complete,
    classify_map,
    is_chain,
)

# beyond this many elements an endomap of a product is checked structurally
EXHAUSTIVE_LIMIT = 100_000


def _require_postfixed(P: Poset, f: EndoMap, x) -> None:
    P.check(x)
    if not P.leq(x, f(x)):
        raise NotPostFixed(f"{x!r} is not post-fixed: f({x!r}) = {f(x)!r}")


def _require_chain_complete(P: Poset, caps: Caps) -> None:
    result = check_chain_complete(P, caps)
    if not result:
        raise NotChainComplete(f"{P.describe()} is not chain-complete: {result}")


# -- independent oracle ---------------------------------------------------


def iterative_fix_oracle(P: Poset, f: EndoMap, x, max_steps: int | None = None) -> FixedPointWitness:
    """Iterate ``x, f(x), f(f(x)), ...`` until it stops moving.

    On a finite poset an increasing sequence stabilises within ``|P|``
    steps; ``NoProgress`` is raised if it decreases or fails to settle.
    """
    if not P.is_finite:
        raise NoProgress("the iterative oracle needs a finite poset")
    P.check(x)
    if not (f.progressive or (f.monotone and P.leq(x, f(x)))):
        raise NoProgress("map is neither progressive nor monotone with a post-fixed start")
    bound = P.size() if max_steps is None else max_steps
    y, trail = x, [x]
    for _ in range(bound + 1):
        fy = f(y)
        if fy == y:
            return FixedPointWitness(P, f, y, x, engine="iterate", trail=tuple(trail))
        if not P.leq(y, fy):
            raise NoProgress(f"iteration decreased at {y!r}")
        y = fy
        trail.append(y)
    raise NoProgress(f"no fixed point within {bound} steps")


# -- Tarski -----------------------------------------------------------------


def tarski_lfp(L: Poset, f: EndoMap, x) -> FixedPointWitness:
    """Least fixed point above a post-fixed ``x``: the infimum of the pre-fixed points above ``x``."""
    if not check_complete_lattice(L):
        raise NotCompleteLattice(f"{L.describe()} is not a complete lattice")
    if not f.monotone:
        raise NotMonotone("Tarski's construction needs a monotone map")
    _require_postfixed(L, f, x)
    prefixed = [y for y in L.elements() if L.leq(x, y) and L.leq(f(y), y)]
    z = L.inf_finite(prefixed)
    witness = FixedPointWitness(L, f, z, x, engine="tarski")
    for y in L.elements():
        if f(y) == y and L.leq(x, y) and not L.leq(z, y):
            raise InvariantViolation(f"{z!r} is not below the fixed point {y!r}")
    return witness


# -- Pataraia ---------------------------------------------------------------


@dataclass(frozen=True)
class PataraiaRun:
    """Everything the construction builds, kept for inspection."""

    postfixed: FinitePoset
    maps: tuple  # monotone progressive self-maps of the post-fixed points, as tuples
    top: tuple
    contains_identity: bool
    contains_restriction: bool
    directed: bool
    absorbs: bool  # g . top == top for every member g

    def top_map(self) -> dict:
        return dict(zip(self.postfixed.elements(), self.top))


@lru_cache(maxsize=4096)
def _pataraia_run(P: Poset, f: EndoMap, q_cap: int) -> PataraiaRun:
    F = as_finite_poset(P)
    Q = F.restrict([y for y in F.elements() if F.leq(y, f(y))])
    n = Q.size()
    if n > q_cap:
        raise MSizeLimit("post-fixed points for M", n, q_cap)
    elems = Q.elements()
    pos = {e: i for i, e in enumerate(elems)}
    covers = [(pos[a], pos[b]) for a, b in Q.covers()]
    choices = [[pos[e] for e in sorted(Q.members(Q.up_mask(q)), key=pos.get)] for q in elems]
    M = [
        g
        for g in itertools.product(*choices)
        if all(Q.leq(elems[g[a]], elems[g[b]]) for a, b in covers)
    ]
    members = set(M)
    identity = tuple(range(n))
    restriction = tuple(pos[f(q)] for q in elems)

    def below(g, h):
        return all(Q.leq(elems[g[i]], elems[h[i]]) for i in range(n))

    directed = bool(M)
    for g, h in itertools.product(M, repeat=2):
        comp = tuple(g[h[i]] for i in range(n))
        if comp not in members or not (below(g, comp) and below(h, comp)):
            directed = False
            break
    top = []
    for i in range(n):
        s = Q.sup_finite({elems[g[i]] for g in M})
        if s is None:
            raise NotDirectedComplete("pointwise supremum of M does not exist")
        top.append(pos[s])
    top = tuple(top)
    if top not in members or not all(below(g, top) for g in M):
        raise InvariantViolation("pointwise supremum of M is not its top element")
    absorbs = all(tuple(g[top[i]] for i in range(n)) == top for g in M)
    as_elems = lambda g: tuple(elems[i] for i in g)  # noqa: E731
    return PataraiaRun(
        Q,
        tuple(as_elems(g) for g in M),
        as_elems(top),
        identity in members,
        restriction in members,
        directed,
        absorbs,
    )


def pataraia_internals(P: Poset, f: EndoMap, caps: Caps | None = None) -> PataraiaRun:
    caps = caps or current_caps()
    if not check_directed_complete(P, caps):
        raise NotDirectedComplete(f"{P.describe()} is not directed-complete")
    if not f.monotone:
        raise NotMonotone("Pataraia's construction needs a monotone map")
    return _pataraia_run(P, f, caps.pataraia_q)


def pataraia_fix(P: Poset, f: EndoMap, x, caps: Caps | None = None) -> FixedPointWitness:
    """``t(x)`` where ``t`` is the top of the monotone progressive maps on the post-fixed points."""
    _require_postfixed(P, f, x)
    run = pataraia_internals(P, f, caps)
    if not run.directed:
        raise InvariantViolation("M is not directed")
    if not run.absorbs:
        raise InvariantViolation("top of M is not absorbing")
    return FixedPointWitness(P, f, run.top_map()[x], x, engine="pataraia")


# -- chains ordered by inclusion ------------------------------------------


@lru_cache(maxsize=1024)
def _chain_poset(F: FinitePoset) -> FinitePoset:
    masks = _chain_masks(F)
    masks.sort(key=lambda m: (bin(m).count("1"), m))
    up = [0] * len(masks)
    for i, a in enumerate(masks):
        for j, b in enumerate(masks):
            if a & ~b == 0:
                up[i] |= 1 << j
    elems = tuple(F.members(m) for m in masks)
    return FinitePoset._from_masks(elems, up, name=f"Ch({F.describe()})")


def chain_poset(P: Poset, caps: Caps | None = None) -> FinitePoset:
    """The chains of ``P`` ordered by inclusion."""
    caps = caps or current_caps()
    if P.size() > caps.chains:
        raise SizeLimit("chain enumeration", P.size(), caps.chains)
    return _chain_poset(as_finite_poset(P))


@lru_cache(maxsize=1024)
def _directed_complete_cached(C: FinitePoset, caps: Caps) -> bool:
    return bool(check_directed_complete(C, caps, cross_check=False))


def dacar_reduction(P: Poset, f: EndoMap, x, caps: Caps | None = None) -> FixedPointWitness:
    """Fixed point of a progressive map via ``F(A) = A ∪ {f(sup A)}`` on chains under inclusion."""
    caps = caps or current_caps()
    _require_chain_complete(P, caps)
    if not f.progressive:
        raise NotProgressive("the chain reduction needs a progressive map")
    P.check(x)
    C = chain_poset(P, caps)
    if not _directed_complete_cached(C, caps):
        raise InvariantViolation("chains under inclusion are not directed-complete")
    grow = classify_map(C, {A: A | {f(P.sup(A))} for A in C.elements()}, name="A ∪ {f(sup A)}")
    if not grow.progressive:
        raise InvariantViolation("chain extension map is not progressive")
    fixed_chain = iterative_fix_oracle(C, grow, frozenset([x]))
    B = fixed_chain.point
    top = P.sup(B)
    if f(top) not in B or not P.leq(f(top), top):
        raise InvariantViolation("f(sup B) is not below sup B")
    return FixedPointWitness(P, f, top, x, engine="dacar", trail=fixed_chain.trail)


# -- Knaster-Tarski from Bourbaki-Witt --------------------------------------


def _is_nice(P: Poset, f: EndoMap, chain) -> bool:
    return all(P.leq(y, f(y)) for y in chain)


def kt_via_bw(P: Poset, f: EndoMap, x, caps: Caps | None = None) -> FixedPointWitness:
    """Fixed point of a monotone map above a post-fixed point through nice chains.

    A chain is nice when ``f`` is progressive on it.  Nice chains under
    inclusion carry the progressive map ``s(C) = C ∪ {sup f[C]}``; the
    supremum of its fixed chain above ``{x}`` is fixed by ``f``.  Small
    posets get the whole nice-chain poset materialised; larger ones are
    walked along the iteration only, with every stage checked.
    """
    caps = caps or current_caps()
    _require_chain_complete(P, caps)
    if not f.monotone:
        raise NotMonotone("nice-chain construction needs a monotone map")
    _require_postfixed(P, f, x)

    def step(chain: frozenset) -> frozenset:
        image = [f(y) for y in chain]
        return chain | {P.sup(image)}

    start = frozenset([x])
    if P.size() <= caps.chains:
        C = chain_poset(P, caps)
        N = C.restrict([c for c in C.elements() if _is_nice(P, f, c)])
        s = classify_map(N, {c: step(c) for c in N.elements()}, name="s")
        if not s.progressive:
            raise InvariantViolation("s is not progressive on nice chains")
        trail = iterative_fix_oracle(N, s, start).trail
    else:
        trail, chain = [start], start
        for _ in range(P.size() + 1):
            nxt = step(chain)
            if not (chain <= nxt and is_chain(P, nxt)):
                raise InvariantViolation(f"s fails to extend the chain {sorted(map(repr, chain))}")
            if nxt == chain:
                break
            trail.append(nxt)
            chain = nxt
        else:
            raise NoProgress("nice-chain iteration did not stabilise")
    for stage in trail:
        if not _is_nice(P, f, stage):
            raise InvariantViolation("an s-iteration stage is not nice")
    return FixedPointWitness(P, f, P.sup(trail[-1]), x, engine="kt", trail=tuple(trail))


# -- fixed-point operators ----------------------------------------------------


@dataclass(frozen=True)
class FixedPointOperator:
    """A fixed point for every progressive map of ``poset``, indexed by the map."""

    poset: Poset
    maps: tuple
    points: tuple

    def __post_init__(self):
        for f, p in zip(self.maps, self.points):
            if f(p) != p:
                raise InvariantViolation(f"{p!r} is not fixed by {f!r}")

    def __call__(self, f: EndoMap):
        for g, p in zip(self.maps, self.points):
            if g.signature == f.signature:
                return p
        raise KeyError(f"{f!r} is not a progressive map of {self.poset.describe()}")

    def entries(self) -> list[tuple]:
        return list(zip(self.maps, self.points))


def _power_of_prog(P: Poset, caps: Caps) -> tuple[tuple, ProductPoset]:
    _require_chain_complete(P, caps)
    progs = tuple(progressive_maps(P, caps))
    return progs, ProductPoset([P] * len(progs), name=f"{P.describe()}^Prog")


def _apply_all(maps: tuple):
    def h(point: tuple) -> tuple:
        return tuple(f(x) for f, x in zip(maps, point))

    return h


def _endomap_of_product(E: ProductPoset, fn, progressive: bool, name: str) -> EndoMap:
    if E.size() <= EXHAUSTIVE_LIMIT:
        return classify_map(E, fn, name=name)
    # pointwise composition of progressive maps is progressive
    return EndoMap(E, progressive, False, rule=fn, name=name)


def build_fpo(P: Poset, caps: Caps | None = None) -> FixedPointOperator:
    """Fixed-point operator from a fixed point of ``h(<x_f>) = <f(x_f)>`` on ``P^Prog(P)``."""
    caps = caps or current_caps()
    progs, E = _power_of_prog(P, caps)
    if not check_chain_complete(E, caps):
        raise InvariantViolation("P^Prog(P) is not chain-complete")
    h = _endomap_of_product(E, _apply_all(progs), True, "h")
    if not h.progressive:
        raise InvariantViolation("h is not progressive")
    w = iterative_fix_oracle(E, h, E.bottom(), max_steps=sum(1 for _ in progs) * P.size())
    return FixedPointOperator(P, progs, w.point)


@dataclass(frozen=True)
class PosetFamily:
    members: tuple  # (Poset, EndoMap | None) pairs

    def __init__(self, members: Iterable):
        object.__setattr__(self, "members", tuple(
            m if isinstance(m, tuple) else (m, None) for m in members
        ))


@dataclass(frozen=True)
class Aggregate:
    poset: ProductPoset
    map: EndoMap
    fixed_point: FixedPointWitness
    operators: tuple = field(default=())


def aggregate_family(W: PosetFamily, caps: Caps | None = None) -> Aggregate:
    """Product of the powers ``P^Prog(P)`` with the map ``F ↦ ((P, f) ↦ f(F P f))``.

    A fixed point of the product map restricts, member by member, to a
    fixed-point operator.
    """
    caps = caps or current_caps()
    powers = [_power_of_prog(P, caps) for P, _ in W.members]
    A = ProductPoset([E for _, E in powers], name="aggregate")
    appliers = [_apply_all(progs) for progs, _ in powers]

    def H(F: tuple) -> tuple:
        return tuple(apply(component) for apply, component in zip(appliers, F))

    Hmap = _endomap_of_product(A, H, True, "aggregate")
    if not Hmap.progressive:
        raise InvariantViolation("aggregate map is not progressive")
    bound = sum(len(progs) * P.size() for (progs, _), (P, _) in zip(powers, W.members))
    w = iterative_fix_oracle(A, Hmap, A.bottom(), max_steps=bound)
    operators = []
    for (P, chosen), (progs, _), component in zip(W.members, powers, w.point):
        op = FixedPointOperator(P, progs, component)
        if chosen is not None and chosen(op(chosen)) != op(chosen):
            raise InvariantViolation("operator entry for the chosen map is not fixed")
        operators.append(op)
    return Aggregate(A, Hmap, w, tuple(operators))


ENGINES = {
    "tarski": tarski_lfp,
    "pataraia": pataraia_fix,
    "dacar": dacar_reduction,
    "kt": kt_via_bw,
    "iterate": iterative_fix_oracle,
}

__all__ = [
    "ENGINES",
    "Aggregate",
    "FixedPointOperator",
    "PataraiaRun",
    "PosetFamily",
    "aggregate_family",
    "build_fpo",
    "chain_poset",
    "dacar_reduction",
    "iterative_fix_oracle",
    "kt_via_bw",
    "pataraia_fix",
    "pataraia_internals",
    "tarski_lfp",
]
