"""Generators for small instances: labeled posets, endomaps, notations, flow graphs."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .caps import Caps, current_caps
from .errors import SizeLimit
from .order import FinitePoset, Poset, _bits, as_finite_poset, classify_map
from .ordinals import Ordinal

# labeled posets on n points (OEIS A001035)
LABELED_POSET_COUNTS = (1, 1, 3, 19, 219, 4231)


def _extensions(up: list[int], k: int) -> Iterator[list[int]]:
    """Ways to add point ``k`` to a poset on ``0..k-1`` given as up-masks."""
    down = [0] * k
    for i, m in enumerate(up):
        for j in _bits(m):
            down[j] |= 1 << i
    downsets = [m for m in range(1 << k) if all(down[i] & ~m == 0 for i in _bits(m))]
    upsets = [m for m in range(1 << k) if all(up[i] & ~m == 0 for i in _bits(m))]
    for D in downsets:
        for U in upsets:
            if U & D or any(U & ~up[d] for d in _bits(D)):
                continue
            new = [m | (1 << k) if (D >> i) & 1 else m for i, m in enumerate(up)]
            new.append(U | (1 << k))
            yield new


def enumerate_posets(n: int, caps: Caps | None = None, *, unlabeled: bool = False) -> Iterator[FinitePoset]:
    """All partial orders on the labeled points ``"0" .. str(n-1)``.

    Each labeled poset appears once, in a canonical order.  With
    ``unlabeled=True`` only the first member of each isomorphism class is
    kept.
    """
    caps = caps or current_caps()
    if n > caps.poset_enum:
        raise SizeLimit("poset enumeration", n, caps.poset_enum)
    layers = [[]]
    for k in range(n):
        layers = [new for up in layers for new in _extensions(up, k)]
    ids = tuple(str(i) for i in range(n))
    masks = sorted(layers, key=lambda up: tuple(up))
    seen: set = set()
    for up in masks:
        if unlabeled:
            form = _canonical_form(up)
            if form in seen:
                continue
            seen.add(form)
        yield FinitePoset._from_masks(ids, list(up))


def _canonical_form(up: list[int]) -> tuple:
    n = len(up)
    best = None
    for perm in itertools.permutations(range(n)):
        rel = tuple(sorted((perm[i], perm[j]) for i in range(n) for j in _bits(up[i])))
        if best is None or rel < best:
            best = rel
    return best


def all_maps(P: Poset) -> Iterator[dict]:
    elems = P.elements()
    for images in itertools.product(elems, repeat=len(elems)):
        yield dict(zip(elems, images))


def progressive_maps(P: Poset, caps: Caps | None = None) -> list:
    """``Prog(P)``: every progressive endomap, as classified :class:`EndoMap` objects."""
    from .errors import ProgEnumerationLimit

    caps = caps or current_caps()
    F = as_finite_poset(P)
    elems = F.elements()
    choices = [F.members(F.up_mask(x)) for x in elems]
    total = 1
    for c in choices:
        total *= len(c)
    if total > caps.prog_maps:
        raise ProgEnumerationLimit("progressive maps", total, caps.prog_maps)
    ordered = [sorted(c, key=lambda y: F.index(y)) for c in choices]
    out = []
    for images in itertools.product(*ordered):
        out.append(classify_map(P, dict(zip(elems, images))))
    return out


def monotone_maps(P: Poset) -> list:
    return [m for m in (classify_map(P, t) for t in all_maps(P)) if m.monotone]


# -- ordinal notations ----------------------------------------------------


def random_ordinal(rng: random.Random, depth: int = 2, max_terms: int = 3, max_coeff: int = 5) -> Ordinal:
    """A random canonical notation whose exponents nest at most ``depth`` deep."""
    if depth == 0 or rng.random() < 0.25:
        n = rng.randint(0, max_coeff)
        return Ordinal.of(n)
    exps = {random_ordinal(rng, depth - 1, max_terms, max_coeff) for _ in range(rng.randint(1, max_terms))}
    exps = sorted(exps, reverse=True)
    terms = tuple((e, rng.randint(1, max_coeff)) for e in exps)
    return Ordinal(terms)


def random_flow_graph(rng: random.Random, max_nodes: int = 4, max_facts: int = 3):
    from .dataflow import FlowGraph

    n = rng.randint(0, max_nodes)
    k = rng.randint(0, max_facts)
    nodes = [f"n{i}" for i in range(n)]
    facts = [f"d{i}" for i in range(k)]
    edges = sorted({(a, b) for a in nodes for b in nodes if rng.random() < 0.35})
    gen, kill = {}, {}
    for node in nodes:
        g = {d for d in facts if rng.random() < 0.3}
        kset = {d for d in facts if d not in g and rng.random() < 0.3}
        gen[node], kill[node] = g, kset
    return FlowGraph(nodes, edges, facts, gen, kill)


__all__ = [
    "LABELED_POSET_COUNTS",
    "enumerate_posets",
    "all_maps",
    "progressive_maps",
    "monotone_maps",
    "random_ordinal",
    "random_flow_graph",
]
