"""Brute-force oracles.

Nothing here reuses the order machinery beyond ``elements()`` and
``leq()`` of a handle: suprema, chains and directed sets are recomputed
from the definitions by enumerating subsets, so these functions can be
used to cross-check the library's own routines.
"""

from __future__ import annotations

import itertools

from .ordinals import Ordinal


def subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def lub(P, S):
    """Least upper bound by definition, or ``None``."""
    elems = P.elements()
    uppers = [u for u in elems if all(P.leq(s, u) for s in S)]
    least = [u for u in uppers if all(P.leq(u, v) for v in uppers)]
    return least[0] if least else None


def is_chain(P, S) -> bool:
    return all(P.leq(a, b) or P.leq(b, a) for a in S for b in S)


def is_directed(P, S) -> bool:
    return bool(S) and all(any(P.leq(a, u) and P.leq(b, u) for u in S) for a in S for b in S)


def chains(P) -> list:
    return [frozenset(S) for S in subsets(P.elements()) if is_chain(P, S)]


def chain_complete(P) -> bool:
    return all(lub(P, S) is not None for S in subsets(P.elements()) if is_chain(P, S))


def directed_complete(P) -> bool:
    return all(lub(P, S) is not None for S in subsets(P.elements()) if is_directed(P, S))


def complete_lattice(P) -> bool:
    elems = P.elements()
    return bool(elems) and all(lub(P, S) is not None for S in subsets(elems))


def glb(P, S):
    elems = P.elements()
    lowers = [u for u in elems if all(P.leq(u, s) for s in S)]
    greatest = [u for u in lowers if all(P.leq(v, u) for v in lowers)]
    return greatest[0] if greatest else None


def is_monotone(P, f) -> bool:
    elems = P.elements()
    return all(P.leq(f(a), f(b)) for a in elems for b in elems if P.leq(a, b))


def is_progressive(P, f) -> bool:
    return all(P.leq(x, f(x)) for x in P.elements())


def fixed_points_above(P, f, x) -> list:
    return [y for y in P.elements() if f(y) == y and P.leq(x, y)]


def labeled_poset_count(n: int) -> int:
    """Count partial orders on ``n`` labeled points by testing every relation."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    count = 0
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if (bits >> k) & 1}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
            continue
        count += 1
    return count


def ordinal_value(a: Ordinal, base: int) -> int:
    """Hereditary base-``base`` value: replace every omega by ``base``.

    Strictly order-preserving on notations whose coefficients (at every
    nesting level) are all below ``base``.
    """
    return sum(coeff * base ** ordinal_value(exp, base) for exp, coeff in a.terms)


def max_coefficient(a: Ordinal) -> int:
    return max((max(c, max_coefficient(e)) for e, c in a.terms), default=0)
