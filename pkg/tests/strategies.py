from __future__ import annotations

from hypothesis import strategies as st

from fixlab.order import EndoMap, FinitePoset, classify_map


@st.composite
def finite_posets(draw, max_size: int = 5) -> FinitePoset:
    """Random posets: an upper-triangular relation on range(n), closed transitively."""
    n = draw(st.integers(0, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return FinitePoset(range(n), chosen, closure=True)


@st.composite
def poset_and_map(draw, max_size: int = 5, nonempty: bool = True):
    P = draw(finite_posets(max_size).filter(lambda P: P.size() > 0 or not nonempty))
    elems = P.elements()
    table = {x: draw(st.sampled_from(elems)) for x in elems}
    return P, classify_map(P, table)


@st.composite
def progressive_instance(draw, max_size: int = 5):
    """A poset with a progressive map and a start point."""
    P = draw(finite_posets(max_size).filter(lambda P: P.size() > 0))
    table = {x: draw(st.sampled_from([y for y in P.elements() if P.leq(x, y)])) for x in P.elements()}
    f: EndoMap = classify_map(P, table)
    return P, f, draw(st.sampled_from(P.elements()))


def _from_terms(parts):
    from fixlab.ordinals import Ordinal

    exps = sorted({e for e, _ in parts}, reverse=True)
    coeff = dict(parts)
    return Ordinal(tuple((e, coeff[e]) for e in exps))


def ordinals(max_coeff: int = 6, depth: int = 2):
    """Canonical notations with exponents nested at most ``depth`` deep."""
    from fixlab.ordinals import Ordinal

    finite = st.integers(0, max_coeff).map(Ordinal.of)
    if depth == 0:
        return finite
    inner = ordinals(max_coeff, depth - 1)
    terms = st.lists(st.tuples(inner, st.integers(1, max_coeff)), min_size=1, max_size=3).map(_from_terms)
    return st.one_of(finite, terms)


@st.composite
def monotone_instance(draw, max_size: int = 5, chain_complete: bool = True):
    """A poset (chain-complete by default) with a monotone map."""
    from fixlab.generate import monotone_maps

    P = draw(finite_posets(max_size).filter(lambda P: P.size() > 0))
    if chain_complete and P.bottom() is None:
        # adjoin a least element below everything
        elems = list(P.elements())
        P = FinitePoset([-1, *elems], list(P.relation()) + [(-1, e) for e in elems], closure=True)
    return P, draw(st.sampled_from(monotone_maps(P)))
