from __future__ import annotations

import itertools
import random

import pytest

from fixlab import oracles
from fixlab.caps import Caps
from fixlab.errors import ProgEnumerationLimit, SizeLimit
from fixlab.generate import (
    LABELED_POSET_COUNTS,
    all_maps,
    enumerate_posets,
    monotone_maps,
    progressive_maps,
    random_flow_graph,
    random_ordinal,
)
from fixlab.order import FinitePoset


@pytest.mark.parametrize("n", range(5))
def test_labeled_counts_match_brute_force(n):
    assert sum(1 for _ in enumerate_posets(n)) == oracles.labeled_poset_count(n) == LABELED_POSET_COUNTS[n]


def test_unlabeled_counts():
    # number of posets up to isomorphism on 0..4 points
    assert [sum(1 for _ in enumerate_posets(n, unlabeled=True)) for n in range(5)] == [1, 1, 2, 5, 16]


def test_enumeration_cap():
    with pytest.raises(SizeLimit):
        list(enumerate_posets(3, Caps(poset_enum=2)))


def test_enumerated_posets_are_distinct():
    seen = {(P.elements(), tuple(P.relation())) for P in enumerate_posets(3)}
    assert len(seen) == 19


def test_progressive_counts_are_products_of_up_sets(vee, three_chain):
    for P in (vee, three_chain):
        expected = 1
        for x in P.elements():
            expected *= sum(1 for y in P.elements() if P.leq(x, y))
        assert len(progressive_maps(P)) == expected


def test_progressive_cap(three_chain):
    with pytest.raises(ProgEnumerationLimit):
        progressive_maps(three_chain, Caps(prog_maps=5))


def test_monotone_maps_match_oracle(vee):
    brute = [m for m in all_maps(vee) if oracles.is_monotone(vee, m.__getitem__)]
    assert len(monotone_maps(vee)) == len(brute)


def test_all_maps_count(three_chain):
    assert sum(1 for _ in all_maps(three_chain)) == 27


def test_random_ordinal_is_reproducible():
    a = [str(random_ordinal(random.Random(5))) for _ in range(3)]
    b = [str(random_ordinal(random.Random(5))) for _ in range(3)]
    assert a == b


def test_random_flow_graph_bounds():
    rng = random.Random(0)
    for _ in range(50):
        g = random_flow_graph(rng)
        assert len(g.nodes) <= 4
        assert len(g.facts) <= 3
