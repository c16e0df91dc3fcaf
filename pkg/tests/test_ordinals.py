from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from fixlab import oracles
from fixlab.errors import NonCanonical
from fixlab.ordinals import (
    OMEGA,
    ONE,
    ZERO,
    Ordering,
    Ordinal,
    SegmentRelation,
    format_ordinal,
    fundamental_sequence,
    initial_segment_compare,
    ord_compare,
    parse_ordinal,
    successor,
)

from strategies import ordinals


def _oracle_cmp(a, b):
    base = max(oracles.max_coefficient(a), oracles.max_coefficient(b)) + 2
    va, vb = oracles.ordinal_value(a, base), oracles.ordinal_value(b, base)
    return (va > vb) - (va < vb)


@given(ordinals(), ordinals())
def test_compare_matches_hereditary_base_value(a, b):
    assert ord_compare(a, b).value == _oracle_cmp(a, b)


@given(ordinals(), ordinals(), ordinals())
def test_transitivity(a, b, c):
    if a <= b and b <= c:
        assert a <= c


@given(ordinals())
def test_successor_is_strictly_larger_and_least(a):
    s = successor(a)
    assert a < s
    assert s.is_successor
    assert s.predecessor() == a


@given(ordinals())
def test_round_trip(a):
    assert parse_ordinal(format_ordinal(a)) == a


@given(ordinals())
def test_exactly_one_kind(a):
    assert [a.is_zero, a.is_successor, a.is_limit].count(True) == 1


@given(ordinals())
def test_fundamental_sequence_is_increasing_and_cofinal_below(a):
    fs = fundamental_sequence(a)
    if not a.is_limit:
        assert fs is None
        return
    seq = fs.take(5)
    assert all(x < a for x in seq)
    assert all(x < y for x, y in zip(seq, seq[1:]))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("w", ["0", "1", "2", "3"]),
        ("w*2", ["w", "w+1", "w+2", "w+3"]),
        ("w^2", ["0", "w", "w*2", "w*3"]),
        ("w^w", ["1", "w", "w^2", "w^3"]),
        ("w^2+w", ["w^2", "w^2+1", "w^2+2", "w^2+3"]),
        ("w^(w+1)", ["0", "w^w", "w^w*2", "w^w*3"]),
    ],
)
def test_fundamental_sequences_frozen(text, expected):
    assert [str(x) for x in fundamental_sequence(parse_ordinal(text)).take(4)] == expected


@pytest.mark.parametrize(
    "text",
    ["0", "1", "7", "w", "w+1", "w*2+3", "w^2", "w^w", "w^(w+1)*3+w^2+5", "w^(w^w)"],
)
def test_printer_is_canonical(text):
    assert format_ordinal(parse_ordinal(text)) == text


@pytest.mark.parametrize("text", ["w+w", "1+w", "w^0", "w*0", "w+0", "w^2+w^3"])
def test_non_canonical_rejected(text):
    with pytest.raises(NonCanonical):
        parse_ordinal(text)


@pytest.mark.parametrize("text", ["", "w+", "x", "w^", "(w"])
def test_syntax_errors(text):
    with pytest.raises(ValueError):
        parse_ordinal(text)


def test_unicode_omega():
    assert parse_ordinal("ω+1") == successor(OMEGA)


def test_constructors():
    assert Ordinal.of(0) == ZERO and Ordinal.of(1) == ONE
    assert Ordinal.omega_power(ONE) == OMEGA
    with pytest.raises(ValueError):
        Ordinal.of(-1)
    with pytest.raises(NonCanonical):
        Ordinal(((ZERO, 1), (ONE, 1)))


def test_unchecked_bypasses_guard():
    bad = Ordinal.unchecked(((ZERO, 1), (ONE, 1)))
    assert bad.terms[0] == (ZERO, 1)


def test_segment_relation():
    w = OMEGA
    assert initial_segment_compare(Ordinal.of(3), w) is SegmentRelation.A_INITIAL_IN_B
    assert initial_segment_compare(w, w) is SegmentRelation.EQUAL
    assert initial_segment_compare(successor(w), w) is SegmentRelation.B_INITIAL_IN_A


@given(st.integers(0, 50), st.integers(0, 50))
def test_finite_ordinals_behave_like_integers(m, n):
    assert ord_compare(Ordinal.of(m), Ordinal.of(n)) is Ordering((m > n) - (m < n))
    assert Ordinal.of(m).as_int() == m


def test_predecessor_of_limit_fails():
    with pytest.raises(ValueError):
        OMEGA.predecessor()
