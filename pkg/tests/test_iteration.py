from __future__ import annotations

import pytest
from hypothesis import assume, given

from fixlab.engines import iterative_fix_oracle
from fixlab.errors import NotProgressive, SupUnresolvable
from fixlab.iteration import (
    LIMIT_SAMPLE,
    NotStabilized,
    bw_fix_by_iteration,
    injectivity_scan,
    transfinite_iterate,
)
from fixlab.order import (
    INF,
    CappedSuccessorRule,
    Fin,
    OrdinalSegment,
    OrdinalSuccessorRule,
    SuccessorRule,
    check_chain_complete,
    classify_map,
)
from fixlab.ordinals import OMEGA, Ordinal, parse_ordinal

from strategies import progressive_instance


@pytest.fixture
def succ(omega1):
    return classify_map(omega1, SuccessorRule())


def test_successor_trace(omega1, succ):
    trace = transfinite_iterate(omega1, succ, Fin(0), OMEGA)
    assert trace.values() == [Fin(k) for k in range(LIMIT_SAMPLE + 1)] + [INF]
    assert [str(y) for y, _ in trace.stages][-1] == "w"
    assert trace.fixed_stage == OMEGA


def test_not_stabilized_before_omega(omega1, succ):
    r = bw_fix_by_iteration(omega1, succ, Fin(0), Ordinal.of(5))
    assert isinstance(r, NotStabilized) and not r
    assert r.limit == Ordinal.of(5)


@pytest.mark.parametrize("limit", ["w", "w+1", "w*2", "w^2", "w^w"])
def test_witness_at_omega_for_larger_limits(omega1, succ, limit):
    w = bw_fix_by_iteration(omega1, succ, Fin(0), parse_ordinal(limit))
    assert w.point is INF and w.stage == OMEGA and w.engine == "transfinite"


def test_values_past_the_fixed_stage(omega1, succ):
    trace = transfinite_iterate(omega1, succ, Fin(0), parse_ordinal("w*2"))
    assert trace.value(parse_ordinal("w+3")) is INF
    with pytest.raises(ValueError):
        trace.value(parse_ordinal("w^2"))


def test_start_above_zero(omega1, succ):
    trace = transfinite_iterate(omega1, succ, Fin(4), Ordinal.of(3))
    assert trace.values() == [Fin(4), Fin(5), Fin(6), Fin(7)]


def test_capped_successor_stops_at_cap(omega1):
    f = classify_map(omega1, CappedSuccessorRule(3))
    w = bw_fix_by_iteration(omega1, f, Fin(0), OMEGA)
    assert w.point == Fin(3) and w.stage == Ordinal.of(3)


def test_capped_successor_past_the_sample(omega1):
    f = classify_map(omega1, CappedSuccessorRule(20))
    w = bw_fix_by_iteration(omega1, f, Fin(0), OMEGA)
    assert w.point == Fin(20) and w.stage == Ordinal.of(20)


def test_finite_chain(three_chain):
    f = classify_map(three_chain, lambda x: min(x + 1, 2))
    trace = transfinite_iterate(three_chain, f, 0, Ordinal.of(5))
    assert trace.values() == [0, 1, 2, 2, 2, 2]
    assert trace.fixed_stage == Ordinal.of(2)
    scan = injectivity_scan(trace)
    assert scan.stage == Ordinal.of(2)
    assert scan.checked == tuple(Ordinal.of(k) for k in range(3))


def test_identity_is_fixed_immediately(three_chain):
    f = classify_map(three_chain, lambda x: x)
    trace = transfinite_iterate(three_chain, f, 1, OMEGA)
    assert trace.fixed_stage == Ordinal.of(0)
    assert injectivity_scan(trace).stage == Ordinal.of(0)


def test_not_progressive_above_start(three_chain):
    f = classify_map(three_chain, {0: 1, 1: 0, 2: 2})
    with pytest.raises(NotProgressive):
        transfinite_iterate(three_chain, f, 0, Ordinal.of(3))
    # above 2 the map is progressive
    assert transfinite_iterate(three_chain, f, 2, Ordinal.of(3)).fixed_stage == Ordinal.of(0)


def test_unresolvable_limit_in_ordinal_segment():
    S = OrdinalSegment(parse_ordinal("w*2"))
    f = classify_map(S, OrdinalSuccessorRule(parse_ordinal("w*2")))
    with pytest.raises(SupUnresolvable):
        transfinite_iterate(S, f, Ordinal.of(0), OMEGA)


@given(progressive_instance())
def test_finite_trace_matches_plain_iteration(inst):
    P, f, x = inst
    assume(check_chain_complete(P))
    trace = transfinite_iterate(P, f, x, Ordinal.of(P.size()))
    assert trace.monotone
    assert trace.fixed_stage is not None
    assert trace.fixed_stage <= Ordinal.of(P.size())
    w = iterative_fix_oracle(P, f, x)
    assert trace.value(trace.fixed_stage) == w.point
    assert trace.fixed_stage.as_int() == len(w.trail) - 1
    assert injectivity_scan(trace).stage == trace.fixed_stage
