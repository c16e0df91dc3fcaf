from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from fixlab.dataflow import SOLVERS, AnalysisState, FlowGraph, solve, transfer_map
from fixlab.errors import MalformedGraph, SizeLimit
from fixlab.generate import random_flow_graph


@pytest.fixture
def straight():
    """a -> b -> c; a defines d1, b redefines it as d2."""
    return FlowGraph(
        ["a", "b", "c"],
        [("a", "b"), ("b", "c")],
        ["d1", "d2"],
        {"a": ["d1"], "b": ["d2"]},
        {"b": ["d1"]},
    )


@pytest.fixture
def loop():
    return FlowGraph(["n1", "n2"], [("n1", "n2"), ("n2", "n1")], ["d1", "d2"], {"n1": ["d1"], "n2": ["d2"]}, {})


def test_straight_line(straight):
    state = solve(straight)
    assert state.assignment == {"a": {"d1"}, "b": {"d2"}, "c": {"d2"}}


def test_loop_propagates_both_facts(loop):
    for engine in ("tarski", "iterate", "kt"):
        assert solve(loop, engine).as_json() == {"n1": ["d1", "d2"], "n2": ["d1", "d2"]}


def test_pataraia_on_small_graph():
    g = FlowGraph(["n"], [("n", "n")], ["d1", "d2"], {"n": ["d1"]}, {})
    # the self-loop keeps any fact alive, so the top of M reaches the largest fixed point
    assert solve(g, "pataraia").assignment == {"n": {"d1", "d2"}}
    assert solve(g, "tarski").assignment == {"n": {"d1"}}


def test_pataraia_gate(straight):
    with pytest.raises(SizeLimit):
        solve(straight, "pataraia")


def test_unknown_engine(straight):
    with pytest.raises(ValueError):
        solve(straight, "worklist")


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(nodes=["a"], edges=[("a", "z")], facts=[], gen={}, kill={}),
        dict(nodes=["a"], edges=[], facts=["d"], gen={"z": ["d"]}, kill={}),
        dict(nodes=["a"], edges=[], facts=["d"], gen={"a": ["e"]}, kill={}),
        dict(nodes=["a"], edges=[], facts=["d"], gen={"a": ["d"]}, kill={"a": ["d"]}),
    ],
)
def test_malformed(kwargs):
    with pytest.raises(MalformedGraph):
        FlowGraph(**kwargs)


def test_state_round_trip(straight):
    state = solve(straight)
    assert AnalysisState.from_element(straight, state.to_element()) == state


def test_transfer_is_monotone_when_checked(loop):
    f = transfer_map(loop)
    assert f.monotone and f.table is not None


def test_large_graph_uses_rule():
    g = FlowGraph(range(5), [(i, i + 1) for i in range(4)], ["x", "y", "z"], {0: ["x"]}, {})
    f = transfer_map(g)
    assert f.table is None and f.monotone
    assert solve(g).assignment[4] == {"x"}


def test_solver_registry():
    assert set(SOLVERS) == {"tarski", "pataraia", "kt", "iterate"}


@given(st.integers(0, 2**32 - 1))
def test_random_graphs_agree(seed):
    g = random_flow_graph(random.Random(seed))
    f = transfer_map(g)
    least = solve(g, "tarski")
    assert solve(g, "iterate") == least
    kt = solve(g, "kt")
    assert f(kt.to_element()) == kt.to_element()
    assert least.to_element() <= kt.to_element()
