"""JSON reading and writing for posets, maps, arrow posets, ordinal families and flow graphs.

Formats::

    poset      {"elements": [...], "leq": [[a, b], ...]}     (closed reflexively/transitively)
               {"kind": "chain", "n": 3}
               {"kind": "omega_plus_one"}
               {"kind": "segment", "beta": "w+1"}
               {"kind": "powerset", "universe": [...]}
    map        {"table": {"a": "b", ...}}
               {"rule": "successor" | "identity" | "capped_successor" | "ordinal_successor",
                "cap": 3, "beta": "w"}
    arrow      {"p1": <poset>, "p0": <poset>, "restrict": {...}}
    family     {"b1": [...], "b0": [...], "restrict": {...}, "lengths0": {...},
                "fibres": {"b": {"l1": 2, "embed": [0, 2]}}}
    flow graph {"nodes": [...], "edges": [[a, b]], "facts": [...], "gen": {...}, "kill": {...}}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .arrow import ArrowOrdinal, ArrowPoset, OrdinalFamily
from .dataflow import FlowGraph
from .errors import FixlabError, NonCanonical, NotAPartialOrder, PartialFunction, SchemaError
from .order import (
    INF,
    RULES,
    EndoMap,
    Fin,
    FinitePoset,
    OmegaPlusOne,
    OrdinalSegment,
    Poset,
    PowersetLattice,
    canon_key,
    classify_map,
)
from .ordinals import parse_ordinal


def load(source: str | Path | dict) -> Any:
    """A dict is passed through; anything else is read as a JSON file path."""
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise SchemaError(f"{source}: {exc.strerror}") from None


def _require(data, key: str, kind=None):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"missing field {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"field {key!r} must be a {kind.__name__}")
    return value


def _atom(x):
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise SchemaError(f"element ids must be strings or integers, got {x!r}")


# -- posets -----------------------------------------------------------------


def poset_from_json(data: dict) -> Poset:
    if not isinstance(data, dict):
        raise SchemaError("a poset must be a JSON object")
    kind = data.get("kind", "finite")
    try:
        if kind == "finite":
            elements = [_atom(x) for x in _require(data, "elements", list)]
            pairs = _require(data, "leq", list) if "leq" in data else []
            if any(not isinstance(p, list) or len(p) != 2 for p in pairs):
                raise SchemaError("leq must be a list of [a, b] pairs")
            known = set(elements)
            for a, b in pairs:
                if a not in known or b not in known:
                    raise SchemaError(f"leq pair {[a, b]!r} mentions an unknown element")
            return FinitePoset(elements, [tuple(p) for p in pairs], closure=True, name=data.get("name", ""))
        if kind == "chain":
            n = _require(data, "n", int)
            return FinitePoset(range(n), [(i, i + 1) for i in range(n - 1)], closure=True, name=f"chain({n})")
        if kind == "omega_plus_one":
            return OmegaPlusOne()
        if kind == "segment":
            return OrdinalSegment(parse_ordinal(_require(data, "beta", str)))
        if kind == "powerset":
            return PowersetLattice([_atom(x) for x in _require(data, "universe", list)])
    except (NotAPartialOrder, NonCanonical) as exc:
        raise SchemaError(str(exc)) from None
    raise SchemaError(f"unknown poset kind {kind!r}")


def poset_to_json(P: Poset) -> dict:
    if isinstance(P, OmegaPlusOne):
        return {"kind": "omega_plus_one"}
    if isinstance(P, OrdinalSegment):
        return {"kind": "segment", "beta": str(P.beta)}
    if isinstance(P, PowersetLattice):
        return {"kind": "powerset", "universe": list(P.universe)}
    return {
        "elements": [element_to_json(x) for x in P.elements()],
        "leq": [[element_to_json(a), element_to_json(b)] for a, b in P.covers()],
    }


def parse_element(P: Poset, text):
    """Resolve a JSON value or command-line string to an element of ``P``."""
    if isinstance(P, OmegaPlusOne):
        s = str(text).strip()
        if s.lower() in ("inf", "w", "ω", "omega"):
            return INF
        if s.startswith("Fin(") and s.endswith(")"):
            s = s[4:-1]
        if s.isdigit():
            return Fin(int(s))
        raise SchemaError(f"{text!r} is not an element of omega+1")
    if isinstance(P, OrdinalSegment):
        try:
            return parse_ordinal(str(text))
        except NonCanonical as exc:
            raise SchemaError(str(exc)) from None
    if isinstance(P, PowersetLattice):
        members = text if isinstance(text, list) else json.loads(text)
        by_text = {str(u): u for u in P.universe}
        try:
            return frozenset(by_text[str(m)] for m in members)
        except KeyError as exc:
            raise SchemaError(f"{exc.args[0]!r} is not in the universe") from None
    if text in P:
        return text
    matches = [x for x in P.elements() if str(x) == str(text)]
    if len(matches) != 1:
        raise SchemaError(f"{text!r} is not an element of {P.describe()}")
    return matches[0]


def element_to_json(x):
    if isinstance(x, Fin):
        return x.n
    if x is INF:
        return "inf"
    if isinstance(x, (frozenset, set)):
        return [element_to_json(y) for y in sorted(x, key=canon_key)]
    if isinstance(x, tuple):
        return [element_to_json(y) for y in x]
    if isinstance(x, (str, int)):
        return x
    return str(x)


# -- maps ---------------------------------------------------------------------


def map_from_json(P: Poset, data: dict) -> EndoMap:
    if not isinstance(data, dict):
        raise SchemaError("a map must be a JSON object")
    if "rule" in data:
        name = data["rule"]
        if name not in RULES:
            raise SchemaError(f"unknown rule {name!r}; choose from {', '.join(RULES)}")
        if name == "capped_successor":
            rule = RULES[name](_require(data, "cap", int))
        elif name == "ordinal_successor":
            rule = RULES[name](parse_ordinal(_require(data, "beta", str)))
        else:
            rule = RULES[name]()
        return classify_map(P, rule)
    table = _require(data, "table", dict)
    if not P.is_finite:
        raise SchemaError("tables are only accepted on finite posets")
    mapping = {parse_element(P, k): parse_element(P, v) for k, v in table.items()}
    try:
        return classify_map(P, mapping, name=data.get("name", ""))
    except PartialFunction as exc:
        raise SchemaError(str(exc)) from None


def map_to_json(f: EndoMap) -> dict:
    if f.table is None:
        return {"rule": f.name}
    return {"table": {str(element_to_json(k)): element_to_json(v) for k, v in f.table.items()}}


# -- arrow posets and families ------------------------------------------------------


def arrow_from_json(data: dict) -> ArrowPoset:
    p1 = poset_from_json(_require(data, "p1", dict))
    p0 = poset_from_json(_require(data, "p0", dict))
    if not (isinstance(p1, FinitePoset) and isinstance(p0, FinitePoset)):
        raise SchemaError("arrow posets need finite stages")
    raw = _require(data, "restrict", dict)
    try:
        restrict = {parse_element(p1, k): parse_element(p0, v) for k, v in raw.items()}
        return ArrowPoset(p1, p0, restrict)
    except (ValueError, NotAPartialOrder) as exc:
        raise SchemaError(str(exc)) from None


def arrow_to_json(P: ArrowPoset) -> dict:
    return {
        "p1": poset_to_json(P.p1),
        "p0": poset_to_json(P.p0),
        "restrict": {str(element_to_json(k)): element_to_json(v) for k, v in P.restrict.items()},
    }


def family_from_json(data: dict) -> OrdinalFamily:
    try:
        b1 = [str(b) for b in _require(data, "b1", list)]
        b0 = [str(b) for b in _require(data, "b0", list)]
        restrict = {str(k): str(v) for k, v in _require(data, "restrict", dict).items()}
        lengths0 = {str(k): int(v) for k, v in _require(data, "lengths0", dict).items()}
        fibres = {}
        for b, entry in _require(data, "fibres", dict).items():
            target = restrict.get(str(b))
            embed = _require(entry, "embed", list)
            l1 = entry.get("l1", len(embed))
            fibres[str(b)] = ArrowOrdinal(l1, lengths0.get(target, 0), tuple(embed))
        return OrdinalFamily(tuple(b1), tuple(b0), restrict, lengths0, fibres)
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, FixlabError):
            raise
        raise SchemaError(f"malformed family: {exc}") from None


def family_to_json(F: OrdinalFamily) -> dict:
    return {
        "b1": list(F.b1),
        "b0": list(F.b0),
        "restrict": dict(F.restrict),
        "lengths0": dict(F.lengths0),
        "fibres": {b: {"l1": L.l1, "embed": list(L.embed)} for b, L in F.fibres.items()},
    }


# -- flow graphs -----------------------------------------------------------------


def graph_from_json(data: dict) -> FlowGraph:
    nodes = _require(data, "nodes", list)
    edges = data.get("edges", [])
    gen = data.get("gen", {})
    kill = data.get("kill", {})
    if not all(isinstance(t, dict) for t in (gen, kill)):
        raise SchemaError("gen and kill must map nodes to lists of facts")
    facts = data.get("facts")
    if facts is None:
        facts = sorted({d for t in (gen, kill) for ds in t.values() for d in ds}, key=canon_key)
    if any(not isinstance(e, list) or len(e) != 2 for e in edges):
        raise SchemaError("edges must be a list of [a, b] pairs")
    return FlowGraph(nodes, [tuple(e) for e in edges], facts, gen, kill)


def graph_to_json(g: FlowGraph) -> dict:
    return {
        "nodes": list(g.nodes),
        "edges": [list(e) for e in g.edges],
        "facts": list(g.facts),
        "gen": {n: sorted(g.gen[n], key=canon_key) for n in g.nodes},
        "kill": {n: sorted(g.kill[n], key=canon_key) for n in g.nodes},
    }


# -- DOT ------------------------------------------------------------------------


def to_dot(P: Poset, name: str = "poset") -> str:
    """Hasse diagram with larger elements drawn on top."""
    if not P.is_finite:
        raise SchemaError(f"{P.describe()} is infinite; no Hasse diagram")
    ids = {x: f"n{i}" for i, x in enumerate(P.elements())}
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for x, i in ids.items():
        label = json.dumps(element_to_json(x), ensure_ascii=False).replace('"', '\\"')
        lines.append(f'  {i} [label="{label}"];')
    for a, b in P.covers():
        lines.append(f"  {ids[a]} -> {ids[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


__all__ = [
    "arrow_from_json", "arrow_to_json", "dumps", "element_to_json", "family_from_json",
    "family_to_json", "graph_from_json", "graph_to_json", "load", "map_from_json", "map_to_json",
    "parse_element", "poset_from_json", "poset_to_json", "to_dot",
]
