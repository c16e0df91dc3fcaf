"""``fixlab`` command-line entry point."""

from __future__ import annotations

import argparse
import shlex
import string
import sys

from . import jsonio
from .arrow import (
    EV0_CONSTRUCTIONS,
    blowup_poset,
    blowup_sup_maps,
    ev0_logical_check,
    internal_chain_complete,
    verify_blowup_bound,
)
from .caps import current_caps
from .classifier import build_classifier, check_trichotomous_ordinal, classifier_successor_scan
from .dataflow import SOLVERS, solve, transfer_map
from .engines import ENGINES
from .errors import FixlabError, SchemaError
from .iteration import bw_fix_by_iteration, transfinite_iterate
from .jsonio import dumps, element_to_json
from .order import check_chain_complete, check_complete_lattice, check_directed_complete
from .ordinals import fundamental_sequence, ord_compare, parse_ordinal, successor
from .suite import CHECKS, SuiteConfig, run_suite

OUT_FORMATS = ("json", "text", "dot")


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.out == "text" and text is not None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(dumps(payload))


def _verdict_code(passed: bool) -> int:
    return 0 if passed else 1


# -- solve ------------------------------------------------------------------


def cmd_solve(args) -> int:
    caps = current_caps()
    P = jsonio.poset_from_json(jsonio.load(args.poset))
    f = jsonio.map_from_json(P, jsonio.load(args.map))
    x = jsonio.parse_element(P, args.start)
    engine = args.engine or ("transfinite" if args.ordinal else "iterate")
    out = {"engine": engine, "above": element_to_json(x)}
    if engine == "transfinite":
        if not args.ordinal:
            raise SchemaError("the transfinite engine needs --ordinal")
        L = parse_ordinal(args.ordinal)
        trace = transfinite_iterate(P, f, x, L, caps)
        out["stages"] = [[str(y), element_to_json(v)] for y, v in trace.stages]
        result = bw_fix_by_iteration(P, f, x, L, caps)
        if not result:
            out.update(point=None, stabilized=False)
            _emit(args, out, f"no fixed stage up to {L}")
            return 1
        out.update(point=element_to_json(result.point), stage=str(result.stage), stabilized=True)
    else:
        run = ENGINES[engine]
        w = run(P, f, x) if engine in ("tarski", "iterate") else run(P, f, x, caps)
        out["point"] = element_to_json(w.point)
    _emit(args, out, f"{engine}: fixed point {out['point']} above {out['above']}")
    return 0


# -- check ------------------------------------------------------------------


def cmd_check(args) -> int:
    caps = current_caps()
    P = jsonio.poset_from_json(jsonio.load(args.poset))
    if args.out == "dot":
        sys.stdout.write(jsonio.to_dot(P))
        return 0
    cc = check_chain_complete(P, caps)
    dc = check_directed_complete(P, caps)

    def verdict(result):
        if result:
            return {"verdict": "Complete", "method": result.method}
        witness = getattr(result, "chain", None)
        if witness is None:
            witness = result.subset
        return {"verdict": "Failing", "witness": element_to_json(frozenset(witness))}

    out = {
        "poset": P.describe(),
        "chain_complete": verdict(cc),
        "directed_complete": verdict(dc),
        "complete_lattice": check_complete_lattice(P) if P.is_finite else None,
    }
    if args.map:
        f = jsonio.map_from_json(P, jsonio.load(args.map))
        out["map"] = {"progressive": f.progressive, "monotone": f.monotone}
    text = "\n".join(
        f"{k}: {v['verdict']}" for k, v in out.items() if isinstance(v, dict) and "verdict" in v
    )
    _emit(args, out, text)
    return _verdict_code(bool(cc) and bool(dc))


# -- ordinal ------------------------------------------------------------------


def cmd_ordinal(args) -> int:
    if args.action == "classify":
        if args.carrier is None:
            raise SchemaError("classify needs --carrier")
        carrier = string.ascii_lowercase[: args.carrier]
        cl = build_classifier(carrier, current_caps())
        scan = classifier_successor_scan(cl)
        out = {
            "carrier": list(carrier),
            "accepted": len(cl.onwk),
            "representatives": [
                {"length": n, "members": len(cls), "order": _rep_order(rep)}
                for n, cls, rep in zip(cl.lengths, cl.classes, cl.representatives)
            ],
            "successor_scan": [
                {"length": e.length, "successor": "escapes carrier" if e.escapes_carrier else e.target}
                for e in scan
            ],
        }
        _emit(args, out, f"{len(cl.representatives)} representatives, lengths {list(cl.lengths)}")
        return 0
    if not args.values:
        raise SchemaError(f"{args.action} needs at least one notation")
    a = parse_ordinal(args.values[0])
    if args.action == "parse":
        out = {"input": args.values[0], "canonical": str(a), "limit": a.is_limit, "successor": a.is_successor}
        text = str(a)
    elif args.action == "succ":
        out = {"input": str(a), "successor": str(successor(a))}
        text = out["successor"]
    elif args.action == "compare":
        if len(args.values) != 2:
            raise SchemaError("compare needs two notations")
        b = parse_ordinal(args.values[1])
        r = ord_compare(a, b)
        out = {"a": str(a), "b": str(b), "result": r.name}
        text = r.name
    else:
        seq = fundamental_sequence(a)
        if seq is None:
            raise SchemaError(f"{a} is not a limit")
        terms = [str(t) for t in seq.take(args.take)]
        out = {"limit": str(a), "terms": terms}
        text = ", ".join(terms)
    _emit(args, out, text)
    return 0


def _rep_order(rep) -> list[str]:
    # each point of a representative is a class of (member index, element) pairs
    points = check_trichotomous_ordinal(rep).order
    return ["{" + ", ".join(sorted(f"{i}:{x}" for i, x in point)) + "}" for point in points]


# -- arrow ------------------------------------------------------------------


def _sup_payload(found) -> dict:
    return {
        "sup1": [[element_to_json(S), element_to_json(T), element_to_json(v)] for (S, T), v in sorted(
            found.sup1.items(), key=lambda kv: (len(kv[0][0]), jsonio.canon_key(kv[0])))],
        "sup0": [[element_to_json(T), element_to_json(v)] for T, v in sorted(
            found.sup0.items(), key=lambda kv: (len(kv[0]), jsonio.canon_key(kv[0])))],
    }


def cmd_arrow(args) -> int:
    caps = current_caps()
    if args.action == "check-cc":
        if not args.input:
            raise SchemaError("check-cc needs --input")
        P = jsonio.arrow_from_json(jsonio.load(args.input))
        found = internal_chain_complete(P, caps)
        if found:
            out = {"verdict": "Complete", **_sup_payload(found)}
        else:
            out = {"verdict": "Failing", "stage": found.stage, "chain": element_to_json(found.chain)}
        _emit(args, out, out["verdict"])
        return _verdict_code(bool(found))
    if args.action == "ev0":
        names = [args.construction] if args.construction else list(EV0_CONSTRUCTIONS)
        out = {c: ev0_logical_check(c) for c in names}
        _emit(args, out, "\n".join(f"{c}: {'ok' if v else 'FAIL'}" for c, v in out.items()))
        return _verdict_code(all(out.values()))
    if args.n is None:
        raise SchemaError("blowup needs --n")
    P, f = blowup_poset(args.n, caps)
    out = {"n": args.n}
    passed = True
    if args.n + 1 <= caps.arrow_stage:
        found = internal_chain_complete(P, caps)
        s1, s0 = blowup_sup_maps(args.n)
        explicit = bool(found) and all(found.sup1[k] == s1(*k) for k in found.sup1) and all(
            found.sup0[k] == s0(k) for k in found.sup0
        )
        out["chain_complete"] = bool(found)
        out["explicit_sup_maps"] = explicit
        passed = explicit
    if args.family:
        fam = jsonio.family_from_json(jsonio.load(args.family))
        r = verify_blowup_bound(fam, args.n, caps)
        out["bound"] = {
            "result": type(r).__name__,
            "max_length0": r.max_length0,
            "computes_fixed_point": r.computes_fixed_point,
            "sups1": {b: v for b, v in sorted(r.iteration.sups1.items())},
        }
    _emit(args, out, dumps(out))
    return _verdict_code(passed)


# -- dataflow ------------------------------------------------------------------


def cmd_dataflow(args) -> int:
    g = jsonio.graph_from_json(jsonio.load(args.graph))
    state = solve(g, args.engine, current_caps())
    fixed = transfer_map(g)(state.to_element()) == state.to_element()
    out = {"engine": args.engine, "out": state.as_json(), "fixed_point": fixed}
    text = "\n".join(f"{n}: {', '.join(ds) or '-'}" for n, ds in state.as_json().items())
    _emit(args, out, text)
    return _verdict_code(fixed)


# -- suite ------------------------------------------------------------------


def cmd_suite(args) -> int:
    cfg = SuiteConfig(
        max_size=args.max_size,
        seed=args.seed,
        jobs=args.jobs,
        caps=current_caps(),
        only=tuple(args.only or ()),
    )
    parts = ["fixlab suite", f"--max-size {cfg.max_size}", f"--seed {cfg.seed}"]
    parts += [f"--only {shlex.quote(o)}" for o in cfg.only]
    report = run_suite(cfg, " ".join(parts))
    if args.out == "text":
        sys.stdout.write(report.as_text())
    else:
        sys.stdout.write(dumps(report.as_json()))
    if args.timing:
        for c in report.checks:
            print(f"{c.name}: {c.seconds:.2f}s", file=sys.stderr)
    return _verdict_code(report.passed)


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fixlab",
        description="Fixed-point engines for chain-complete posets, with brute-force cross-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def out_flag(p, choices=("json", "text")):
        p.add_argument("--out", choices=choices, default="json", help="output format")

    p = sub.add_parser("solve", help="find a fixed point above a start element")
    p.add_argument("--engine", choices=sorted(ENGINES) + ["transfinite"])
    p.add_argument("--poset", required=True, help="poset JSON file")
    p.add_argument("--map", required=True, help="endomap JSON file")
    p.add_argument("--start", required=True, help="start element")
    p.add_argument("--ordinal", help="iterate transfinitely up to this notation, e.g. 'w+1'")
    out_flag(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="completeness verdicts for a poset")
    p.add_argument("--poset", required=True)
    p.add_argument("--map", help="also classify this endomap")
    out_flag(p, OUT_FORMATS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("ordinal", help="notations below epsilon_0 and the finite classifier")
    p.add_argument("action", choices=("parse", "succ", "compare", "fs", "classify"))
    p.add_argument("values", nargs="*", help="notations, e.g. 'w^2+1'")
    p.add_argument("--take", type=int, default=5, help="terms of a fundamental sequence")
    p.add_argument("--carrier", type=int, help="carrier size for classify")
    out_flag(p)
    p.set_defaults(func=cmd_ordinal)

    p = sub.add_parser("arrow", help="chain-completeness and ordinals in the arrow topos")
    p.add_argument("action", choices=("check-cc", "blowup", "ev0"))
    p.add_argument("--input", help="arrow poset JSON file")
    p.add_argument("--n", type=int, help="blow-up index")
    p.add_argument("--family", help="ordinal family JSON file")
    p.add_argument("--construction", choices=EV0_CONSTRUCTIONS)
    out_flag(p)
    p.set_defaults(func=cmd_arrow)

    p = sub.add_parser("dataflow", help="solve a forward may-analysis")
    p.add_argument("--graph", required=True)
    p.add_argument("--engine", choices=sorted(SOLVERS), default="tarski")
    out_flag(p)
    p.set_defaults(func=cmd_dataflow)

    p = sub.add_parser("suite", help="run the cross-engine and oracle suite")
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--only", action="append", choices=sorted(CHECKS), help="run only this check (repeatable)")
    p.add_argument("--timing", action="store_true", help="print per-check timing to stderr")
    out_flag(p)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FixlabError as exc:
        print(f"fixlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
