"""The cross-engine and oracle suite behind ``fixlab suite``.

Every check is a pure function of the configuration.  Checks may run in
worker processes; the report is assembled in a fixed order so that the
same configuration always yields the same bytes.  Timing is kept out of
the report and only printed on request.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import oracles
from .arrow import (
    blowup_poset,
    blowup_sup_maps,
    direct_image,
    enumerate_families,
    ev0_logical_check,
    EV0_CONSTRUCTIONS,
    FamilyTooShort,
    forced_chain_object,
    internal_chain_complete,
    internal_chain_object,
    verify_blowup_bound,
)
from .caps import Caps, current_caps
from .classifier import (
    build_classifier,
    check_trichotomous_ordinal,
    classifier_successor_scan,
    rigidity_check,
)
from .dataflow import solve, transfer_map
from .engines import (
    PosetFamily,
    aggregate_family,
    build_fpo,
    dacar_reduction,
    iterative_fix_oracle,
    kt_via_bw,
    pataraia_internals,
    pataraia_fix,
    tarski_lfp,
)
from .errors import FixlabError, SchemaError
from .generate import LABELED_POSET_COUNTS, enumerate_posets, monotone_maps, progressive_maps, random_flow_graph, random_ordinal
from .iteration import bw_fix_by_iteration, injectivity_scan, transfinite_iterate
from .jsonio import element_to_json, poset_to_json
from .order import (
    INF,
    Fin,
    OmegaPlusOne,
    SuccessorRule,
    check_chain_complete,
    check_complete_lattice,
    check_directed_complete,
    classify_map,
)
from .ordinals import OMEGA, Ordinal, ord_compare, Ordering, parse_ordinal, format_ordinal, successor


@dataclass(frozen=True)
class SuiteConfig:
    max_size: int = 4
    seed: int = 7
    jobs: int = 1
    caps: Caps = field(default_factory=Caps)
    only: tuple = ()

    def __post_init__(self):
        if self.max_size < 0 or self.max_size > 5:
            raise SchemaError("max size must be between 0 and 5")
        if self.jobs <= 0:
            raise SchemaError("jobs must be positive")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict
    witness: object = None
    reproduce: str = ""
    seconds: float = field(default=0.0, compare=False)

    def as_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if not self.passed:
            out["witness"] = self.witness
            out["reproduce"] = self.reproduce
        return out


@dataclass
class RunReport:
    command: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_json(self) -> dict:
        return {
            "command": self.command,
            "passed": self.passed,
            "checks": [c.as_json() for c in self.checks],
        }

    def as_text(self) -> str:
        lines = [f"$ {self.command}"]
        for c in self.checks:
            counts = ", ".join(f"{k}={v}" for k, v in sorted(c.detail.items()))
            lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  {counts}")
            if not c.passed:
                lines.append(f"      witness: {c.witness}")
                lines.append(f"      reproduce: {c.reproduce}")
        lines.append("all checks passed" if self.passed else "some checks FAILED")
        return "\n".join(lines) + "\n"


class _Failure(Exception):
    def __init__(self, witness):
        super().__init__(str(witness))
        self.witness = witness


def _expect(condition: bool, witness) -> None:
    if not condition:
        raise _Failure(witness)


def _posets(cfg: SuiteConfig, limit: int | None = None):
    top = cfg.max_size if limit is None else min(cfg.max_size, limit)
    for n in range(top + 1):
        yield from enumerate_posets(n, cfg.caps)


# -- checks -----------------------------------------------------------------


def check_poset_counts(cfg: SuiteConfig) -> dict:
    counts = [sum(1 for _ in enumerate_posets(n, cfg.caps)) for n in range(cfg.max_size + 1)]
    _expect(counts == list(LABELED_POSET_COUNTS[: len(counts)]), {"counts": counts})
    return {"sizes": len(counts), "posets": sum(counts)}


def check_completeness(cfg: SuiteConfig) -> dict:
    n = 0
    for P in _posets(cfg):
        cc, dc = bool(check_chain_complete(P, cfg.caps)), bool(check_directed_complete(P, cfg.caps))
        _expect(cc == oracles.chain_complete(P), {"poset": poset_to_json(P), "chain_complete": cc})
        _expect(dc == oracles.directed_complete(P), {"poset": poset_to_json(P), "directed_complete": dc})
        n += 1
    return {"posets": n}


def _witness(P, f, x) -> dict:
    return {
        "poset": poset_to_json(P),
        "map": {str(element_to_json(k)): element_to_json(v) for k, v in f.table.items()},
        "start": element_to_json(x),
    }


def check_progressive_engines(cfg: SuiteConfig) -> dict:
    n = 0
    for P in _posets(cfg):
        if not check_chain_complete(P, cfg.caps):
            continue
        for f in progressive_maps(P, cfg.caps):
            for x in P.elements():
                try:
                    dacar_reduction(P, f, x, cfg.caps)
                    got = bw_fix_by_iteration(P, f, x, Ordinal.of(P.size()), cfg.caps)
                    iterative_fix_oracle(P, f, x)
                except FixlabError as exc:
                    raise _Failure({**_witness(P, f, x), "error": str(exc)}) from None
                _expect(bool(got), _witness(P, f, x))
                n += 1
    return {"instances": n}


def check_monotone_engines(cfg: SuiteConfig) -> dict:
    n = lattice = 0
    for P in _posets(cfg):
        if not check_chain_complete(P, cfg.caps):
            continue
        is_lattice = check_complete_lattice(P)
        for f in monotone_maps(P):
            for x in P.elements():
                if not P.leq(x, f(x)):
                    continue
                try:
                    kt = kt_via_bw(P, f, x, cfg.caps)
                    if is_lattice:
                        least = tarski_lfp(P, f, x)
                        _expect(P.leq(least.point, kt.point), _witness(P, f, x))
                        lattice += 1
                except FixlabError as exc:
                    raise _Failure({**_witness(P, f, x), "error": str(exc)}) from None
                n += 1
    return {"instances": n, "lattice_instances": lattice}


def check_pataraia(cfg: SuiteConfig) -> dict:
    n = 0
    for P in _posets(cfg, 4):
        if not check_directed_complete(P, cfg.caps):
            continue
        for f in monotone_maps(P):
            q = sum(1 for y in P.elements() if P.leq(y, f(y)))
            if q > 4:
                continue
            run = pataraia_internals(P, f, cfg.caps)
            _expect(run.directed and run.absorbs, _witness(P, f, None))
            _expect(run.contains_identity and run.contains_restriction, _witness(P, f, None))
            for x in P.elements():
                if P.leq(x, f(x)):
                    pataraia_fix(P, f, x, cfg.caps)
                    iterative_fix_oracle(P, f, x)
                    n += 1
    return {"instances": n}


def check_fixed_point_operators(cfg: SuiteConfig) -> dict:
    n = 0
    for P in _posets(cfg, 3):
        if not check_chain_complete(P, cfg.caps):
            continue
        op = build_fpo(P, cfg.caps)
        for f, p in op.entries():
            _expect(f(p) == p, {"poset": poset_to_json(P), "entry": element_to_json(p)})
        n += 1
    families = 0
    small = [P for P in _posets(cfg, 2) if check_chain_complete(P, cfg.caps)]
    for k in (1, 2):
        for members in _tuples(small, k):
            agg = aggregate_family(PosetFamily(members), cfg.caps)
            _expect(agg.map.progressive, {"family": [poset_to_json(P) for P in members]})
            families += 1
    return {"posets": n, "families": families}


def _tuples(items, k):
    if k == 0:
        yield ()
        return
    for i, x in enumerate(items):
        for rest in _tuples(items[i:], k - 1):
            yield (x,) + rest


def check_transfinite(cfg: SuiteConfig) -> dict:
    P = OmegaPlusOne()
    f = classify_map(P, SuccessorRule())
    trace = transfinite_iterate(P, f, Fin(0), OMEGA, cfg.caps)
    _expect(trace.fixed_stage == OMEGA and trace.value(OMEGA) is INF, {"fixed_stage": str(trace.fixed_stage)})
    _expect(trace.monotone, "trace is not monotone")
    scan = injectivity_scan(trace)
    _expect(scan.stage == OMEGA, {"injective_up_to": str(scan.stage)})
    for k in range(8):
        _expect(not bw_fix_by_iteration(P, f, Fin(0), Ordinal.of(k), cfg.caps), {"stabilized_at": k})
    return {"stages": len(trace.stages)}


def check_ordinal_laws(cfg: SuiteConfig) -> dict:
    rng = random.Random(cfg.seed)
    n = 1000
    for _ in range(n):
        a, b, c = (random_ordinal(rng) for _ in range(3))
        ab, ba = ord_compare(a, b), ord_compare(b, a)
        _expect(ab.value == -ba.value, {"a": str(a), "b": str(b)})
        _expect(ord_compare(a, a) is Ordering.EQ, {"a": str(a)})
        if ab is Ordering.LT and ord_compare(b, c) is Ordering.LT:
            _expect(ord_compare(a, c) is Ordering.LT, {"a": str(a), "b": str(b), "c": str(c)})
        _expect(ord_compare(successor(a), a) is Ordering.GT, {"a": str(a)})
        _expect(parse_ordinal(format_ordinal(a)) == a, {"a": str(a)})
    return {"samples": n}


def check_classifier(cfg: SuiteConfig) -> dict:
    cl = build_classifier("ab", cfg.caps)
    _expect(len(cl.representatives) == 3, {"classes": len(cl.representatives)})
    scan = classifier_successor_scan(cl)
    _expect([e.target for e in scan] == [1, 2, None], {"scan": [e.target for e in scan]})
    _expect(all(rigidity_check(R) for R in cl.onwk), "non-rigid accepted order")
    return {"accepted": len(cl.onwk), "classes": len(cl.representatives)}


def check_blowup(cfg: SuiteConfig) -> dict:
    families = fixed = 0
    for n in range(4):
        P, _ = blowup_poset(n, cfg.caps)
        found = internal_chain_complete(P, cfg.caps)
        _expect(bool(found), {"n": n})
        s1, s0 = blowup_sup_maps(n)
        _expect(all(found.sup1[k] == s1(*k) for k in found.sup1), {"n": n, "stage": 1})
        _expect(all(found.sup0[k] == s0(k) for k in found.sup0), {"n": n, "stage": 0})
        _expect(internal_chain_object(P) == forced_chain_object(P), {"n": n, "chain_object": "mismatch"})
        for fam in enumerate_families(2, 3, 1):
            r = verify_blowup_bound(fam, n, cfg.caps)
            short = fam.max_length0 <= n
            _expect(isinstance(r, FamilyTooShort) == short, {"n": n, "lengths": dict(fam.lengths0)})
            if r.computes_fixed_point and not short:
                fixed += 1
            families += 1
    _expect(fixed > 0, "no family computed the fixed point")
    return {"families": families, "computing": fixed}


def check_chain_completeness_drops(cfg: SuiteConfig) -> dict:
    n = 0
    for P in _posets(cfg, 4):
        if check_chain_complete(P, cfg.caps):
            _expect(bool(internal_chain_complete(direct_image(P), cfg.caps)), {"poset": poset_to_json(P)})
            n += 1
    for c in EV0_CONSTRUCTIONS:
        _expect(ev0_logical_check(c), {"construction": c})
    return {"posets": n, "constructions": len(EV0_CONSTRUCTIONS)}


def check_dataflow(cfg: SuiteConfig) -> dict:
    rng = random.Random(cfg.seed)
    n = 60
    for _ in range(n):
        g = random_flow_graph(rng)
        f = transfer_map(g)
        results = {e: solve(g, e, cfg.caps) for e in ("tarski", "iterate", "kt")}
        _expect(results["tarski"] == results["iterate"], {"graph": g.nodes, "edges": g.edges})
        for e, s in results.items():
            _expect(f(s.to_element()) == s.to_element(), {"engine": e, "graph": g.nodes})
    return {"graphs": n}


CHECKS: dict[str, Callable[[SuiteConfig], dict]] = {
    "poset-counts": check_poset_counts,
    "completeness-oracle": check_completeness,
    "progressive-engines": check_progressive_engines,
    "monotone-engines": check_monotone_engines,
    "pataraia": check_pataraia,
    "fixed-point-operators": check_fixed_point_operators,
    "transfinite-iteration": check_transfinite,
    "ordinal-laws": check_ordinal_laws,
    "classifier": check_classifier,
    "blowup": check_blowup,
    "chain-completeness-drops": check_chain_completeness_drops,
    "dataflow": check_dataflow,
}


def reproduce_command(name: str, cfg: SuiteConfig) -> str:
    return f"fixlab suite --only {name} --max-size {cfg.max_size} --seed {cfg.seed}"


def run_check(name: str, cfg: SuiteConfig) -> CheckResult:
    start = time.perf_counter()
    try:
        detail = CHECKS[name](cfg)
        result = CheckResult(name, True, detail)
    except _Failure as exc:
        result = CheckResult(name, False, {}, exc.witness, reproduce_command(name, cfg))
    except FixlabError as exc:
        result = CheckResult(name, False, {}, f"{type(exc).__name__}: {exc}", reproduce_command(name, cfg))
    result.seconds = time.perf_counter() - start
    return result


def run_suite(cfg: SuiteConfig, command: str = "") -> RunReport:
    names = [n for n in CHECKS if not cfg.only or n in cfg.only]
    unknown = set(cfg.only) - set(CHECKS)
    if unknown:
        raise SchemaError(f"unknown checks: {', '.join(sorted(unknown))}")
    if cfg.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(run_check, names, [cfg] * len(names)))
    else:
        results = [run_check(n, cfg) for n in names]
    return RunReport(command or f"fixlab suite --max-size {cfg.max_size} --seed {cfg.seed}", results)


__all__ = ["CHECKS", "CheckResult", "RunReport", "SuiteConfig", "run_check", "run_suite"]
