"""Transfinite iteration of a progressive map along ordinal notations.

``f~(y)`` is the supremum of ``f(f~(z))`` over ``z < y``, computed inside
the up-set of the start point so the empty supremum is the start.  For
a progressive map this gives

* ``f~(0) = x``
* ``f~(z + 1) = sup{f~(z), f(f~(z))}``
* ``f~(λ)`` = supremum of ``f~`` along the fundamental sequence of ``λ``
  (a cofinal subchain of the monotone trace, so the supremum agrees).

Limits of the form ``β + ω`` are resolved through the poset's symbolic
supremum of the orbit of ``f`` from ``f~(β)``.  Higher limits are
resolved only once the trace has reached a fixed stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .caps import Caps, current_caps
from .errors import InvariantViolation, NotProgressive, SupUnresolvable
from .order import EndoMap, FixedPointWitness, Orbit, Poset, up_set
from .ordinals import ONE, ZERO, Ordinal, fundamental_sequence

# finite stages recorded below each limit before the symbolic sup takes over
LIMIT_SAMPLE = 8


def _split(y: Ordinal) -> tuple[Ordinal, int]:
    """``y = base + k`` with ``base`` zero or a limit."""
    if y.terms and y.terms[-1][0].is_zero:
        return Ordinal.unchecked(y.terms[:-1]), y.terms[-1][1]
    return y, 0


def _plus(base: Ordinal, k: int) -> Ordinal:
    return base if k == 0 else Ordinal.unchecked(base.terms + ((ZERO, k),))


def _drop_omega(limit: Ordinal) -> Ordinal:
    """``β`` with ``limit = β + ω``; only valid when the last exponent is 1."""
    *rest, (exp, coeff) = limit.terms
    if coeff > 1:
        rest.append((exp, coeff - 1))
    return Ordinal.unchecked(tuple(rest))


class _Iterator:
    def __init__(self, U: Poset, f: EndoMap, caps: Caps):
        self.U, self.f, self.caps = U, f, caps
        self.memo: dict[Ordinal, object] = {}
        self.first_fixed: Ordinal | None = None

    def record(self, y: Ordinal, v) -> None:
        if y in self.memo:
            return
        self.memo[y] = v
        if self.f(v) == v and (self.first_fixed is None or y < self.first_fixed):
            self.first_fixed = y

    def value(self, y: Ordinal):
        if y in self.memo:
            return self.memo[y]
        if self.first_fixed is not None and self.first_fixed < y:
            return self.memo[self.first_fixed]
        base, k = _split(y)
        v = self.U.sup_finite(()) if base.is_zero else self.limit_value(base)
        self.record(base, v)
        for i in range(1, k + 1):
            stage = _plus(base, i)
            if stage in self.memo:
                v = self.memo[stage]
                continue
            v = self.U.sup_finite([v, self.f(v)])
            self.record(stage, v)
        return v

    def limit_value(self, lam: Ordinal):
        seq = fundamental_sequence(lam)
        last_exp = lam.terms[-1][0]
        if last_exp == ONE:
            beta = _drop_omega(lam)
            start = self.value(beta)
            v = start
            for i in range(1, LIMIT_SAMPLE + 1):
                v = self.value(_plus(beta, i))
                if self.first_fixed is not None and self.first_fixed < lam:
                    return self.memo[self.first_fixed]
            top = self.U.sup(Orbit(self.f, start))
            if top is None:
                raise SupUnresolvable(f"no supremum at stage {lam}")
            if not self.U.leq(v, top):
                raise InvariantViolation(f"limit value at {lam} is below an earlier stage")
            # if the orbit attains its supremum, that stage is the first fixed one
            for i in range(LIMIT_SAMPLE + 1, self.caps.iteration_horizon + 1):
                if v == top:
                    self.record(_plus(beta, i - 1), v)
                    return top
                v = self.f(v)
            return top
        for n in range(LIMIT_SAMPLE + 1):
            self.value(seq[n])
            if self.first_fixed is not None and self.first_fixed < lam:
                return self.memo[self.first_fixed]
        raise SupUnresolvable(f"cannot resolve the supremum at limit stage {lam}")


@dataclass(frozen=True)
class IterationTrace:
    """Recorded stages of ``f~`` up to ``limit``.

    ``stages`` holds every stage the computation visited, in increasing
    order.  Between recorded stages the trace is determined by the
    recursion; after ``fixed_stage`` it is constant.
    """

    poset: Poset  # the up-set the iteration runs in
    map: EndoMap
    start: object
    limit: Ordinal
    stages: tuple  # ((Ordinal, value), ...)
    fixed_stage: Ordinal | None
    monotone: bool
    _values: dict = field(default_factory=dict, compare=False, repr=False)

    def value(self, y: Ordinal):
        if y > self.limit:
            raise ValueError(f"stage {y} is beyond the trace limit {self.limit}")
        if y in self._values:
            return self._values[y]
        if self.fixed_stage is not None and self.fixed_stage <= y:
            return self._values[self.fixed_stage]
        it = _Iterator(self.poset, self.map, current_caps())
        it.memo.update(self._values)
        return it.value(y)

    def values(self) -> list:
        return [v for _, v in self.stages]


def transfinite_iterate(P: Poset, f: EndoMap, x, L: Ordinal, caps: Caps | None = None) -> IterationTrace:
    caps = caps or current_caps()
    U = up_set(P, x)
    if U.is_finite:
        bad = [y for y in U.elements() if not U.leq(y, f(y))]
        if bad:
            raise NotProgressive(f"f is not progressive above {x!r}: fails at {bad[0]!r}")
    elif not f.progressive:
        raise NotProgressive("symbolic map is not certified progressive")
    it = _Iterator(U, f, caps)
    it.value(L)
    stages = tuple(sorted(((y, v) for y, v in it.memo.items() if y <= L), key=lambda p: p[0]))
    fixed = it.first_fixed if it.first_fixed is not None and it.first_fixed <= L else None
    monotone = all(U.leq(a, b) for (_, a), (_, b) in zip(stages, stages[1:]))
    return IterationTrace(U, f, x, L, stages, fixed, monotone, dict(stages))


@dataclass(frozen=True)
class NotStabilized:
    limit: Ordinal

    def __bool__(self) -> bool:
        return False


def bw_fix_by_iteration(P: Poset, f: EndoMap, x, L: Ordinal, caps: Caps | None = None):
    """The value at the least stage fixed by ``f``, or ``NotStabilized(L)``."""
    trace = transfinite_iterate(P, f, x, L, caps)
    if trace.fixed_stage is None:
        return NotStabilized(L)
    return FixedPointWitness(
        P,
        f,
        trace.value(trace.fixed_stage),
        x,
        engine="transfinite",
        stage=trace.fixed_stage,
        trail=tuple(trace.values()),
    )


@dataclass(frozen=True)
class InjectiveUpTo:
    """``f~`` is injective on the recorded stages ``<= stage`` (the first fixed stage, or the limit)."""

    stage: Ordinal
    checked: tuple


def injectivity_scan(trace: IterationTrace) -> InjectiveUpTo:
    bound = trace.fixed_stage if trace.fixed_stage is not None else trace.limit
    checked = [(y, v) for y, v in trace.stages if y <= bound]
    seen: dict = {}
    for y, v in checked:
        if v in seen:
            # a collision forces a fixed stage at or before y
            raise InvariantViolation(f"stages {seen[v]} and {y} collide before the first fixed stage")
        seen[v] = y
    return InjectiveUpTo(bound, tuple(y for y, _ in checked))


__all__ = [
    "InjectiveUpTo",
    "IterationTrace",
    "NotStabilized",
    "bw_fix_by_iteration",
    "injectivity_scan",
    "transfinite_iterate",
]
