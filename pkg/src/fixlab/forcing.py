"""Kripke-Joyal forcing over the two-stage site of ``Set^{·→·}``.

An object is a pair of sets ``X1 -> X0``.  Stage 1 sees its own data and,
through restriction, stage 0; stage 0 sees only itself.  The clauses are
the usual presheaf ones:

* atoms, conjunction, disjunction and existentials are decided at the
  current stage;
* implication and universal quantification range over the current stage
  and every later one, with bound values restricted along the way.

Formulas are small immutable trees; terms are variables or applications
of a named stage-wise function to a variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

STAGES = (1, 0)


def later(stage: int) -> tuple[int, ...]:
    return (1, 0) if stage == 1 else (0,)


@dataclass(frozen=True)
class Sort:
    """An object ``[stage1 -> stage0]`` given by its elements and restriction."""

    name: str
    stage1: tuple
    stage0: tuple
    restrict: Callable

    def at(self, stage: int) -> tuple:
        return self.stage1 if stage == 1 else self.stage0


# -- syntax --------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    func: str
    arg: Var


@dataclass(frozen=True)
class Leq:
    left: Var | App
    right: Var | App


@dataclass(frozen=True)
class Mem:
    element: Var | App
    subset: Var | App


@dataclass(frozen=True)
class Eq:
    left: Var | App
    right: Var | App


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Implies:
    hyp: object
    concl: object


@dataclass(frozen=True)
class Forall:
    var: str
    sort: str
    body: object


@dataclass(frozen=True)
class Exists:
    var: str
    sort: str
    body: object


@dataclass(frozen=True)
class Falsum:
    pass


def Not(phi) -> Implies:
    return Implies(phi, Falsum())


# -- semantics -------------------------------------------------------------


@dataclass
class Model:
    """Sorts, the order on the poset sort, membership, and stage-wise functions.

    ``leq(stage, a, b)`` and ``mem(stage, a, A)`` interpret the atoms;
    ``functions[name]`` is a pair ``(stage1_map, stage0_map)``.
    """

    sorts: Mapping[str, Sort]
    leq: Callable[[int, object, object], bool]
    mem: Callable[[int, object, object], bool] | None = None
    functions: Mapping[str, tuple] = None


def _restrict_env(model: Model, env: dict, frm: int, to: int) -> dict:
    if frm == to:
        return env
    return {k: (s, model.sorts[s].restrict(v)) for k, (s, v) in env.items()}


def _term(model: Model, stage: int, env: dict, t):
    if isinstance(t, Var):
        return env[t.name][1]
    stage_maps = model.functions[t.func]
    return stage_maps[0 if stage == 1 else 1][env[t.arg.name][1]]


def forces(model: Model, stage: int, phi, env: dict | None = None) -> bool:
    """Whether ``phi`` holds at ``stage``; ``env`` maps names to ``(sort, value)``."""
    env = env or {}
    if isinstance(phi, Falsum):
        return False
    if isinstance(phi, Leq):
        return model.leq(stage, _term(model, stage, env, phi.left), _term(model, stage, env, phi.right))
    if isinstance(phi, Mem):
        return model.mem(stage, _term(model, stage, env, phi.element), _term(model, stage, env, phi.subset))
    if isinstance(phi, Eq):
        return _term(model, stage, env, phi.left) == _term(model, stage, env, phi.right)
    if isinstance(phi, And):
        return all(forces(model, stage, p, env) for p in phi.parts)
    if isinstance(phi, Or):
        return any(forces(model, stage, p, env) for p in phi.parts)
    if isinstance(phi, Implies):
        for t in later(stage):
            e = _restrict_env(model, env, stage, t)
            if forces(model, t, phi.hyp, e) and not forces(model, t, phi.concl, e):
                return False
        return True
    if isinstance(phi, Forall):
        for t in later(stage):
            e = _restrict_env(model, env, stage, t)
            for a in model.sorts[phi.sort].at(t):
                if not forces(model, t, phi.body, {**e, phi.var: (phi.sort, a)}):
                    return False
        return True
    if isinstance(phi, Exists):
        return any(
            forces(model, stage, phi.body, {**env, phi.var: (phi.sort, a)})
            for a in model.sorts[phi.sort].at(stage)
        )
    raise TypeError(f"not a formula: {phi!r}")


# -- formulas used by the arrow-topos checker ----------------------------------


def chain_formula(subset: str = "A", poset: str = "P"):
    """``∀a, b ∈ P. (a ∈ A ∧ b ∈ A) ⇒ (a ≤ b ∨ b ≤ a)``."""
    a, b, A = Var("a"), Var("b"), Var(subset)
    return Forall("a", poset, Forall("b", poset, Implies(
        And((Mem(a, A), Mem(b, A))),
        Or((Leq(a, b), Leq(b, a))),
    )))


def upper_bound_formula(subset, bound, poset: str = "P"):
    a = Var("_a")
    return Forall("_a", poset, Implies(Mem(a, subset), Leq(a, bound)))


def lub_formula(subset, bound, poset: str = "P"):
    """``bound`` is an upper bound of ``subset`` below every other upper bound."""
    u = Var("_u")
    return And((
        upper_bound_formula(subset, bound, poset),
        Forall("_u", poset, Implies(upper_bound_formula(subset, u, poset), Leq(bound, u))),
    ))


__all__ = [
    "And", "App", "Eq", "Exists", "Falsum", "Forall", "Implies", "Leq", "Mem", "Model",
    "Not", "Or", "STAGES", "Sort", "Var", "chain_formula", "forces", "later",
    "lub_formula", "upper_bound_formula",
]
