"""Ordinal notations below epsilon_0 in Cantor normal form.

A notation is a strictly descending list of ``(exponent, coefficient)``
terms, each exponent itself a notation, each coefficient a positive
integer.  Zero is the empty list.  Only comparison, successor and
fundamental sequences are provided; there is deliberately no arithmetic.

Text syntax: ``0``, ``3``, ``w``, ``w+1``, ``w*2+3``, ``w^2``, ``w^w``,
``w^(w+1)*2+w+5``.  ``ω`` is accepted as an alias for ``w``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator

from .errors import NonCanonical


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


def _cmp_terms(a: tuple, b: tuple) -> int:
    for (ea, ca), (eb, cb) in zip(a, b):
        c = _cmp_terms(ea.terms, eb.terms)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a) == len(b):
        return 0
    return -1 if len(a) < len(b) else 1


def _canonical_problem(terms) -> str | None:
    if not isinstance(terms, tuple):
        return "terms must be a tuple"
    prev = None
    for term in terms:
        if not (isinstance(term, tuple) and len(term) == 2):
            return f"malformed term {term!r}"
        exp, coeff = term
        if not isinstance(exp, Ordinal):
            return f"exponent {exp!r} is not a notation"
        if not isinstance(coeff, int) or isinstance(coeff, bool) or coeff < 1:
            return f"coefficient {coeff!r} is not a positive integer"
        problem = _canonical_problem(exp.terms)
        if problem:
            return problem
        if prev is not None and _cmp_terms(prev.terms, exp.terms) <= 0:
            return "exponents are not strictly descending"
        prev = exp
    return None


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """A canonical Cantor-normal-form notation."""

    terms: tuple = ()

    def __post_init__(self):
        problem = _canonical_problem(self.terms)
        if problem:
            raise NonCanonical(problem)

    @classmethod
    def unchecked(cls, terms: tuple) -> "Ordinal":
        """Build a notation without the canonical-form check (for testing guards)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls(((ZERO, n),)) if n else ZERO

    @classmethod
    def omega_power(cls, exponent: "Ordinal", coeff: int = 1) -> "Ordinal":
        return cls(((exponent, coeff),))

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        return parse_ordinal(text)

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return ord_compare(self, other) is Ordering.LT

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"

    # -- classification -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    def as_int(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    def predecessor(self) -> "Ordinal":
        if not self.is_successor:
            raise ValueError(f"{self} is not a successor")
        *head, (exp, coeff) = self.terms
        if coeff == 1:
            return Ordinal(tuple(head))
        return Ordinal((*head, (exp, coeff - 1)))


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def ord_compare(a: Ordinal, b: Ordinal) -> Ordering:
    for x in (a, b):
        problem = _canonical_problem(x.terms)
        if problem:
            raise NonCanonical(problem)
    return Ordering(_cmp_terms(a.terms, b.terms))


def successor(a: Ordinal) -> Ordinal:
    if a.is_successor:
        *head, (exp, coeff) = a.terms
        return Ordinal((*head, (exp, coeff + 1)))
    return Ordinal((*a.terms, (ZERO, 1)))


class SegmentRelation(enum.Enum):
    A_INITIAL_IN_B = "a initial segment of b"
    EQUAL = "equal"
    B_INITIAL_IN_A = "b initial segment of a"


def initial_segment_compare(a: Ordinal, b: Ordinal) -> SegmentRelation:
    """Which of the two ordinals embeds as a (proper) initial segment of the other."""
    return {
        Ordering.LT: SegmentRelation.A_INITIAL_IN_B,
        Ordering.EQ: SegmentRelation.EQUAL,
        Ordering.GT: SegmentRelation.B_INITIAL_IN_A,
    }[ord_compare(a, b)]


# -- fundamental sequences ---------------------------------------------


@dataclass(frozen=True)
class FundamentalSequence:
    """The canonical cofinal sequence ``limit[0] < limit[1] < ...``."""

    limit: Ordinal

    def __post_init__(self):
        if not self.limit.is_limit:
            raise ValueError(f"{self.limit} is not a limit")

    def __getitem__(self, n: int) -> Ordinal:
        if n < 0:
            raise IndexError(n)
        *head, (exp, coeff) = self.limit.terms
        prefix = (*head, (exp, coeff - 1)) if coeff > 1 else tuple(head)
        if exp.is_successor:
            lower = exp.predecessor()
            return Ordinal((*prefix, (lower, n))) if n else Ordinal(prefix)
        return Ordinal((*prefix, (FundamentalSequence(exp)[n], 1)))

    def __iter__(self) -> Iterator[Ordinal]:
        n = 0
        while True:
            yield self[n]
            n += 1

    def take(self, k: int) -> list[Ordinal]:
        return [self[n] for n in range(k)]


def fundamental_sequence(a: Ordinal) -> FundamentalSequence | None:
    """Fundamental sequence of a limit notation, or ``None`` for zero and successors."""
    if not a.is_limit:
        return None
    return FundamentalSequence(a)


# -- text syntax --------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([wω])|([+*^()]))")


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse ordinal {text!r} at offset {pos}")
        tokens.append(m.group(1) or ("w" if m.group(2) else m.group(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"cannot parse ordinal {self.text!r}: expected {expected or 'token'}, got {tok!r}")
        self.pos += 1
        return tok

    def number(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise ValueError(f"cannot parse ordinal {self.text!r}: expected number, got {tok!r}")
        return int(tok)

    def expr(self) -> Ordinal:
        terms = [self.term()]
        while self.peek() == "+":
            self.take("+")
            terms.append(self.term())
        if len(terms) == 1 and terms[0] is None:
            return ZERO
        if any(t is None for t in terms):
            raise NonCanonical(f"zero summand in {self.text!r}")
        return Ordinal(tuple(terms))

    def term(self):
        if self.peek() == "w":
            self.take("w")
            exp = ONE
            if self.peek() == "^":
                self.take("^")
                exp = self.atom()
            coeff = 1
            if self.peek() == "*":
                self.take("*")
                coeff = self.number()
                if coeff == 0:
                    raise NonCanonical(f"zero coefficient in {self.text!r}")
            if exp.is_zero:
                raise NonCanonical(f"w^0 should be written 1 in {self.text!r}")
            return (exp, coeff)
        n = self.number()
        return (ZERO, n) if n else None

    def atom(self) -> Ordinal:
        if self.peek() == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        if self.peek() == "w":
            self.take("w")
            if self.peek() == "^":
                self.take("^")
                return Ordinal(((self.atom(), 1),))
            return OMEGA
        return Ordinal.of(self.number())


def parse_ordinal(text: str) -> Ordinal:
    parser = _Parser(text)
    result = parser.expr()
    if parser.peek() is not None:
        raise ValueError(f"trailing input in ordinal {text!r}")
    return result


def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if exp.is_zero:
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        elif exp.is_finite or exp == OMEGA:
            base = f"w^{format_ordinal(exp)}"
        else:
            base = f"w^({format_ordinal(exp)})"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return "+".join(parts)
