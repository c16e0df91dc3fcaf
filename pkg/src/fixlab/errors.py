"""Exception hierarchy shared by every fixlab module."""

from __future__ import annotations


class FixlabError(Exception):
    """Base class for all errors raised by fixlab.

    Exit codes: 1 a verdict failed, 2 usage, 3 malformed input, 4 a cap
    was exceeded, 5 a precondition of the requested operation fails,
    6 an internal verification failed.
    """

    exit_code = 5


class SchemaError(FixlabError, ValueError):
    """Input data does not match the expected JSON shape."""

    exit_code = 3


class UnknownElement(FixlabError, KeyError):
    def __init__(self, element, where: str = "poset"):
        super().__init__(f"unknown element {element!r} in {where}")
        self.element = element

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return self.args[0]


class NotAPartialOrder(FixlabError, ValueError):
    pass


class NotAChain(FixlabError, ValueError):
    pass


class SizeLimit(FixlabError):
    """An enumeration would exceed a configured cap."""

    exit_code = 4

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class MSizeLimit(SizeLimit):
    pass


class ProgEnumerationLimit(SizeLimit):
    pass


class CarrierTooLarge(SizeLimit):
    pass


class PartialFunction(FixlabError, ValueError):
    pass


class NotCompleteLattice(FixlabError, ValueError):
    pass


class NotChainComplete(FixlabError, ValueError):
    pass


class NotDirectedComplete(FixlabError, ValueError):
    pass


class NotMonotone(FixlabError, ValueError):
    pass


class NotProgressive(FixlabError, ValueError):
    pass


class NotPostFixed(FixlabError, ValueError):
    pass


class NoProgress(FixlabError, RuntimeError):
    pass


class SupUnresolvable(FixlabError):
    pass


class NonCanonical(FixlabError, ValueError):
    exit_code = 3


class MalformedGraph(FixlabError, ValueError):
    exit_code = 3


class InvariantViolation(FixlabError, AssertionError):
    """A construction produced data that fails its own verification."""

    exit_code = 6
