"""Exception types shared across the toolkit."""


class FinlatError(Exception):
    """Base class for all finlat errors."""


class NotAPartialOrder(FinlatError):
    """Antisymmetry failed after reflexive/transitive closure."""

    def __init__(self, a: int, b: int):
        super().__init__(f"antisymmetry fails: {a} <= {b} and {b} <= {a}")
        self.witness = (a, b)


class NotALattice(FinlatError):
    """Some pair of elements lacks a unique meet or join."""

    def __init__(self, a: int, b: int, kind: str):
        super().__init__(f"pair ({a}, {b}) has no {kind}")
        self.witness = (a, b)
        self.kind = kind


class InvalidParameter(FinlatError):
    """A precondition on an argument was violated."""


class SizeLimit(FinlatError):
    """A computation would exceed its configured budget."""

    def __init__(self, dimension: str, actual, limit):
        super().__init__(f"{dimension} = {actual} exceeds budget {limit}")
        self.dimension = dimension
        self.actual = actual
        self.limit = limit


class GroundMismatch(FinlatError):
    """Two relations or structures live on different ground sets."""


class EmptySubset(FinlatError):
    """A restriction was requested onto an empty subset."""


class SubsetTooSmall(FinlatError):
    """A subset below the minimum usable size was supplied."""


class ParseError(FinlatError):
    """An input file could not be parsed; message carries the location."""
