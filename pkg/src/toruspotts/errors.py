"""Exception types shared across the package."""


class InternalCheckError(RuntimeError):
    """A built-in consistency assertion failed.

    Raised when two independent computations of the same quantity disagree,
    or when an enumerated structure violates an invariant that is supposed
    to hold for every valid input.  Seeing this means a bug, not bad input.
    """


class HomotopyViolation(InternalCheckError):
    """A cluster configuration broke a planarity invariant.

    All non-contractible clusters in one configuration must share a single
    winding class, and a cluster winding both directions excludes every
    other non-contractible cluster.
    """


class EnumerationGuard(ValueError):
    """An enumeration request exceeds the hard size guard."""
