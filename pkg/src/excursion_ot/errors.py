"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """Invalid input: mass mismatch, non-atomic marginals, out-of-range level..."""


class InvariantError(RuntimeError):
    """An internal invariant failed. This signals a bug, not bad input."""


class IterationLimitError(InvariantError):
    """The simplex exceeded its pivot cap."""


class OracleAmbiguityError(DomainError):
    """Brute-force oracle found distinct plans tied within tolerance."""
