"""Shared exception types.

Budget and guard failures are deliberately distinct from mathematical check
failures: the former mean "shrink the instance or raise the limit", the
latter mean "a verified assertion is false" (which, for the structural checks,
indicates an implementation bug, not a math failure).
"""


class WeakcommError(Exception):
    pass


class AlphabetError(WeakcommError):
    """A symbol is not part of the declared alphabet."""


class ParseError(WeakcommError):
    """Syntax error in a word or presentation; carries a position."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ArgumentError(WeakcommError):
    """A precondition on an argument value is violated."""


class EnumerationOverflow(WeakcommError):
    """Coset enumeration exceeded its budget; increase budget or shrink instance."""

    def __init__(self, budget: int):
        super().__init__(f"coset enumeration exceeded budget of {budget} live cosets")
        self.budget = budget


class SizeGuardError(WeakcommError):
    """An exhaustive computation was refused because the group/module is too big."""

    def __init__(self, size, guard: int, what: str = "group"):
        super().__init__(f"{what} of size {size} exceeds the configured guard {guard}")
        self.size = size
        self.guard = guard


class CheckFailure(WeakcommError):
    """A mathematical assertion failed; carries a minimal counterexample trace."""

    def __init__(self, name: str, witness=None):
        msg = f"check '{name}' failed"
        if witness is not None:
            msg += f"; witness: {witness}"
        super().__init__(msg)
        self.name = name
        self.witness = witness
