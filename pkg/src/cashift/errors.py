"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed polynomial or literal text; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class NotCAFormError(ValueError):
    """No axis inversion and unit multiple brings a polynomial to X_d - Phi."""


class BudgetError(RuntimeError):
    """A guarded enumeration or window would exceed its configured budget."""


class TheoremViolation(AssertionError):
    """An exhaustive check contradicted a rigidity statement it verifies."""
