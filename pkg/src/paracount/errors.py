"""Domain errors with stable machine-readable codes.

Every refusal the library can produce carries a ``code`` string that stays
stable across releases; the CLI prints it verbatim on stderr and tests match
on it.  Codes are lowercase, dash-separated, e.g. ``"duplicate-edge"``.
"""
from __future__ import annotations


class CountingError(Exception):
    """A domain error (bad instance, violated precondition, ...)."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class LimitExceeded(CountingError):
    """An exhaustive enumeration left desk scale; raise instead of grinding."""

    def __init__(self, message: str):
        super().__init__("limit-exceeded", message)


def reject_unknown_fields(obj: dict, allowed: set[str], what: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise CountingError(
            "unknown-field",
            f"{what} contains unknown field(s): {', '.join(sorted(unknown))}",
        )
