"""Errors raised by the E8 recognition toolkit."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .types import Factorization


class E8RecogError(Exception):
    """Base class for all toolkit errors."""


class InexactDivisionError(E8RecogError, ArithmeticError):
    """A division that must be exact left a remainder (implementation bug)."""

    def __init__(self, numerator: int, denominator: int, context: str) -> None:
        """Record the offending operands."""
        super().__init__(
            f"{context}: {numerator} is not divisible by {denominator}"
        )
        self.numerator = numerator
        self.denominator = denominator


class NotPrimePowerError(E8RecogError, ValueError):
    """Raised when a q argument is not a prime power."""

    def __init__(self, value: int, factorization: Factorization | None) -> None:
        """Keep the factorization so callers can show why it was rejected."""
        shown = factorization.format() if factorization is not None else "n/a"
        super().__init__(f"{value} is not a prime power ({value} = {shown})")
        self.value = value
        self.factorization = factorization


class PreconditionError(E8RecogError, ValueError):
    """An operation was called outside its documented domain."""


class UnknownLabelError(E8RecogError, KeyError):
    """A p(Phi) label is not present in the table."""


class FactorizationError(E8RecogError):
    """Factorization of a specific value failed."""

    def __init__(self, value: int, reason: str) -> None:
        """Name the value that could not be factored."""
        super().__init__(f"cannot factor {value}: {reason}")
        self.value = value


class CacheError(E8RecogError, OSError):
    """The factor cache file cannot be read or written."""


class MissingPiSetError(E8RecogError, KeyError):
    """check_prime needed a pi-set that was not supplied."""

    def __init__(self, theta: int) -> None:
        """Name the missing prime power."""
        super().__init__(f"missing pi(E8({theta}))")
        self.theta = theta

    def __str__(self) -> str:
        """Avoid KeyError's repr-quoting."""
        return str(self.args[0])


class ConfigError(E8RecogError, ValueError):
    """Invalid configuration or p(Phi) table."""


class VerificationError(E8RecogError):
    """A sanity check inside the verification sweep failed."""
