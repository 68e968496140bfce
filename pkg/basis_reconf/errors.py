# errors.py

from typing import Optional


class ReconfError(Exception):
    """Base class for every error raised by basis_reconf."""


class InputError(ReconfError, ValueError):
    """Malformed or infeasible input: bad spec, non-basis, overlapping bases, bad cover."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class NoBasisError(InputError):
    """The matroid has no basis we can produce (e.g. disconnected graph)."""


class ContractError(ReconfError):
    """A caller broke the precondition of an operation."""


class InvariantViolation(ReconfError, RuntimeError):
    """Internal inconsistency; always a bug."""


class CapExceeded(ReconfError):
    """Brute-force search refused because a size cap would be exceeded."""


class GenerationError(ReconfError):
    """Random instance generation ran out of retries."""
