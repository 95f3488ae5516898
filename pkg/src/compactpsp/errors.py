"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CompactPspError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(CompactPspError, ValueError):
    """An argument violates a documented precondition."""


class RangeError(CompactPspError, IndexError):
    """An index or block lies outside its allowed range."""


class BudgetError(CompactPspError):
    """A configured resource cap was exceeded.

    ``stats`` carries whatever partial progress the caller may want to log.
    """

    def __init__(self, message: str, stats: dict | None = None):
        super().__init__(message)
        self.stats = dict(stats or {})


class PreconditionError(CompactPspError):
    """A witness or instance handed to an operation does not meet its contract."""


class WitnessNotFoundError(CompactPspError):
    """A set required by an embedding is absent from the reduced family."""

    def __init__(self, message: str, label=None):
        super().__init__(message)
        self.label = label


class SoundnessViolation(CompactPspError):
    """A lifted witness broke one of the reduction's structural guarantees.

    ``check`` names the guarantee that failed; see ``reduction.LIFT_CHECKS``.
    """

    def __init__(self, check: str, message: str):
        super().__init__(f"[{check}] {message}")
        self.check = check


class EquivalenceFailure(CompactPspError):
    """Decision answers disagreed; ``bundle`` is a self-contained JSON reproduction."""

    def __init__(self, message: str, bundle: dict):
        super().__init__(message)
        self.bundle = bundle
