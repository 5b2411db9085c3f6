"""Shared exception types."""
from __future__ import annotations


class CpsimError(Exception):
    """Base class for all package-specific errors."""


class NoSignChange(CpsimError):
    """Root bracket endpoints do not straddle a sign change."""


class NonFinite(CpsimError):
    """A numerical kernel encountered a non-finite value."""


class DomainError(CpsimError):
    """Argument outside the mathematical domain of a function."""


class AssumptionViolated(CpsimError):
    """A value model violates one of the standing assumptions (A1/A2/A3).

    `codes` lists the violated assumption/domain tags.
    """

    def __init__(self, codes: list[str]):
        self.codes = list(codes)
        super().__init__("; ".join(self.codes))


class EmptyEconomy(CpsimError):
    """A mechanism was run on an economy without agents."""


class ScaleLimit(CpsimError):
    """Problem size exceeds the exact-computation bound."""


class MismatchedProfiles(CpsimError):
    """Two record sets do not cover the same (profile, seed) pairs."""
