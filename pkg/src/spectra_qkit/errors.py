"""Exception hierarchy shared by every module."""

from __future__ import annotations


class QkitError(Exception):
    """Base class for all library errors."""


class DomainError(QkitError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class GridError(QkitError, ValueError):
    """An exponent does not lie on the declared grid (1/c)Z."""


class BudgetError(QkitError, RuntimeError):
    """The truncation policy cannot meet its tolerance within its limits."""


class PoleError(QkitError, ZeroDivisionError):
    """A denominator vanishes within tolerance."""


class CutoffError(QkitError, ValueError):
    """A requested lattice point lies outside the product cutoff."""
