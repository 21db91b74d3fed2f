"""Exception taxonomy shared by every module in the package.

Each exception carries a short machine-readable ``category`` used by the
command line interface to pick its exit code, so library callers and shell
callers see the same failure classification.
"""

from __future__ import annotations


class PricingError(Exception):
    """Base class for all errors raised by this package."""

    category = "error"
    exit_code = 1


class InvalidParameterError(PricingError):
    """A value violates a documented range or structural invariant."""

    category = "invalid-parameter"
    exit_code = 3


class SchemaError(PricingError):
    """A scenario file failed validation.

    ``path`` points at the offending field, e.g. ``consumers[2].acceptance[0]``.
    """

    category = "schema"
    exit_code = 3

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class InfeasibleError(PricingError):
    """The requested evaluation has no feasible answer (e.g. no affordable slab)."""

    category = "infeasible"
    exit_code = 4


class BracketError(PricingError):
    """A root-finding bracket does not straddle a sign change."""

    category = "bracket"
    exit_code = 5


class NumericalError(PricingError):
    """Iteration failed to converge or produced a non-finite value."""

    category = "numerical"
    exit_code = 5
