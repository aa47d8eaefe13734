"""Exception hierarchy shared by the solver modules and the CLI."""

from __future__ import annotations


class HugeFoldError(Exception):
    """Base class for every error raised by this package."""


class InputError(HugeFoldError):
    """The input is malformed or violates a precondition (CLI exit code 2)."""


class ResourceLimitError(HugeFoldError):
    """A configured size or effort cap was hit (CLI exit code 3)."""


class ExpansionTooLarge(ResourceLimitError):
    pass


class MatrixTooLargeForTUCheck(ResourceLimitError):
    pass


class NodeLimitExceeded(ResourceLimitError):
    pass


class TooManyBricks(ResourceLimitError):
    pass


class ScaleTooLarge(ResourceLimitError):
    pass


class PointNotInPolytope(InputError):
    pass


class UnboundedRegion(InputError):
    pass


class UnboundedBrickSpace(InputError):
    pass


class UnboundedInteger(InputError):
    pass


class NotFeasible(InputError):
    pass


class NonIntegralVertex(InputError):
    """An LP vertex came back fractional, so the matrix cannot be totally unimodular."""


class InconsistentMargins(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ValidationError(InputError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid instance: {lines}")
