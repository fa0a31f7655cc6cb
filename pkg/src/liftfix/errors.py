"""Exception hierarchy shared by all liftfix modules.

Exit-code mapping for the CLI lives here as well: validation and domain
errors are "user" errors (exit 2), budget exhaustion is its own class
(exit 3) so scripted callers can tell the two apart.
"""

from __future__ import annotations


class LiftfixError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2

    def payload(self) -> dict:
        return {"type": type(self).__name__, "message": str(self)}


class DimensionMismatch(LiftfixError):
    pass


class DomainViolation(LiftfixError):
    """An input violates a stated domain constraint; message names it."""


class TruncationNeedsExplicitGroup(LiftfixError):
    pass


class UnboundedRegion(LiftfixError):
    pass


class NonpositiveLambda(LiftfixError):
    pass


class NotArgmax(LiftfixError):
    pass


class OriginNotInterior(LiftfixError):
    pass


class PreconditionViolated(LiftfixError):
    pass


class ApexConditionFailed(LiftfixError):
    pass


class ClaimViolated(LiftfixError):
    """A vertex/inequality pair failed a nonpositivity check; both are named."""


class CertificateMismatch(LiftfixError):
    """Algebraic and geometric routes disagreed.  Indicates a bug, never data."""


class BudgetError(LiftfixError):
    exit_code = 3


class NoPositiveValueWithinBudget(BudgetError):
    """No positive lifting-value candidate arose within the search budget.

    Carries the best (possibly nonpositive) candidate found so the caller
    can inspect degenerate instances.
    """

    def __init__(self, message: str, best=None, witness=None):
        super().__init__(message)
        self.best = best
        self.witness = witness

    def payload(self) -> dict:
        from .rational import rat_str

        out = super().payload()
        out["best"] = None if self.best is None else rat_str(self.best)
        return out


class BudgetExceeded(BudgetError):
    pass


class WindowTooSmall(BudgetError):
    pass
