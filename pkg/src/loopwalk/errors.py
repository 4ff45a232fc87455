"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: usage/validation -> 2,
numerical failures -> 3, not-applicable regime -> 4.
"""


class LoopwalkError(Exception):
    """Base class for all package errors."""


class EdgeListParseError(LoopwalkError):
    """Malformed edge-list input (carries the offending line number)."""


class GraphValidationError(LoopwalkError):
    """Graph violates simplicity/connectivity invariants."""


class UsageError(LoopwalkError):
    """Bad arguments to an operation or the CLI."""


class DivergenceError(LoopwalkError):
    """Series evaluation requested outside its convergence region (lambda <= m)."""


class NumericalError(LoopwalkError):
    """A numerical contract (residual, gap reliability, split) could not be met."""


class NotApplicableError(LoopwalkError):
    """Preconditions of a theorem-backed check do not hold for this instance."""


class WorkCapExceededError(LoopwalkError):
    """An oracle refused to run because its estimated cost exceeds its cap."""


class InconclusiveError(LoopwalkError):
    """Rigorous error bounds are too loose to decide the question as posed."""
