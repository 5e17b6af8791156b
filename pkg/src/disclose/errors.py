"""Exception hierarchy shared across the package.

The split mirrors the CLI exit codes: configuration problems (bad input
shapes, malformed literals) are distinct from model-assumption failures
(inputs that parse fine but violate what the solvers require), which are
distinct from solver breakdowns (a bracket that should exist numerically
does not).
"""


class DiscloseError(Exception):
    """Base class for everything raised deliberately by this package."""


class ConfigError(DiscloseError, ValueError):
    """Malformed configuration or input literal: wrong shape, type, or key."""


class ModelAssumptionError(DiscloseError, ValueError):
    """Inputs are well-formed but violate a model assumption the solver needs."""


class SolverError(DiscloseError, RuntimeError):
    """A numerical routine failed to converge or lost its bracket."""


class NotSimple(ModelAssumptionError):
    """The frontier pair is outside the smooth/strictly-concave class the
    reward-path solver handles; callers should fall back to the deadline
    solver."""

    def __init__(self, reasons):
        self.reasons = tuple(reasons)
        super().__init__("; ".join(self.reasons))


class AtomAtZero(ModelAssumptionError):
    """The breakthrough distribution puts mass at time zero, which the
    backward recursion cannot handle (there is no pre-first-atom cell)."""


class BracketFailure(SolverError):
    """The root bracket that theory guarantees was not found numerically;
    almost always a sign of a frontier-derivative bug."""


class NothingToImprove(DiscloseError, ValueError):
    """The discrete mechanism has no slack period to exploit."""
