"""Exception hierarchy shared by every module."""


class FactorizationError(Exception):
    """Base class for all errors raised by this package."""


class CapacityError(FactorizationError):
    """An ambient dimension or site count exceeds the configured cap."""


class ContractViolation(FactorizationError, ValueError):
    """An operation was called with inputs violating its preconditions."""


class NumericalInconsistency(FactorizationError):
    """Two routes that must agree mathematically disagree numerically.

    ``law`` names the identity that broke, so callers (the CLI in
    particular) can report it.
    """

    def __init__(self, message, law=None):
        super().__init__(message)
        self.law = law


class InternalError(FactorizationError):
    """An iteration that is guaranteed to terminate did not."""


class UnitCertificationError(ContractViolation):
    """The proposed unit does not make each factor independent of its commutant."""

    def __init__(self, message, law="unit-certification"):
        super().__init__(message)
        self.law = law
