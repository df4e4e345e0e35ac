"""Exception types shared across the package."""


class QubokitError(Exception):
    """Base class for all package errors."""


class DimensionError(QubokitError, ValueError):
    """An assignment or vector has the wrong length."""


class ParameterError(QubokitError, ValueError):
    """A numeric parameter is outside its allowed range."""


class UnknownLabelError(QubokitError, KeyError):
    """A variable label is not present (or no longer free) in the registry."""


class InfeasibleConstraintError(QubokitError, ValueError):
    """A constraint cannot be satisfied by any assignment."""


class CapabilityError(QubokitError, RuntimeError):
    """The requested computation exceeds a configured size cap."""
