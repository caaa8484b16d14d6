"""Exception hierarchy shared across the package."""


class SibuyaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SibuyaError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(SibuyaError, ValueError):
    """A model or configuration violates a structural invariant."""


class NotAvailableError(SibuyaError):
    """A closed form is requested for a model that does not admit one."""


class NumericError(SibuyaError, ArithmeticError):
    """A numerical routine failed to converge or produced an invalid value."""
