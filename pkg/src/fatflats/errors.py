"""Exception hierarchy shared by every module of the package."""


class FatFlatsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FatFlatsError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class DimensionMismatchError(FatFlatsError, ValueError):
    """A row or vector has the wrong length."""


class GenericityError(FatFlatsError):
    """A random configuration failed its general-position validation."""


class UnsupportedConfigurationError(FatFlatsError):
    """The configuration is outside what the closed-form machinery handles."""


class NotEffectiveError(FatFlatsError, ValueError):
    """A Cremona transform produced a negative degree or multiplicity."""


class HypothesisError(FatFlatsError, ValueError):
    """An input violates a geometric hypothesis (e.g. nondegeneracy)."""


class CapExceededError(FatFlatsError):
    """A rank computation would exceed the configured monomial-count cap."""
