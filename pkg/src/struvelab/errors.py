"""Exception hierarchy shared by all modules."""


class StruvelabError(Exception):
    """Base class for library errors."""


class DomainError(StruvelabError, ValueError):
    """Argument outside the domain of the requested function."""


class DivergenceError(DomainError):
    """The requested series or integral does not converge for these parameters."""


class RangeError(StruvelabError, OverflowError):
    """Result or an intermediate quantity is not representable."""


class InternalConsistencyError(StruvelabError, RuntimeError):
    """Two internal evaluation routes disagree beyond their error estimates."""


class SymmetryViolationError(StruvelabError, RuntimeError):
    """A vertical-line integral produced an imaginary part above its error estimate."""


class UsageError(StruvelabError, ValueError):
    """Invalid call pattern, e.g. a required component was not supplied."""
