"""Exception types raised by yamlab."""


class YamlabError(Exception):
    """Base class for all yamlab errors."""


class DomainError(YamlabError, ValueError):
    """An argument lies outside the domain of an operation."""


class ResolutionError(DomainError):
    """A grid was requested with too few cells."""


class UnsupportedDimensionError(YamlabError):
    """The total dimension does not admit the requested computation."""


class ConvergenceError(YamlabError):
    """An iterative method failed to reach its tolerance."""
