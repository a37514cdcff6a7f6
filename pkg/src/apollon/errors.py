"""Exception types raised across the package."""


class ApollonError(ValueError):
    pass


class DimensionError(ApollonError):
    """Points, maps or domains of different dimensions were combined."""


class OutsideDomainError(ApollonError):
    """A query point does not lie in the domain U."""


class NestingError(ApollonError):
    """U is not (provably) contained in V."""


class UnsupportedError(ApollonError):
    """The configuration is valid but outside what the closed forms cover."""
