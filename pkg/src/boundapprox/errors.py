"""Exception types shared across the package."""


class BoundaryApproxError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateInput(BoundaryApproxError, ValueError):
    """Too few sites, or all sites collinear."""


class DuplicateSite(BoundaryApproxError, ValueError):
    pass


class InvalidNodeId(BoundaryApproxError, ValueError):
    pass


class LengthMismatch(BoundaryApproxError, ValueError):
    pass


class EmptyInput(BoundaryApproxError, ValueError):
    pass


class EmptyAfterFilter(BoundaryApproxError, ValueError):
    pass
