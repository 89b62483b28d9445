"""Exception types shared across the package."""


class GmtLabError(Exception):
    """Base class for all gmtlab errors."""


class PointOffManifold(GmtLabError):
    """Requested base point does not lie on the manifold (within tolerance)."""


class SingularPoint(GmtLabError):
    """The manifold is not C^2 at the requested point (e.g. a cone vertex)."""


class ChartRadiusUnavailable(GmtLabError):
    """The requested chart radius exceeds graph representability."""


class OutOfDomain(GmtLabError):
    """Chart evaluation outside its domain of validity."""


class EmptyIntersection(GmtLabError):
    """The ball does not intersect the manifold."""


class SingularRegion(GmtLabError):
    """The region needs the cone-aware integration path."""


class ToleranceNotReached(GmtLabError):
    """Adaptive integration could not meet the requested tolerance."""


class UnknownLabel(GmtLabError):
    """No builtin measure with that label."""


class NonConvergent(GmtLabError):
    """A limit/extrapolation did not Cauchy-converge."""


class ConfigError(GmtLabError):
    """Invalid run configuration."""
