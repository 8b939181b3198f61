"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Base class for domain errors raised by wkmoduli."""


class DegenerateMetric(GeometryError):
    """One of |K-L|, |M-L|, |K+M| vanishes, so the metric is not defined."""


class ScalarFlat(GeometryError):
    """Scalar curvature S vanishes."""


class NoRealWK(GeometryError):
    """S / (S^2 - 2|Ric|^2) <= 0: no real WK-number exists."""


class SignUndefined(GeometryError):
    """M = -K, the orientation rule does not fix the sign of lambda."""


class ZeroLambda(GeometryError):
    pass


class NoRealRoot(GeometryError):
    """The requested branch has no real root at this M."""


class PoleAtZero(GeometryError):
    pass


class PoleOfPsi(GeometryError):
    pass


class NoConvergence(GeometryError):
    pass
