"""Exception hierarchy shared by all tvdist modules."""


class TvDistError(Exception):
    """Base class for all tvdist errors."""


class NotSymmetric(TvDistError):
    pass


class NotPositiveDefinite(TvDistError):
    pass


class DimensionMismatch(TvDistError):
    pass


class BothZero(TvDistError):
    """Both densities vanish at the query point; eta is undefined."""


class DomainViolation(TvDistError):
    """A feature map was applied outside its domain (e.g. log of x <= 0)."""


class DegenerateLabels(TvDistError):
    """Training data contains only one class."""


class NonFiniteLoss(TvDistError):
    pass


class DidNotConverge(TvDistError):
    pass


class TooFewSamples(TvDistError):
    pass


class ZeroVariance(TvDistError):
    pass


class KTooLarge(TvDistError):
    pass


class CovariancesDiffer(TvDistError):
    pass


class ToleranceNotMet(TvDistError):
    pass


class ConfigError(TvDistError):
    """Invalid configuration or input file."""


class FileFormatError(ConfigError):
    pass
