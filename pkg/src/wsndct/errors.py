"""Exception hierarchy shared by every stage of the pipeline."""


class WsnError(Exception):
    """Base class for all library errors."""


class InvalidArgument(WsnError, ValueError):
    pass


class InvalidData(WsnError, ValueError):
    pass


class NotFound(WsnError, LookupError):
    pass


class UnsupportedModel(WsnError, ValueError):
    """Raised when an analytic formula is asked for a path-loss exponent it does not cover."""


class ElectionFailure(WsnError, RuntimeError):
    pass


class RoutingError(WsnError, RuntimeError):
    pass


class NoStatistics(WsnError, ValueError):
    pass


class UndefinedMetric(WsnError, ValueError):
    pass


class ConfigError(WsnError, ValueError):
    pass
