"""Exception types shared across the package."""


class FluxError(Exception):
    pass


class ZeroDivisor(FluxError, ZeroDivisionError):
    """Inverting a series with no term below its precision."""


class WindowTooSmall(FluxError):
    """The truncation window cannot certify the requested result."""


class TruncationLoss(FluxError):
    """Raised only on demand; normally loss is recorded as a flag."""


class SqrtUnavailable(FluxError):
    pass


class ExcludedPoint(FluxError):
    pass


class NotQuadratic(FluxError):
    pass


class Unsolvable(FluxError):
    pass


class ObstructionNonexact(FluxError):
    pass


class TruncationUnstable(FluxError):
    pass


class ParallelLines(FluxError):
    pass


class WindingBoundTooSmall(FluxError):
    pass


class ConfigError(FluxError):
    pass
