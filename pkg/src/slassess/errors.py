"""Exception types raised across the package.

Two families exist so the CLI can map them onto exit codes: ``ConfigError``
for bad configuration or usage, and everything else under ``DataError`` for
problems with the opinions, trajectories or files being processed.
"""


class SLAssessError(Exception):
    """Base class for all package errors."""


class ConfigError(SLAssessError, ValueError):
    """Invalid run or scenario configuration."""


class DataError(SLAssessError, ValueError):
    """Invalid data passed to an operation."""


# opinion algebra
class AdditivityViolation(DataError):
    pass


class BaseRateViolation(DataError):
    pass


class RangeViolation(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class BaseRateMismatch(DataError):
    pass


class DogmaticOpinion(DataError):
    """Raised when an opinion with zero uncertainty must be mapped to evidence."""


class NegativeEvidence(DataError):
    """Raised when unfusion would remove evidence that was never fused in."""


# histogram / assessor
class NonFiniteValue(DataError):
    pass


class DomainMismatch(DataError):
    pass


class MissingSystem(DataError):
    pass


# trajectories
class ParseError(DataError):
    def __init__(self, message, path=None, row=None):
        self.path = path
        self.row = row
        where = ""
        if path is not None:
            where = f"{path}"
            if row is not None:
                where += f":{row}"
            where += ": "
        super().__init__(where + message)


class NonMonotonicTime(DataError):
    pass


class TooFewSamples(DataError):
    pass


class OutOfRange(DataError):
    pass


class RelativeKindUnsupported(DataError):
    pass


class MissingOverlap(DataError):
    pass
