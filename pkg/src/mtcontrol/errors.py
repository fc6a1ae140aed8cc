"""Exception types shared across the benchmark suite."""


class MTControlError(Exception):
    """Base class for all benchmark-specific errors."""


class DuplicateRegistration(MTControlError):
    """An environment id was registered twice."""


class UnknownEnvironment(MTControlError):
    """Lookup of an environment id that is not in the registry."""


class EpisodeFinished(MTControlError):
    """step() was called on an environment whose episode is done."""


class DimensionMismatch(MTControlError):
    """A vector argument does not match the declared space dimension."""


class MalformedMap(MTControlError):
    """A map asset could not be parsed into a valid occupancy grid."""


class InvalidOrigin(MTControlError):
    """A ray was cast from inside an obstacle cell."""


class InvalidVariation(MTControlError):
    """Variation parameters are outside their legal domain."""


class NumericalFailure(MTControlError):
    """A numerical routine produced non-finite intermediate values."""
