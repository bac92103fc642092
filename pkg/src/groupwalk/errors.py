"""Exception hierarchy shared by every module of the package."""


class GroupWalkError(Exception):
    """Base class for all errors raised by groupwalk."""


class InvalidGroup(GroupWalkError, ValueError):
    """A multiplication table does not define a group."""


class NotLatinSquare(InvalidGroup):
    pass


class NotAssociative(InvalidGroup):
    pass


class NoIdentity(InvalidGroup):
    pass


class NoInverse(InvalidGroup):
    pass


class OrderCapExceeded(GroupWalkError):
    pass


class UnknownPreset(GroupWalkError, ValueError):
    pass


class SeedOutsideAmbient(GroupWalkError, ValueError):
    pass


class GroupMismatch(GroupWalkError, ValueError):
    pass


class InvalidDistribution(GroupWalkError, ValueError):
    pass


class EmptySupport(GroupWalkError, ValueError):
    pass


class EigensolverFailure(GroupWalkError):
    pass


class CapExceeded(GroupWalkError):
    pass


class Indeterminate(GroupWalkError):
    """The spectrum is too close to the unit circle to decide numerically.

    Fall back to :func:`groupwalk.obstruction.detect_obstruction`, which is exact.
    """


class InsufficientData(GroupWalkError, ValueError):
    pass


class NoClosedForm(GroupWalkError):
    pass


class SamplerUnavailable(GroupWalkError):
    pass


class TooLarge(GroupWalkError):
    """Multiplicative closure of matrix atoms exceeded the cap."""


class ToleranceCollision(GroupWalkError):
    """Two distinct matrix products are ambiguous at the requested tolerance."""


class ConfigError(GroupWalkError, ValueError):
    pass
