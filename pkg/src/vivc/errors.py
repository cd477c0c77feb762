class VIVCError(ValueError):
    """Base class for every contract violation raised by this package."""


class DelayTooLarge(VIVCError):
    pass


class MessageTooLong(VIVCError):
    pass


class EmptySeed(VIVCError):
    pass


class RTooSmall(VIVCError):
    pass


class BadRange(VIVCError):
    pass


class BadLambda(VIVCError):
    pass


class EmptyEntropy(VIVCError):
    pass


class BindingInvalid(VIVCError):
    pass


class BadInterval(VIVCError):
    pass


class BadChallengeCount(VIVCError):
    pass


class EmptyLeaves(VIVCError):
    pass


class IndexOutOfRange(VIVCError):
    pass


class BadGenerator(VIVCError):
    pass


class MalformedProof(VIVCError):
    """Raised by parsers when an artifact cannot be decoded into a well-formed object."""
