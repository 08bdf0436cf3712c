"""Exception types shared across the workbench."""


class LGError(Exception):
    """Base class for every error raised by lgvw."""


class ParseError(LGError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotQuasiHomogeneous(LGError):
    pass


class NonUniqueWeights(LGError):
    pass


class WeightOutOfRange(LGError):
    pass


class NotInvertible(LGError):
    pass


class UnclassifiableAtom(LGError):
    pass


class NonIntegerMilnorNumber(LGError):
    pass


class NotASymmetryGroup(LGError):
    pass


class NotASubgroup(LGError):
    pass


class NotAdmissible(LGError):
    pass


class NonIsolatedSingularity(LGError):
    pass


class DegenerateResidue(LGError):
    pass


class DegenerateRestriction(LGError):
    pass


class TruncationTooSmall(LGError):
    pass


class TruncationOverflow(LGError):
    pass


class HalfPowerResidue(LGError):
    pass


class NotSymplectic(LGError):
    pass


class NonNilpotentWindow(LGError):
    pass


class MapNotWellDefined(LGError):
    pass


class UncoveredPair(LGError):
    pass


class PreconditionNotMet(LGError):
    pass


class ConfigError(LGError):
    pass
