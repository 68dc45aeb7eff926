"""Exception hierarchy shared by every module."""


class MttError(Exception):
    """Base class for all library errors."""


class NotNormal(MttError):
    pass


class NoConvergence(MttError):
    pass


class DimensionMismatch(MttError):
    pass


class WrongDimension(MttError):
    pass


class BudgetTooLarge(MttError):
    pass


class InvalidMatrix(MttError):
    """Raised by parsers and validators for malformed matrix data."""


class InvalidConjugation(MttError):
    pass


class NotCSymmetricWithRespectToC(MttError):
    pass


class NotAntiSymmetricWithRespectToK(MttError):
    pass


class NotScalar(MttError):
    pass


class OddDimensionSkew(MttError):
    pass


class SplitResidualTooLarge(MttError):
    pass


class SpectrumNotConjugateSymmetric(MttError):
    pass


class QStructureViolated(MttError):
    pass


class BlockLeakage(MttError):
    pass


class RefinementStalled(MttError):
    pass


class NotUET(MttError):
    pass


class Undetermined(MttError):
    pass


class DecompositionInvalid(MttError):
    """A finished decomposition failed one of its structural invariants."""


class InvalidSpec(MttError):
    pass
