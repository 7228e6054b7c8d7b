"""Exception hierarchy shared by all modules."""


class CompatError(Exception):
    """Base class for every error raised by compatradius."""


class InvalidPOVM(CompatError):
    pass


class DegeneratePOVM(CompatError):
    pass


class OutOfRange(CompatError, ValueError):
    pass


class TooFewEffects(CompatError):
    pass


class NotPlanar(CompatError):
    pass


class Infeasible(CompatError):
    pass


class InfeasibleWeights(Infeasible):
    pass


class SamplingStuck(CompatError):
    pass


class ShapeMismatch(CompatError):
    pass


class InsufficientData(CompatError):
    pass


class Unsupported(CompatError):
    pass


class ConsistencyError(CompatError):
    """An internal numerical invariant was broken."""
