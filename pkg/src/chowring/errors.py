"""Exception hierarchy shared by every module in the package."""


class ChowError(Exception):
    """Base class for all errors raised by chowring."""


class CycleDetected(ChowError):
    pass


class NotASemilattice(ChowError):
    def __init__(self, x, y):
        super().__init__(f"elements {x} and {y} have no unique greatest lower bound")
        self.pair = (x, y)


class NotALattice(ChowError):
    pass


class NotRanked(ChowError):
    pass


class NotAtomic(ChowError):
    pass


class NotSubmodular(ChowError):
    def __init__(self, f, g, detail=""):
        msg = f"submodularity fails for flats {f} and {g}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.pair = (f, g)


class SizeLimit(ChowError):
    pass


class InvalidParams(ChowError):
    pass


class RankZero(ChowError):
    pass


class SizeMismatch(ChowError):
    pass


class NotHomogeneous(ChowError):
    pass


class InvalidFlat(ChowError):
    pass


class NotStandard(ChowError):
    pass


class DegreeOutOfRange(ChowError):
    pass


class ContextMismatch(ChowError):
    pass


class EmptyFlat(ChowError):
    pass


class UnknownFlat(ChowError):
    pass


class ParseError(ChowError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class StepLimit(ChowError):
    """Raised when straightening exceeds its rewrite budget (an implementation bug guard)."""


class InputError(ChowError):
    """Malformed matroid or poset document."""
