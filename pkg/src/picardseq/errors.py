class PicardSeqError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatch(PicardSeqError, ValueError):
    pass


class IncompatibleAlgebras(PicardSeqError, ValueError):
    pass


class NotInvertiblePair(PicardSeqError):
    """X Y != R or Y X != R for a candidate invertible subbimodule."""


class NotInvertible(PicardSeqError):
    def __init__(self, msg, side=None):
        super().__init__(msg)
        self.side = side


class PhiNotBilinear(PicardSeqError):
    pass


class PhiNotMultiplicative(PicardSeqError):
    pass


class WitnessInvalid(PicardSeqError):
    pass


class WitnessNotBilinear(PicardSeqError):
    pass


class PentagonFailure(PicardSeqError):
    """A square that must commute did not; always an implementation bug."""


class InternalError(PicardSeqError):
    pass


class FixtureError(PicardSeqError):
    """Fixture could not be parsed."""

    def __init__(self, msg, line=None, key=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if key is not None:
            loc.append(f"key {key!r}")
        super().__init__(f"{msg} ({', '.join(loc)})" if loc else msg)
        self.line = line
        self.key = key


class FixtureValidationError(PicardSeqError):
    def __init__(self, report):
        super().__init__("fixture failed validation:\n  " + "\n  ".join(report.problems))
        self.report = report
