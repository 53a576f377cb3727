"""Exception hierarchy shared by every ratcurves module."""


class RatCurvesError(Exception):
    """Base class for all errors raised by ratcurves."""


class DivisionByNonUnit(RatCurvesError, ZeroDivisionError):
    pass


class AllZeroInput(RatCurvesError, ValueError):
    pass


class MalformedPoint(RatCurvesError, ValueError):
    pass


class TowerError(RatCurvesError, ValueError):
    """Invalid blowup tower (cycles, bad parents, out-of-range data)."""


class WrongArity(RatCurvesError, ValueError):
    pass


class ClassMismatch(RatCurvesError, ValueError):
    pass


class AllZeroFactor(RatCurvesError, ValueError):
    pass


class InvalidMorphism(RatCurvesError, ValueError):
    pass


class ImageInsideCenter(RatCurvesError, ValueError):
    pass


class ProfileInconsistent(RatCurvesError, ValueError):
    pass


class DiagonalViolation(RatCurvesError, ValueError):
    """Two incidence data or jet prescriptions share a domain point."""


class NotTransversal(RatCurvesError, ValueError):
    pass


class NonLinearCondition(RatCurvesError, ValueError):
    """The requested incidence condition is not linear in the morphism coefficients."""


class GenericSampleNotFound(RatCurvesError):
    pass


class ConfigError(RatCurvesError, ValueError):
    """Config file violates the schema; ``path`` is a JSON pointer."""

    def __init__(self, path, message):
        self.path = path or "/"
        self.message = message
        super().__init__(f"{self.path}: {message}")


class InvalidDatum(RatCurvesError, ValueError):
    """Incidence datum or jet prescription inconsistent with the tower."""
