"""Exception hierarchy shared across the package."""


class FracfuseError(Exception):
    """Base class for all fracfuse errors."""


class InputError(FracfuseError):
    """Invalid input data, file, or argument. CLI exit code 1."""


class NoValidDataError(InputError):
    """Every reading of a sensor was rejected by the quality gate."""


class NumericalError(FracfuseError):
    """A computation failed or produced unusable values. CLI exit code 2."""


class FusionDidNotConverge(NumericalError):
    """Fusion loop exhausted its round budget.

    Carries the last computed result on the ``result`` attribute so callers
    can inspect how close the loop got.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NoPrognosisError(FracfuseError):
    """No component provided a warning state or a threshold crossing. CLI exit code 3."""
