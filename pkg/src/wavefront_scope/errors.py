"""Exception types raised by the engine, detectors and scenario loader."""


class WavefrontError(Exception):
    """Base class; ``code`` is the stable identifier surfaced in reports."""

    code = "ERROR"

    def __init__(self, message=""):
        super().__init__(f"{self.code}: {message}" if message else self.code)


class ValidationError(WavefrontError):
    code = "INVALID"


class NyquistExceeded(WavefrontError):
    code = "NYQUIST_EXCEEDED"


class WindowUnresolved(WavefrontError):
    code = "WINDOW_UNRESOLVED"


class ResolutionBudget(WavefrontError):
    code = "RESOLUTION_BUDGET"


class Unsupported(WavefrontError):
    code = "UNSUPPORTED"


class UnresolvedBand(WavefrontError):
    code = "UNRESOLVED_BAND"


class EmptyVolume(WavefrontError):
    code = "EMPTY_VOLUME"


# errors that surface before any transform is evaluated
PRECONDITION_ERRORS = (ValidationError, NyquistExceeded, WindowUnresolved, ResolutionBudget)
