"""Exception hierarchy shared by every module."""


class PotentiaError(Exception):
    """Base class for all library errors."""


class DimensionError(PotentiaError, ValueError):
    """Shapes or sizes do not fit the requested construction."""


class CapacityError(PotentiaError):
    """A dense matrix would exceed the configured entry cap."""


class ProfileError(PotentiaError, ValueError):
    """A strategy profile, player index or fixed choice is out of range."""


class UnsupportedShapeError(PotentiaError):
    """The game shape is not handled by the requested criterion."""


class ParseError(PotentiaError, ValueError):
    """A game document does not match the file schema."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class NotPotentialError(PotentiaError):
    """An operation that requires a potential game received one that is not.

    ``verdict`` carries the failing check so callers can report residuals.
    """

    def __init__(self, message, verdict=None):
        self.verdict = verdict
        super().__init__(message)
