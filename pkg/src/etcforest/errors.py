class EtcForestError(Exception):
    """Base class for errors raised by this package."""


class DomainError(EtcForestError, ValueError):
    """An operation was called on input outside its domain."""


class ModelFormatError(EtcForestError, ValueError):
    """A model document could not be parsed.

    ``position`` is a character offset for JSON syntax errors, or a JSON
    path such as ``root.left.threshold`` for schema errors.
    """

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
