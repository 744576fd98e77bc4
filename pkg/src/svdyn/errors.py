class InputError(ValueError):
    """Malformed or inconsistent input to a library operation."""


class EmptyShiftError(InputError):
    """A shift space turned out to contain no points."""


class StateLimitError(RuntimeError):
    """Determinization exceeded the configured subset-state budget."""
