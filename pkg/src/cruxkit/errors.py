"""Exception types shared across cruxkit."""


class CruxkitError(Exception):
    """Base class for all library errors."""


class PreconditionError(CruxkitError, ValueError):
    """An operation was called outside its documented input range."""


class EdgeListParseError(CruxkitError, ValueError):
    """Malformed edge-list text. ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")
