"""Shared exception types."""


class ParseError(ValueError):
    """Malformed textual input, annotated with the offending position."""

    def __init__(self, message, text=None, pos=None):
        self.text = text
        self.pos = pos
        if text is not None and pos is not None:
            window = text[max(0, pos - 16):pos + 16]
            message = f"{message} (column {pos + 1}, near {window!r})"
        super().__init__(message)


class CapExceeded(RuntimeError):
    """A configured size or iteration cap was exceeded."""


class VerificationError(RuntimeError):
    """An internal cross-check that must always hold failed; report as a bug."""
