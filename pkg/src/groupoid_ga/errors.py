"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed textual or JSON input."""


class ValidationError(ValueError):
    """Structurally valid input that violates a documented constraint."""


class CapacityError(RuntimeError):
    """Input exceeds a configured size cap; refusing rather than guessing."""
