"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad user input: wrong dimensions, invalid probabilities, guard limits."""


class SizeError(ValidationError):
    """Input exceeds a documented size guard."""


class InternalConsistencyError(RuntimeError):
    """A structural guarantee was violated; indicates a construction bug."""
