class OrdfixError(Exception):
    """Base class for library errors."""


class InputError(OrdfixError, ValueError):
    """Malformed tables, bad indices, parameters out of range."""


class GaugeError(OrdfixError, ValueError):
    """A gauge evaluator returned a negative or non-finite value."""


class PreconditionError(OrdfixError):
    """A hypothesis required by an operation does not hold."""

    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        msg = f"precondition {hypothesis!r} failed"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class GenerationError(OrdfixError):
    """Instance generation ran out of attempts."""
