class FormatError(ValueError):
    """Malformed or inconsistent input data (bad JSON shape, index out of range, unit axiom)."""


class PreconditionError(ValueError):
    """A mathematical premise of an operation does not hold for the given input."""
