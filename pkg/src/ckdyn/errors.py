"""Exception types shared across modules."""


class InputError(ValueError):
    """Bad user input: maps to CLI exit code 1."""


class GraphValidationError(InputError):
    pass


class DegenerateGraphError(GraphValidationError):
    pass


class SystemValidationError(InputError):
    pass


class SizeGuardError(InputError):
    pass


class DomainError(ValueError):
    """A partial map was applied outside its domain."""


class ConsistencyError(RuntimeError):
    """Two independent computations of a proven identity disagree.

    This always indicates a bug; the CLI maps it to exit code 2.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail
