"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operands act on different numbers of qubits or have the wrong shape."""


class DenseLimitError(ValueError):
    """A dense construction was requested above the configured qubit cap."""


class BudgetError(RuntimeError):
    """An iterative construction exceeded its size budget."""

    def __init__(self, message, partial_size):
        super().__init__(message)
        self.partial_size = partial_size


class ModuleMembershipError(ValueError):
    """An operator has weight outside the modules it was declared to live in."""


class PreconditionError(ValueError):
    """Inputs violate a mathematical precondition of the requested formula."""
