"""Exception hierarchy shared across the package."""


class BlockadeError(Exception):
    """Base class for every error raised by nrblockade."""


class InvalidDimensionError(BlockadeError, ValueError):
    pass


class SpaceMismatchError(BlockadeError, ValueError):
    """Operators or states live on different Hilbert spaces."""


class ConfigurationError(BlockadeError, ValueError):
    pass


class DegenerateTunnelingError(BlockadeError, ValueError):
    pass


class SingularPumpError(BlockadeError, ValueError):
    pass


class InvalidFrequencyError(BlockadeError, ValueError):
    pass


class DegenerateSteadyStateError(BlockadeError, RuntimeError):
    """The Liouvillian kernel is not one-dimensional.

    ``second_singular_value`` carries the diagnostic (``None`` when it was
    too expensive to compute).
    """

    def __init__(self, message, second_singular_value=None):
        super().__init__(message)
        self.second_singular_value = second_singular_value


class IntegrationError(BlockadeError, RuntimeError):
    def __init__(self, message, achieved_tolerance=None):
        super().__init__(message)
        self.achieved_tolerance = achieved_tolerance


class ConvergenceError(BlockadeError, RuntimeError):
    """Cutoff ladder hit its ceiling; ``table`` holds the levels visited."""

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table or []


class UndefinedObservableError(BlockadeError, ValueError):
    pass
