"""Exception hierarchy. CLI exit codes are attached to each class."""


class VLSFError(Exception):
    exit_code = 1


class DomainError(VLSFError, ValueError):
    """Argument outside the mathematical domain of a function."""

    exit_code = 3


class ValidationError(VLSFError, ValueError):
    exit_code = 3


class InfeasibleError(VLSFError):
    """No design exists for the requested parameters."""

    exit_code = 2


class ConvergenceError(VLSFError, RuntimeError):
    """An iterative solver failed. ``diagnostics`` holds the last state."""

    exit_code = 4

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ResourceError(VLSFError, MemoryError):
    exit_code = 3
