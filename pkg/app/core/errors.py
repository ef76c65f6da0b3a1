from typing import Any


class WorkbenchError(Exception):
    """
    Root error of the workbench.

    Carries an exit code (the CLI returns it unchanged) and a detail payload,
    which can be a plain message or a dict for structured diagnostics.
    Extra keyword arguments are kept in ``context`` for the report writer.
    """

    exit_code = 2

    def __init__(self, detail: Any = None, exit_code: int | None = None, **context: Any):
        self.detail = detail
        self.context = context
        if exit_code is not None:
            self.exit_code = exit_code
        super().__init__(detail)

    def __str__(self) -> str:
        return str(self.detail)


class DomainError(WorkbenchError, ValueError):
    """An operation was called outside its precondition."""


class ConfigError(WorkbenchError, ValueError):
    pass


class PartitionError(DomainError):
    pass


class WordTooLongError(DomainError):
    pass


class NumericalError(WorkbenchError, ArithmeticError):
    """A numerical procedure could not certify its result; counts as a failed check."""

    exit_code = 1


class BranchError(NumericalError):
    """No square-root branch satisfies the analytic constraints."""


class ConvergenceError(NumericalError):
    pass


class MassDeficitError(NumericalError):
    pass


class IllConditionedError(NumericalError):
    pass


class CalibrationError(NumericalError):
    pass


class NearSingularError(NumericalError):
    """A self-adjoint matrix has an eigenvalue below the singularity floor."""


class ConditioningWarning(UserWarning):
    pass
