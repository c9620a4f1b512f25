"""Exception hierarchy. CLI exit codes key off ValidationError (2) and StageError (3)."""


class Ap3Error(Exception):
    pass


class ValidationError(Ap3Error, ValueError):
    pass


class ConsistencyError(Ap3Error, AssertionError):
    """An exact identity or certificate failed; indicates a bug, not bad input."""


class NotFound(Ap3Error, LookupError):
    pass


class RetryExhausted(Ap3Error):
    pass


class DrawsExhausted(Ap3Error):
    pass


class ImaginaryResidueError(Ap3Error, ArithmeticError):
    pass


class StageError(Ap3Error):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
