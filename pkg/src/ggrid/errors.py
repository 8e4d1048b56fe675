"""Exception hierarchy. Every error raised by the package derives from GgridError."""


class GgridError(Exception):
    pass


class InvalidPointError(GgridError, ValueError):
    pass


class EmptyInstanceError(GgridError, ValueError):
    pass


class InvalidArgumentError(GgridError, ValueError):
    pass


class EmptyGraphError(GgridError, ValueError):
    pass


class InvalidTreeError(GgridError, ValueError):
    pass


class NotEulerianError(GgridError, ValueError):
    pass


class CapExceededError(GgridError):
    """An exponential enumeration was asked to go past its configured cap."""


class ParityError(GgridError, ValueError):
    pass


class InfeasibleOracleError(CapExceededError):
    """The brute-force oracle would exceed its selection bound."""


class InfeasibleSolutionError(GgridError, AssertionError):
    pass


class ParseError(GgridError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GenerationError(GgridError, ValueError):
    pass
