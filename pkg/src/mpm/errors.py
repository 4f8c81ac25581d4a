"""Exception types shared across the package."""


class DataError(Exception):
    """Malformed or inconsistent input data (files, labels, matrices)."""


class ParseError(DataError):
    """Syntax error in a text format; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PairingError(DataError):
    """pad_and_pair could not align the underlying matrices."""


class ChainError(DataError):
    """Adjacent chain links do not present the same module."""


class ComputationError(Exception):
    """A computation failed to reach its goal (bounds still reported)."""


class SubdivisionLimitError(ComputationError):
    """approx_matching_distance hit its depth guard; .report holds bounds."""

    def __init__(self, message: str, report):
        super().__init__(message)
        self.report = report
