"""Exception hierarchy shared by all momlab modules.

The CLI maps these onto its exit-code contract: config problems exit 2,
violated theorem hypotheses exit 3, failed verification checks exit 1.
"""


class MomlabError(Exception):
    """Base class for all momlab errors."""


class ParameterError(MomlabError):
    """An argument is outside its documented domain."""


class HypothesisError(MomlabError):
    """A theorem hypothesis required by a block rule or bound is violated.

    The message names the violated hypothesis, e.g.
    ``"Theorem 3.2 requires alpha <= 0.4"``.
    """


class NumericError(MomlabError):
    """A numeric routine failed (e.g. no sign change on a root bracket)."""


class ConfigError(MomlabError):
    """A run config failed to parse; carries the offending line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
