"""Exception types shared across the package."""

from __future__ import annotations


class UpstackError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(UpstackError):
    """An argument violates a structural precondition (bad symbol, bad zone,
    mismatched alphabets, undeclared identifier, ...)."""


class RuleNotEnabledError(UpstackError):
    """A trace step names a rule that is not enabled in the configuration
    reached so far. Carries the offending position in the trace."""

    def __init__(self, index: int, message: str):
        super().__init__(f"step {index}: {message}")
        self.index = index


class ResourceLimitError(UpstackError):
    """A bounded search ran out of budget before reaching an answer.
    Carries how many nodes were explored, so callers can report or retry
    with a larger budget."""

    def __init__(self, explored: int, message: str):
        super().__init__(f"{message} (explored {explored} nodes)")
        self.explored = explored


class ParseError(UpstackError):
    """A model file or expression failed to parse. Carries a 1-based line
    and column."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
