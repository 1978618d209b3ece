"""This module contains exceptions for the curi package."""

from __future__ import annotations


class CuriError(Exception):
    """Base class of every error raised by the curi package."""

    def __init__(self, message: str) -> None:
        """Initialize the exception."""
        self.message = message
        super().__init__(message)


class ConceptParseError(CuriError):
    """An exception raised when a postfix token string cannot be parsed."""


class UnknownTokenError(ConceptParseError):
    """An exception raised when a token is not part of the grammar vocabulary."""

    def __init__(self, token: str, position: int) -> None:
        """Initialize the exception."""
        self.token = token
        self.position = position
        super().__init__(f"Unknown token {token!r} at position {position}.")


class StackUnderflowError(ConceptParseError):
    """An exception raised when an operator lacks operands."""


class TypeMismatchError(ConceptParseError):
    """An exception raised when operand types violate an operator signature."""


class TrailingOperandsError(ConceptParseError):
    """An exception raised when the operand stack does not reduce to a single concept."""


class GrammarConfigError(CuriError):
    """An exception raised when the grammar configuration cannot produce a concept."""


class InfeasibleRangeError(CuriError):
    """An exception raised when a scene cannot hold the requested number of objects."""


class EmptyPoolError(CuriError):
    """An exception raised when an operation needs a non-empty scene pool."""


class EmptySpaceError(CuriError):
    """An exception raised when no concept survives filtering."""


class DegenerateSplitError(CuriError):
    """An exception raised when a split leaves the train or test side empty."""


class InsufficientPositivesError(CuriError):
    """An exception raised when a concept has too few true scenes for an episode."""


class InsufficientScenesError(CuriError):
    """An exception raised when the pool cannot supply enough distinct scenes for an episode."""


class EmptyHypothesisSetError(CuriError):
    """An exception raised when a prior is requested over no hypotheses."""


class SingleClassError(CuriError):
    """An exception raised when class-balanced accuracy is requested on single-class labels."""


class NoPositivesError(CuriError):
    """An exception raised when average precision is requested without a positive label."""


class MismatchedEpisodesError(CuriError):
    """An exception raised when two oracle runs do not cover the same episodes."""


class MissingArtifactError(CuriError):
    """An exception raised when a stage needs an artifact that was not produced yet."""


class DigestMismatchError(CuriError):
    """An exception raised when an artifact does not match the digest recorded in the manifest."""


class ConfigFileError(CuriError):
    """An exception raised when a configuration file cannot be read."""
