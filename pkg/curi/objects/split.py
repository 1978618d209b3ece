"""This module contains the classes that represent generalization splits."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

SplitKind = Literal[
    "instance_iid",
    "concept_iid",
    "counting",
    "extrinsic",
    "intrinsic",
    "boolean",
    "complexity",
    "binding_color",
    "binding_shape",
]

SPLIT_KINDS: tuple[SplitKind, ...] = (
    "instance_iid",
    "concept_iid",
    "counting",
    "extrinsic",
    "intrinsic",
    "boolean",
    "complexity",
    "binding_color",
    "binding_shape",
)

# Splits whose test concepts are chosen by cluster rather than by a token predicate.
CONCEPT_LEVEL_KINDS: frozenset[str] = frozenset({"concept_iid"})


class HoldoutSpec(BaseModel):
    """A class that represents what a split holds out for test.

    `pairs` hold token pairs (e.g. (`green`, `or`)); `tokens` single tokens; `requires` an accessor the
    concept must also reference; `length_threshold` the longest train concept for the complexity split.
    """

    kind: SplitKind
    pairs: list[tuple[str, str]] = Field(default_factory=list)
    tokens: list[str] = Field(default_factory=list)
    requires: list[str] = Field(default_factory=list)
    length_threshold: int | None = None
    test_fraction: float | None = None
    val_fraction: float = 0.1
    seed: int = 0


class SplitAssignment(BaseModel):
    """A class that represents the train, validation and test concepts of one split."""

    kind: SplitKind
    spec: HoldoutSpec
    train: list[int]
    val: list[int]
    test: list[int]

    def non_test(self) -> list[int]:
        """Return the concepts visible outside test: train and validation."""
        return sorted(set(self.train) | set(self.val))

    def side(self, name: Literal["train", "val", "test"]) -> list[int]:
        """Return the concept ids of one side."""
        return getattr(self, name)


class SplitFinding(BaseModel):
    """A class that represents one violation found while validating a split."""

    check: str
    message: str
    concept_ids: list[int] = Field(default_factory=list)


class SplitReport(BaseModel):
    """A class that represents the validation report of a split."""

    kind: SplitKind
    sizes: dict[str, int]
    findings: list[SplitFinding]

    @property
    def ok(self) -> bool:
        """Whether the split passed every check."""
        return not self.findings
