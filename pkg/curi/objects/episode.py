"""This module contains the classes that represent meta-learning episodes."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from curi.objects.split import SplitKind  # noqa: TCH001

SUPPORT_POSITIVES = 5
SUPPORT_NEGATIVES = 20


class Example(BaseModel):
    """A class that represents one labelled scene of a support or query set.

    `via` names the alternative hypothesis a hard negative was drawn for; it is None for positives and
    for negatives drawn at random.
    """

    model_config = ConfigDict(frozen=True)

    scene: int
    y: Literal[0, 1]
    via: int | None = None


class Episode(BaseModel):
    """A class that represents one episode: a support set and a query set for one concept."""

    model_config = ConfigDict(populate_by_name=True)

    idx: int
    concept_id: int
    mode: Literal["hard", "easy"]
    support: list[Example]
    query: list[Example]
    alt_support: list[int] = Field(default_factory=list)
    alt_query: list[int] = Field(default_factory=list)
    split_kind: SplitKind | None = Field(None, alias="split")
    side: Literal["train", "val", "test"] | None = None

    @property
    def scenes(self) -> list[int]:
        """Every scene id of the episode, support first."""
        return [example.scene for example in (*self.support, *self.query)]

    def labels(self, part: Literal["support", "query"]) -> list[int]:
        """Return the labels of the support or query set."""
        return [example.y for example in getattr(self, part)]
