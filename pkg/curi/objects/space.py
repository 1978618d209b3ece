"""This module contains the classes that represent a filtered hypothesis space."""

from __future__ import annotations

from collections import Counter
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from curi.objects.concept import Concept  # noqa: TCH001
from curi.objects.signature import EvaluationSignature, TruthTable

if TYPE_CHECKING:
    from collections.abc import Sequence


class Thresholds(BaseModel):
    """A class that represents the interestingness window of a concept."""

    max_rate: float = 0.10
    min_true: int = 10


class Provenance(BaseModel):
    """A class that represents where the concepts of a space came from."""

    raw_count: int
    rejected: dict[str, int]
    accepted: int
    distinct_signatures: int


class SpaceEntry(BaseModel):
    """A class that represents one accepted concept."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    concept_id: int
    concept: Concept
    length: int
    signature: EvaluationSignature


class SpaceManifest(BaseModel):
    """A class that represents the JSON summary of a hypothesis space."""

    raw_count: int
    rejected: dict[str, int]
    accepted: int
    distinct_signatures: int
    thresholds: Thresholds
    pool_seed: int | None
    pool_size: int
    cluster_histogram: dict[int, int]


class HypothesisSpace(BaseModel):
    """A class that represents the accepted concepts and their synonym clusters.

    Entries are ordered by concept id; clusters partition the ids by identical signature bits.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    entries: list[SpaceEntry]
    clusters: list[list[int]]
    provenance: Provenance
    thresholds: Thresholds = Field(default_factory=Thresholds)
    pool_seed: int | None = None
    pool_size: int

    _index: dict[int, int] = PrivateAttr(default_factory=dict)
    _cluster_of: dict[int, int] = PrivateAttr(default_factory=dict)
    _truth: TruthTable | None = PrivateAttr(default=None)

    def model_post_init(self, __context: object) -> None:
        """Index entries and clusters by concept id."""
        self._index = {entry.concept_id: position for position, entry in enumerate(self.entries)}
        self._cluster_of = {
            concept_id: cluster for cluster, members in enumerate(self.clusters) for concept_id in members
        }

    def __len__(self) -> int:
        """Return the number of concepts."""
        return len(self.entries)

    def __contains__(self, concept_id: object) -> bool:
        """Whether the space holds a concept id."""
        return concept_id in self._index

    @property
    def ids(self) -> list[int]:
        """The concept ids, ascending."""
        return [entry.concept_id for entry in self.entries]

    def entry(self, concept_id: int) -> SpaceEntry:
        """Return the entry of a concept id."""
        return self.entries[self._index[concept_id]]

    def concept(self, concept_id: int) -> Concept:
        """Return the concept of an id."""
        return self.entry(concept_id).concept

    def lengths(self, concept_ids: Sequence[int]) -> np.ndarray:
        """Return the postfix lengths of the given concepts."""
        return np.array([self.entry(concept_id).length for concept_id in concept_ids], dtype=np.int64)

    def cluster_of(self, concept_id: int) -> int:
        """Return the index of the synonym cluster holding a concept."""
        return self._cluster_of[concept_id]

    @property
    def truth(self) -> TruthTable:
        """The packed truth table of every concept over the filter pool."""
        if self._truth is None:
            self._truth = TruthTable.from_signatures([entry.signature for entry in self.entries], self.pool_size)
        return self._truth

    def cluster_histogram(self) -> dict[int, int]:
        """Return how many synonym clusters have each size."""
        return dict(sorted(Counter(len(members) for members in self.clusters).items()))

    def manifest(self) -> SpaceManifest:
        """Return the JSON summary of the space."""
        return SpaceManifest(
            raw_count=self.provenance.raw_count,
            rejected=self.provenance.rejected,
            accepted=self.provenance.accepted,
            distinct_signatures=self.provenance.distinct_signatures,
            thresholds=self.thresholds,
            pool_seed=self.pool_seed,
            pool_size=self.pool_size,
            cluster_histogram=self.cluster_histogram(),
        )
