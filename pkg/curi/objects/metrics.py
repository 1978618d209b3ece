"""This module contains the classes that represent evaluation results."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from curi.objects.config import NegativesMode  # noqa: TCH001
from curi.objects.oracle import OracleKind  # noqa: TCH001
from curi.objects.scene import Scene  # noqa: TCH001
from curi.objects.signature import TruthTable  # noqa: TCH001
from curi.objects.split import SplitKind  # noqa: TCH001

MODALITY = "schema-oracle"


class MapPool(BaseModel):
    """A class that represents the scene pool mAP is computed over.

    `truth` has one row per concept of the space over the pool's scenes. `sources[i]` is the filter
    pool position scene i was taken from, or None for a freshly sampled scene.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int
    scenes: list[Scene]
    sources: list[int | None]
    truth: TruthTable

    def __len__(self) -> int:
        """Return the number of scenes."""
        return len(self.scenes)

    @property
    def ids(self) -> list[int]:
        """The scene ids of the pool."""
        return [scene.id_ for scene in self.scenes]


class OracleSummary(BaseModel):
    """A class that represents the metrics of one oracle over a set of episodes."""

    oracle: OracleKind
    episodes: list[int]
    map_: float = Field(..., alias="map")
    cba: float
    fallback: float

    model_config = ConfigDict(populate_by_name=True)


class MetricsReport(BaseModel):
    """A class that represents the compositionality gap of one split under one negatives mode."""

    split: SplitKind
    negatives: NegativesMode
    strong: OracleSummary
    weak: OracleSummary
    gap: dict[str, float]
    fallback: float
    episodes: int
    seed: int


class SummaryRow(BaseModel):
    """A class that represents one row of the summary table."""

    modality: str = MODALITY
    split: SplitKind
    negatives: NegativesMode
    strong_map: float
    weak_map: float
    gap_map: float
    strong_cba: float
    weak_cba: float
    gap_cba: float
    fallback: float
    episodes: int

    @classmethod
    def from_report(cls, report: MetricsReport) -> SummaryRow:
        """Flatten a metrics report."""
        return cls(
            split=report.split,
            negatives=report.negatives,
            strong_map=report.strong.map_,
            weak_map=report.weak.map_,
            gap_map=report.gap["map"],
            strong_cba=report.strong.cba,
            weak_cba=report.weak.cba,
            gap_cba=report.gap["cba"],
            fallback=report.fallback,
            episodes=report.episodes,
        )


class MapPoolMeta(BaseModel):
    """A class that represents the JSON sidecar of a stored mAP pool."""

    k: int
    concept_ids: list[int]
    sources: list[int | None]
