"""This module contains the classes that represent the run manifest."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class StageRecord(BaseModel):
    """A class that represents one completed pipeline stage.

    `fingerprint` digests the stage's inputs: the configuration values it reads and the digests of
    the upstream artifacts. `outputs` maps artifact paths, relative to the output directory, to their
    sha256 digests.
    """

    fingerprint: str
    outputs: dict[str, str]
    seconds: float


class Manifest(BaseModel):
    """A class that represents the manifest of an output directory."""

    version: str
    config: dict[str, Any] = Field(default_factory=dict)
    stages: dict[str, StageRecord] = Field(default_factory=dict)

    @property
    def artifacts(self) -> dict[str, str]:
        """Every recorded artifact path and its digest."""
        return {path: digest for stage in self.stages.values() for path, digest in stage.outputs.items()}

    def timings(self) -> dict[str, float]:
        """Return the wall time of every stage, in seconds."""
        return {name: stage.seconds for name, stage in self.stages.items()}


class AuditFinding(BaseModel):
    """A class that represents one problem found while auditing a stored hypothesis space."""

    check: str
    message: str
    concept_ids: list[int] = Field(default_factory=list)
