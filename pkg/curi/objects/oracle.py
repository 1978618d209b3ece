"""This module contains the classes that represent ideal-learner inference results."""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

OracleKind = Literal["strong", "weak"]


class OraclePrior(BaseModel):
    """A class that represents the length prior of an oracle over its hypothesis set.

    `ids` is ascending and `weights[i]` is the normalized prior weight of `ids[i]`.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: OracleKind
    ids: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        """Return the number of hypotheses."""
        return len(self.ids)


class OraclePosterior(BaseModel):
    """A class that represents the posterior of an oracle after one support set.

    Only the consistent hypotheses are kept. Under fallback both arrays are empty.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    idx: int
    kind: OracleKind
    ids: np.ndarray
    weights: np.ndarray
    fallback: bool = False

    @property
    def consistent(self) -> int:
        """The number of hypotheses consistent with the support set."""
        return len(self.ids)


class OracleRecord(BaseModel):
    """A class that represents the scores of one oracle on one episode."""

    idx: int
    oracle: OracleKind
    consistent: int
    fallback: bool
    scores: list[float] = Field(default_factory=list)


class PriorExample(BaseModel):
    """A class that represents one high-weight hypothesis of a prior."""

    concept_id: int
    weight: float
    length: int
    pretty: str
