"""This module contains the class that represents a run configuration."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from curi.exceptions import ConfigFileError
from curi.objects.grammar import DEFAULT_OVERRIDES, GrammarConfig
from curi.objects.split import SPLIT_KINDS, SplitKind

NegativesMode = Literal["hard", "easy"]

_WEIGHT_PREFIX = "weight."


class RunConfig(BaseModel):
    """A class that represents the configuration of a benchmark generation run.

    The defaults describe the desk-scale run; `paper_scale()` gives the reference configuration.
    """

    seed: int = Field(0, ge=0)
    raw_concepts: int = Field(50_000, ge=0)
    pool_size: int = Field(100_000, ge=0)
    max_rate: float = Field(0.10, gt=0, le=1)
    min_true: int = Field(10, ge=0)
    split_kinds: list[SplitKind] = Field(default_factory=lambda: list(SPLIT_KINDS))
    episodes_train: int = Field(2_000, ge=0)
    episodes_val: int = Field(200, ge=0)
    episodes_test: int = Field(500, ge=0)
    negatives: NegativesMode = "hard"
    map_k: int = Field(3, ge=1)
    out: Path = Path("curi-out")
    max_depth: int = 6
    grammar_weights: dict[str, dict[str, float]] = Field(
        default_factory=lambda: {key: dict(value) for key, value in DEFAULT_OVERRIDES.items()},
    )
    min_objects: int = Field(2, ge=1)
    max_objects: int = Field(5, ge=1)
    complexity_threshold: int = Field(10, ge=1)
    val_fraction: float = Field(0.1, gt=0, lt=1)
    concept_iid_test_fraction: float = Field(0.2, gt=0, lt=1)
    counting_pairs: int = Field(5, ge=1)
    disjoint_episodes: bool = True
    threads: int | None = Field(None, ge=1)

    @field_validator("split_kinds", mode="before")
    @classmethod
    def _split_list(cls, value: Any) -> Any:  # noqa: ANN401
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @model_validator(mode="after")
    def _check_ranges(self) -> RunConfig:
        if self.min_objects > self.max_objects:
            msg = f"min_objects ({self.min_objects}) exceeds max_objects ({self.max_objects})"
            raise ValueError(msg)
        self.grammar()
        return self

    def grammar(self) -> GrammarConfig:
        """Return the grammar configuration of this run."""
        return GrammarConfig(weights=self.grammar_weights, max_depth=self.max_depth, seed=self.seed)

    @classmethod
    def paper_scale(cls) -> RunConfig:
        """Return the configuration at the scale of the published benchmark, kept for reference."""
        return cls(
            raw_concepts=2_000_000,
            pool_size=990_000,
            episodes_train=500_000,
            episodes_val=5_000,
            episodes_test=20_000,
        )

    @classmethod
    def from_file(cls, path: Path, **overrides: Any) -> RunConfig:  # noqa: ANN401
        """Load a flat `key = value` configuration file.

        Lines starting with `#` are comments, lists are comma separated, and production weights are
        given as `weight.<NONTERMINAL>.<label> = <float>`.

        Args:
            path (Path): The configuration file.
            **overrides (Any): Values that take precedence over the file, e.g. from the command line.

        Returns:
            RunConfig: The validated configuration.
        """
        try:
            lines = path.read_text().splitlines()
        except OSError as e:
            raise ConfigFileError(message=f"Cannot read config file {path}: {e}") from e
        values: dict[str, Any] = {}
        weights: dict[str, dict[str, float]] = {}
        for number, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigFileError(message=f"{path}:{number}: expected 'key = value', got {raw!r}")
            # Split on the last "=": production labels such as `C=` contain one.
            key, _, value = (part.strip() for part in line.rpartition("="))
            if key.startswith(_WEIGHT_PREFIX):
                symbol, _, label = key[len(_WEIGHT_PREFIX) :].partition(".")
                try:
                    weights.setdefault(symbol, {})[label] = float(value)
                except ValueError as e:
                    raise ConfigFileError(message=f"{path}:{number}: weight must be a number") from e
            else:
                values[key] = value
        if weights:
            merged = {key: dict(value) for key, value in DEFAULT_OVERRIDES.items()}
            for symbol, table in weights.items():
                merged.setdefault(symbol, {}).update(table)
            values["grammar_weights"] = merged
        values.update({key: value for key, value in overrides.items() if value is not None})
        unknown = set(values) - set(cls.model_fields)
        if unknown:
            raise ConfigFileError(message=f"{path}: unknown keys {sorted(unknown)}")
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            raise ConfigFileError(message=f"{path}: {e}") from e
