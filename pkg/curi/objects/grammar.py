"""This module contains the production table of the concept grammar and its configuration.

Every right-hand side is written in postfix order: operands precede their operator, so a left-to-right
expansion of a derivation emits the postfix token string directly. `START` omits the `λ S.` binder,
which is implicit in every concept and never serialized.
"""

from __future__ import annotations

from functools import lru_cache
from types import MappingProxyType
from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from curi.objects.common import COLORS, LOCATIONS, MATERIALS, NUMBERS, SHAPES, SIZES

if TYPE_CHECKING:
    from collections.abc import Mapping


class Production(BaseModel):
    """A class that represents one alternative of a nonterminal."""

    model_config = ConfigDict(frozen=True)

    label: str
    rhs: tuple[str, ...]


def _literals(values: tuple[object, ...]) -> list[Production]:
    return [Production(label=f"literal:{value}", rhs=(str(value),)) for value in values]


# (value nonterminal, set-accessor nonterminal, accessor nonterminal)
_TYPED = (
    ("C", "SETFC", "FC"),
    ("SH", "SETFSH", "FSH"),
    ("M", "SETFM", "FM"),
    ("SI", "SETFSI", "FSI"),
    ("L", "SETFL", "FL"),
)

_RAW: dict[str, list[Production]] = {
    "START": [
        Production(label="exists", rhs=("BOOL", "exists=")),
        Production(label="for-all", rhs=("BOOL", "for-all=")),
    ],
    "BOOL": [
        Production(label="and", rhs=("BOOL", "BOOL", "and")),
        Production(label="or", rhs=("BOOL", "BOOL", "or")),
        Production(label="not", rhs=("BOOL", "not")),
        *(Production(label=f"{value}=", rhs=(value, value, "=")) for value in ("C", "SH", "M", "SI", "L", "NUM")),
        *(Production(label=f"{value}>", rhs=(value, value, ">")) for value in ("SI", "L", "NUM")),
        *(Production(label=f"all:{value}", rhs=(setf, value, "all")) for value, setf, _ in _TYPED),
        *(Production(label=f"any:{value}", rhs=(setf, value, "any")) for value, setf, _ in _TYPED),
    ],
    "NUM": [
        *(Production(label=f"count:{value}", rhs=(setf, value, "count=")) for value, setf, _ in _TYPED),
        *_literals(NUMBERS),
    ],
    **{setf: [Production(label="set", rhs=("SET", accessor))] for _, setf, accessor in _TYPED},
    "C": [*_literals(COLORS), Production(label="object", rhs=("OBJECT", "FC"))],
    "SH": [*_literals(SHAPES), Production(label="object", rhs=("OBJECT", "FSH"))],
    "M": [*_literals(MATERIALS), Production(label="object", rhs=("OBJECT", "FM"))],
    "SI": [*_literals(SIZES), Production(label="object", rhs=("OBJECT", "FSI"))],
    "L": [*_literals(LOCATIONS), Production(label="object", rhs=("OBJECT", "FL"))],
    "FC": [Production(label="color?", rhs=("color?",))],
    "FSH": [Production(label="shape?", rhs=("shape?",))],
    "FM": [Production(label="material?", rhs=("material?",))],
    "FSI": [Production(label="size?", rhs=("size?",))],
    "FL": [Production(label="locationX?", rhs=("locationX?",)), Production(label="locationY?", rhs=("locationY?",))],
    "OBJECT": [Production(label="x", rhs=("x",))],
    "SET": [Production(label="S", rhs=("S",)), Production(label="S_{-x}", rhs=("S_{-x}",))],
}

PRODUCTIONS: Mapping[str, tuple[Production, ...]] = MappingProxyType({key: tuple(value) for key, value in _RAW.items()})
START = "START"

# Human-learnability default: disjunctions are sampled half as often as conjunctions.
DEFAULT_OVERRIDES: dict[str, dict[str, float]] = {"BOOL": {"and": 1.0, "or": 0.5}}


def is_nonterminal(symbol: str) -> bool:
    """Return whether a grammar symbol is a nonterminal."""
    return symbol in PRODUCTIONS


@lru_cache(maxsize=1)
def minimal_heights() -> Mapping[str, int]:
    """Compute, for every nonterminal, the height of its shallowest complete derivation.

    A terminal has height 0; a nonterminal is one level above the tallest symbol of its best alternative.

    Returns:
        Mapping[str, int]: The minimal height per nonterminal.
    """
    heights: dict[str, int] = {}
    changed = True
    while changed:
        changed = False
        for symbol, alternatives in PRODUCTIONS.items():
            for production in alternatives:
                children = [heights.get(child) if is_nonterminal(child) else 0 for child in production.rhs]
                if any(child is None for child in children):
                    continue
                height = 1 + max(child for child in children if child is not None)
                if symbol not in heights or height < heights[symbol]:
                    heights[symbol] = height
                    changed = True
    return MappingProxyType(heights)


def production_height(production: Production) -> int:
    """Return the minimal height of a derivation that starts with the given production."""
    heights = minimal_heights()
    return 1 + max(heights[child] if is_nonterminal(child) else 0 for child in production.rhs)


class GrammarConfig(BaseModel):
    """A class that represents the sampling configuration of the concept grammar.

    `weights` holds per-alternative overrides keyed by nonterminal and production label; alternatives
    not listed weigh 1.0 before normalization.
    """

    weights: dict[str, dict[str, float]] = Field(
        default_factory=lambda: {k: dict(v) for k, v in DEFAULT_OVERRIDES.items()},
    )
    max_depth: int = 6
    seed: int = 0

    @field_validator("max_depth")
    @classmethod
    def _check_depth(cls, value: int) -> int:
        if value < minimal_heights()[START]:
            msg = f"max_depth must be at least {minimal_heights()[START]}, got {value}"
            raise ValueError(msg)
        return value

    @model_validator(mode="after")
    def _check_weights(self) -> GrammarConfig:
        for symbol, overrides in self.weights.items():
            if symbol not in PRODUCTIONS:
                msg = f"unknown nonterminal {symbol!r}"
                raise ValueError(msg)
            labels = {production.label for production in PRODUCTIONS[symbol]}
            for label, weight in overrides.items():
                if label not in labels:
                    msg = f"unknown production {symbol}.{label}"
                    raise ValueError(msg)
                if not weight > 0:
                    msg = f"weight of {symbol}.{label} must be positive, got {weight}"
                    raise ValueError(msg)
        return self

    def table(self) -> dict[str, tuple[float, ...]]:
        """Return the normalized probability of every alternative, aligned with `PRODUCTIONS`.

        Returns:
            dict[str, tuple[float, ...]]: Probabilities per nonterminal, summing to 1.
        """
        table = {}
        for symbol, alternatives in PRODUCTIONS.items():
            overrides = self.weights.get(symbol, {})
            raw = [overrides.get(production.label, 1.0) for production in alternatives]
            total = sum(raw)
            table[symbol] = tuple(weight / total for weight in raw)
        return table
