"""This module contains the vocabulary shared by concepts and scenes."""

from __future__ import annotations

from typing import Literal

COLORS: tuple[str, ...] = ("gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow")
SHAPES: tuple[str, ...] = ("cube", "sphere", "cylinder")
MATERIALS: tuple[str, ...] = ("rubber", "metal")
# Ordinal: small < large.
SIZES: tuple[str, ...] = ("small", "large")
LOCATIONS: tuple[int, ...] = tuple(range(1, 9))
NUMBERS: tuple[int, ...] = (1, 2, 3)

GRID_CELLS = len(LOCATIONS) * len(LOCATIONS)

Domain = Literal["color", "shape", "material", "size", "int"]
Accessor = Literal["color?", "shape?", "material?", "size?", "locationX?", "locationY?"]
Quantifier = Literal["exists", "for-all"]

ACCESSORS: tuple[Accessor, ...] = ("color?", "shape?", "material?", "size?", "locationX?", "locationY?")

# Column of each accessor in the packed (object, property) layout.
ACCESSOR_COLUMN: dict[str, int] = {
    "color?": 0,
    "shape?": 1,
    "material?": 2,
    "size?": 3,
    "locationX?": 4,
    "locationY?": 5,
}

ACCESSOR_DOMAIN: dict[str, Domain] = {
    "color?": "color",
    "shape?": "shape",
    "material?": "material",
    "size?": "size",
    "locationX?": "int",
    "locationY?": "int",
}

CATEGORICAL_DOMAINS: dict[str, tuple[str, ...]] = {
    "color": COLORS,
    "shape": SHAPES,
    "material": MATERIALS,
    "size": SIZES,
}

QUANTIFIER_TOKENS: dict[str, Quantifier] = {"exists=": "exists", "for-all=": "for-all"}
VARIABLE_TOKENS: tuple[str, ...] = ("x", "S", "S_{-x}")
CONNECTIVE_TOKENS: tuple[str, ...] = ("and", "or", "not")
COMPARISON_TOKENS: tuple[str, ...] = ("=", ">")
SET_TEST_TOKENS: tuple[str, ...] = ("all", "any")
COUNT_TOKEN = "count="


def constant_domain(token: str) -> Domain | None:
    """Return the value domain of a constant token.

    Args:
        token (str): The token to look up.

    Returns:
        Domain | None: The domain, or None when the token is not a constant.
    """
    for domain, values in CATEGORICAL_DOMAINS.items():
        if token in values:
            return domain  # type: ignore[return-value]
    if token.isdigit() and int(token) in LOCATIONS:
        return "int"
    return None


def constant_code(token: str) -> int:
    """Return the integer code a constant token is compared with.

    Categorical values are coded by their index in the domain tuple; integers by their value.

    Args:
        token (str): The constant token.

    Returns:
        int: The comparable code.
    """
    for values in CATEGORICAL_DOMAINS.values():
        if token in values:
            return values.index(token)
    return int(token)


VOCABULARY: frozenset[str] = frozenset(
    (
        *QUANTIFIER_TOKENS,
        *VARIABLE_TOKENS,
        *CONNECTIVE_TOKENS,
        *COMPARISON_TOKENS,
        *SET_TEST_TOKENS,
        COUNT_TOKEN,
        *ACCESSORS,
        *COLORS,
        *SHAPES,
        *MATERIALS,
        *SIZES,
        *(str(location) for location in LOCATIONS),
    ),
)
