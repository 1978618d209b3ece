"""Default holdout specifications and the test-side predicates of the structured splits."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from curi.grammar.postfix import serialize_postfix, walk
from curi.objects.common import CATEGORICAL_DOMAINS, LOCATIONS, NUMBERS
from curi.objects.concept import Compare, Concept, Constant, Count
from curi.objects.split import HoldoutSpec, SplitKind

if TYPE_CHECKING:
    from collections.abc import Iterator

BOOLEAN_PAIRS = [("green", "or"), ("purple", "and"), ("cyan", "and"), ("red", "or"), ("green", "and")]
INTRINSIC_PAIRS = [("green", "metal"), ("purple", "rubber"), ("cyan", "rubber"), ("red", "metal"), ("green", "rubber")]
# The published list is a subset shown for illustration; it is used as is.
EXTRINSIC_PAIRS = [
    ("7", "gray"),
    ("1", "red"),
    ("3", "purple"),
    ("1", "blue"),
    ("8", "cyan"),
    ("5", "yellow"),
    ("5", "green"),
    ("3", "yellow"),
    ("7", "purple"),
    ("2", "blue"),
    ("3", "cyan"),
]
BINDING_COLORS = ["purple", "cyan", "yellow"]
BINDING_SHAPES = ["cylinder"]
LOCATION_ACCESSORS = ["locationX?", "locationY?"]

PAIR_KINDS = frozenset({"boolean", "intrinsic", "extrinsic", "counting"})
TOKEN_KINDS = frozenset({"binding_color", "binding_shape"})


def counting_pairs(count: int = 5, seed: int = 0) -> list[tuple[str, str]]:
    """Draw the held-out (number, property value) pairs of the counting split.

    Args:
        count (int): How many pairs to hold out.
        seed (int): The seed of the draw.

    Returns:
        list[tuple[str, str]]: Pairs over the numbers 1-3 and every property constant, locations included.
    """
    values = [value for domain in CATEGORICAL_DOMAINS.values() for value in domain]
    values += [str(location) for location in LOCATIONS]
    candidates = [(str(number), value) for number in NUMBERS for value in values]
    chosen = np.random.default_rng(seed).choice(len(candidates), size=count, replace=False)
    return [candidates[int(i)] for i in sorted(chosen)]


def default_spec(  # noqa: PLR0911
    kind: SplitKind,
    *,
    complexity_threshold: int = 10,
    counting_count: int = 5,
    test_fraction: float = 0.2,
    val_fraction: float = 0.1,
    seed: int = 0,
) -> HoldoutSpec:
    """Return the default holdout specification of a split kind."""
    if kind == "boolean":
        return HoldoutSpec(kind=kind, pairs=BOOLEAN_PAIRS, val_fraction=val_fraction, seed=seed)
    if kind == "intrinsic":
        return HoldoutSpec(
            kind=kind,
            pairs=INTRINSIC_PAIRS,
            requires=["material?"],
            val_fraction=val_fraction,
            seed=seed,
        )
    if kind == "extrinsic":
        return HoldoutSpec(
            kind=kind,
            pairs=EXTRINSIC_PAIRS,
            requires=LOCATION_ACCESSORS,
            val_fraction=val_fraction,
            seed=seed,
        )
    if kind == "binding_color":
        return HoldoutSpec(kind=kind, tokens=BINDING_COLORS, val_fraction=val_fraction, seed=seed)
    if kind == "binding_shape":
        return HoldoutSpec(kind=kind, tokens=BINDING_SHAPES, val_fraction=val_fraction, seed=seed)
    if kind == "complexity":
        return HoldoutSpec(kind=kind, length_threshold=complexity_threshold, val_fraction=val_fraction, seed=seed)
    if kind == "counting":
        return HoldoutSpec(kind=kind, pairs=counting_pairs(counting_count), val_fraction=val_fraction, seed=seed)
    if kind == "concept_iid":
        return HoldoutSpec(kind=kind, test_fraction=test_fraction, val_fraction=val_fraction, seed=seed)
    return HoldoutSpec(kind=kind, val_fraction=val_fraction, seed=seed)


def count_pairs(concept: Concept) -> Iterator[tuple[str, str]]:
    """Yield the (number, value) pairs a concept counts, e.g. ("2", "gray") for `=(count=(color?(S), gray), 2)`."""
    for node in walk(concept):
        if not isinstance(node, Compare):
            continue
        for counted, other in ((node.left, node.right), (node.right, node.left)):
            if isinstance(counted, Count) and isinstance(counted.value, Constant) and isinstance(other, Constant):
                yield other.token, counted.value.token


def held_out(spec: HoldoutSpec, concept: Concept, length: int | None = None) -> bool:
    """Whether a concept belongs to the test side of a token-predicate split.

    Args:
        spec (HoldoutSpec): The holdout specification.
        concept (Concept): The concept.
        length (int | None): The postfix length, when already known.

    Returns:
        bool: True when the concept matches the holdout predicate.
    """
    tokens = serialize_postfix(concept)
    if spec.kind == "complexity":
        threshold = spec.length_threshold if spec.length_threshold is not None else 10
        return (len(tokens) if length is None else length) > threshold
    if spec.kind in TOKEN_KINDS:
        return any(token in tokens for token in spec.tokens)
    if spec.kind == "counting":
        held = {tuple(pair) for pair in spec.pairs}
        return any(pair in held for pair in count_pairs(concept))
    if spec.kind in PAIR_KINDS:
        present = set(tokens)
        if spec.requires and not present.intersection(spec.requires):
            return False
        return any(first in present and second in present for first, second in spec.pairs)
    return False
