"""Class-balanced accuracy and average precision."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from curi.exceptions import NoPositivesError, SingleClassError

if TYPE_CHECKING:
    from collections.abc import Sequence


def class_balanced_accuracy(
    scores: Sequence[float] | np.ndarray,
    labels: Sequence[int] | np.ndarray,
    threshold: float = 0.5,
) -> float:
    """Return the mean of the accuracies on the positive and on the negative examples.

    A score predicts positive only when it is strictly above the threshold, so a score of exactly 0.5
    predicts negative.

    Args:
        scores (Sequence[float] | np.ndarray): The predicted probabilities.
        labels (Sequence[int] | np.ndarray): The 0/1 labels, with both classes present.
        threshold (float): The decision threshold.

    Returns:
        float: The class-balanced accuracy in [0, 1].
    """
    predicted = np.asarray(scores, dtype=np.float64) > threshold
    labels = np.asarray(labels).astype(bool)
    positives, negatives = int(labels.sum()), int((~labels).sum())
    if positives == 0 or negatives == 0:
        raise SingleClassError(message="Class-balanced accuracy needs both positive and negative labels.")
    true_positive = int((predicted & labels).sum()) / positives
    true_negative = int((~predicted & ~labels).sum()) / negatives
    return (true_positive + true_negative) / 2


def average_precision(
    scores: Sequence[float] | np.ndarray,
    labels: Sequence[int] | np.ndarray,
    ids: Sequence[int] | np.ndarray | None = None,
) -> float:
    """Return the non-interpolated average precision of a ranking.

    Items are ranked by descending score; ties are broken by ascending scene id (position by default),
    so the result does not depend on input order when ids are given.

    Args:
        scores (Sequence[float] | np.ndarray): The predicted scores.
        labels (Sequence[int] | np.ndarray): The 0/1 labels.
        ids (Sequence[int] | np.ndarray | None): The scene ids used to break ties.

    Returns:
        float: The mean of the precision at the rank of every positive.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    ids = np.arange(len(scores)) if ids is None else np.asarray(ids)
    positives = int(labels.sum())
    if positives == 0:
        raise NoPositivesError(message="Average precision needs at least one positive label.")
    ranked = labels[np.lexsort((ids, -scores))]
    hits = np.cumsum(ranked)
    ranks = np.flatnonzero(ranked) + 1
    return float((hits[ranked] / ranks).sum() / positives)
