"""This module provides a class that computes evaluation metrics and the compositionality gap."""

from __future__ import annotations

from typing import TYPE_CHECKING, Literal

import numpy as np

from curi.base.component import BaseComponent
from curi.exceptions import InsufficientScenesError, MismatchedEpisodesError
from curi.executor import evaluate
from curi.metrics.ranking import average_precision, class_balanced_accuracy
from curi.objects.metrics import MapPool, MetricsReport, OracleSummary
from curi.objects.scene import ScenePool
from curi.utils import substream

if TYPE_CHECKING:
    from collections.abc import Sequence

    from curi.objects.config import NegativesMode
    from curi.objects.episode import Episode
    from curi.objects.oracle import OracleKind, OracleRecord
    from curi.objects.scene import Scene
    from curi.objects.space import HypothesisSpace
    from curi.objects.split import SplitKind

MAP_POOL_TAG = "mappool"
MAX_FRESH_ATTEMPTS = 100_000

Metric = Literal["map", "cba"]

__all__ = ("Metrics", "average_precision", "class_balanced_accuracy")


def _check_aligned(records: Sequence[OracleRecord], episodes: Sequence[Episode]) -> None:
    if [record.idx for record in records] != [episode.idx for episode in episodes]:
        raise MismatchedEpisodesError(message="Scores and episodes do not refer to the same episodes.")


class Metrics(BaseComponent):
    """A class that scores oracle predictions and compares the strong and weak oracles."""

    def class_balanced_accuracy(
        self,
        scores: Sequence[float] | np.ndarray,
        labels: Sequence[int] | np.ndarray,
        threshold: float = 0.5,
    ) -> float:
        """Return the class-balanced accuracy of scores against labels."""
        return class_balanced_accuracy(scores, labels, threshold)

    def average_precision(
        self,
        scores: Sequence[float] | np.ndarray,
        labels: Sequence[int] | np.ndarray,
        ids: Sequence[int] | np.ndarray | None = None,
    ) -> float:
        """Return the average precision of scores against labels."""
        return average_precision(scores, labels, ids)

    def build_map_pool(
        self,
        space: HypothesisSpace,
        pool: ScenePool,
        k: int | None = None,
        seed: int | None = None,
    ) -> MapPool:
        """Build the mAP scene pool: k true scenes per concept, deduplicated.

        True scenes come from the filter pool; a concept with fewer than k of them gets freshly sampled
        scenes, drawn until one satisfies it.

        Args:
            space (HypothesisSpace): The space.
            pool (ScenePool): The filter pool.
            k (int | None): Scenes per concept. Defaults to the run configuration.
            seed (int | None): The seed of the draw. Defaults to the run configuration.

        Returns:
            MapPool: The scenes and the truth table of every concept over them.
        """
        k = k or self.curi.config.map_k
        seed = self.curi.config.seed if seed is None else seed
        positions: set[int] = set()
        fresh: list[Scene] = []
        for index, concept_id in enumerate(space.ids):
            rng = substream(seed, MAP_POOL_TAG, index)
            true_positions = np.flatnonzero(space.truth.row(concept_id))
            take = min(k, len(true_positions))
            positions.update(int(p) for p in rng.choice(true_positions, size=take, replace=False))
            if take < k:
                fresh.extend(self._fresh_positives(space, concept_id, k - take, seed, len(pool) + len(fresh)))

        scenes = [pool[p] for p in sorted(positions)] + fresh
        sources: list[int | None] = [*sorted(positions), *([None] * len(fresh))]
        slots = max(pool.mask.shape[1], 1)
        table = self.curi.executor.truth_table(
            [(concept_id, space.concept(concept_id)) for concept_id in space.ids],
            ScenePool.from_scenes(scenes, slots=slots),
        )
        self.log("info", f"Built an mAP pool of {len(scenes)} scenes ({len(fresh)} fresh) for {len(space)} concepts.")
        return MapPool(k=k, scenes=scenes, sources=sources, truth=table)

    def _fresh_positives(
        self,
        space: HypothesisSpace,
        concept_id: int,
        count: int,
        seed: int,
        first_id: int,
    ) -> list[Scene]:
        concept = space.concept(concept_id)
        found: list[Scene] = []
        tag = f"{MAP_POOL_TAG}:{concept_id}"
        for attempt in range(MAX_FRESH_ATTEMPTS):
            scene = self.curi.scenes.fresh_scene(seed, tag, attempt, first_id + len(found))
            if evaluate(concept, scene):
                found.append(scene)
                if len(found) == count:
                    return found
        msg = f"No fresh scene satisfies concept {concept_id} after {MAX_FRESH_ATTEMPTS} attempts."
        raise InsufficientScenesError(message=msg)

    def map_over_episodes(
        self,
        records: Sequence[OracleRecord],
        map_pool: MapPool,
        episodes: Sequence[Episode],
    ) -> float:
        """Return the mean average precision of per-episode scores over the mAP pool.

        Args:
            records (Sequence[OracleRecord]): Scores over the mAP pool, one record per episode.
            map_pool (MapPool): The mAP pool.
            episodes (Sequence[Episode]): The episodes, aligned with the records.

        Returns:
            float: The mean of the per-episode average precisions.
        """
        _check_aligned(records, episodes)
        precisions = np.array(
            [self.episode_precision(record.scores, map_pool, episode) for record, episode in zip(records, episodes)],
        )
        return float(precisions.mean()) if len(precisions) else 0.0

    def cba_over_episodes(self, records: Sequence[OracleRecord], episodes: Sequence[Episode]) -> float:
        """Return the mean class-balanced accuracy of per-episode scores on the query sets."""
        _check_aligned(records, episodes)
        accuracies = np.array(
            [
                class_balanced_accuracy(record.scores, episode.labels("query"))
                for record, episode in zip(records, episodes)
            ],
        )
        return float(accuracies.mean()) if len(accuracies) else 0.0

    def episode_precision(self, scores: Sequence[float] | np.ndarray, map_pool: MapPool, episode: Episode) -> float:
        """Return the average precision of one episode's scores over the mAP pool."""
        return average_precision(scores, map_pool.truth.row(episode.concept_id), map_pool.ids)

    def summarize(
        self,
        oracle: OracleKind,
        query_records: Sequence[OracleRecord],
        precisions: Sequence[float],
        episodes: Sequence[Episode],
    ) -> OracleSummary:
        """Summarize one oracle over a set of episodes.

        Args:
            oracle (OracleKind): The oracle.
            query_records (Sequence[OracleRecord]): Scores on the query sets, one record per episode.
            precisions (Sequence[float]): The average precision of every episode over the mAP pool.
            episodes (Sequence[Episode]): The episodes.

        Returns:
            OracleSummary: mAP, class-balanced accuracy and fallback fraction.
        """
        if len(precisions) != len(episodes):
            raise MismatchedEpisodesError(message="Expected one average precision per episode.")
        fallbacks = sum(record.fallback for record in query_records)
        return OracleSummary(
            oracle=oracle,
            episodes=[episode.idx for episode in episodes],
            map=float(np.mean(precisions)) if len(precisions) else 0.0,
            cba=self.cba_over_episodes(query_records, episodes),
            fallback=fallbacks / len(episodes) if episodes else 0.0,
        )

    def comp_gap(self, strong: OracleSummary, weak: OracleSummary, metric: Metric) -> float:
        """Return the signed difference of a metric between the strong and the weak oracle."""
        if strong.episodes != weak.episodes:
            raise MismatchedEpisodesError(message="The strong and weak summaries cover different episodes.")
        if metric == "map":
            return strong.map_ - weak.map_
        return strong.cba - weak.cba

    def report(
        self,
        split: SplitKind,
        negatives: NegativesMode,
        strong: OracleSummary,
        weak: OracleSummary,
        seed: int,
    ) -> MetricsReport:
        """Build the metrics report of one split and negatives mode."""
        report = MetricsReport(
            split=split,
            negatives=negatives,
            strong=strong,
            weak=weak,
            gap={"map": self.comp_gap(strong, weak, "map"), "cba": self.comp_gap(strong, weak, "cba")},
            fallback=weak.fallback,
            episodes=len(strong.episodes),
            seed=seed,
        )
        self.log("info", f"Split {split} ({negatives}): gap mAP {report.gap['map']:.4f}, CBA {report.gap['cba']:.4f}.")
        return report
