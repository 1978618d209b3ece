"""This module provides a class that performs exact Bayesian inference over a hypothesis space."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from curi.base.component import BaseComponent
from curi.exceptions import EmptyHypothesisSetError
from curi.executor import evaluate
from curi.grammar.postfix import pretty_print
from curi.objects.oracle import OracleKind, OraclePosterior, OraclePrior, OracleRecord, PriorExample
from curi.utils import parallel_map

if TYPE_CHECKING:
    from collections.abc import Sequence

    from curi.objects.episode import Episode
    from curi.objects.scene import Scene
    from curi.objects.signature import TruthTable
    from curi.objects.space import HypothesisSpace
    from curi.objects.split import SplitAssignment

LENGTH_DECAY = 0.2
FALLBACK_SCORE = 0.5


def length_weights(lengths: Sequence[int] | np.ndarray) -> np.ndarray:
    """Return the normalized length prior `exp(-0.2 * length)` of a set of hypotheses.

    The exponent is shifted by the shortest length before exponentiation; the shift cancels on
    normalization.
    """
    lengths = np.asarray(lengths, dtype=np.float64)
    if lengths.size == 0:
        raise EmptyHypothesisSetError(message="Cannot build a prior over an empty hypothesis set.")
    weights = np.exp(-LENGTH_DECAY * (lengths - lengths.min()))
    return weights / weights.sum()


class BayesOracle(BaseComponent):
    """A class that computes strong and weak oracle priors, posteriors and predictive scores."""

    def prior(
        self,
        ids: Sequence[int] | np.ndarray,
        lengths: Sequence[int] | np.ndarray,
        kind: OracleKind = "strong",
    ) -> OraclePrior:
        """Build the length prior over a hypothesis set.

        Args:
            ids (Sequence[int] | np.ndarray): The hypothesis ids.
            lengths (Sequence[int] | np.ndarray): Their postfix lengths, aligned with ids.
            kind (OracleKind): Which oracle the prior belongs to.

        Returns:
            OraclePrior: The prior, with ids sorted ascending.
        """
        ids = np.asarray(ids, dtype=np.int64)
        lengths = np.asarray(lengths, dtype=np.int64)
        order = np.argsort(ids, kind="stable")
        return OraclePrior(kind=kind, ids=ids[order], weights=length_weights(lengths[order]))

    def split_prior(self, assignment: SplitAssignment, space: HypothesisSpace, kind: OracleKind) -> OraclePrior:
        """Build the prior of an oracle on a split.

        The strong oracle knows every concept of the split; the weak one only the non-test concepts.
        """
        ids = sorted({*assignment.non_test(), *assignment.test}) if kind == "strong" else assignment.non_test()
        return self.prior(ids, space.lengths(ids), kind)

    def consistent_mask(
        self,
        prior: OraclePrior,
        episode: Episode,
        space: HypothesisSpace,
        scenes: Sequence[Scene] | None = None,
    ) -> np.ndarray:
        """Return which hypotheses of a prior reproduce every support label of an episode.

        Args:
            prior (OraclePrior): The prior.
            episode (Episode): The episode.
            space (HypothesisSpace): The space, whose truth table covers the filter pool.
            scenes (Sequence[Scene] | None): The support scenes, when they do not come from the filter
                pool. They are then evaluated directly.

        Returns:
            np.ndarray: A boolean mask aligned with `prior.ids`.
        """
        labels = np.array(episode.labels("support"), dtype=bool)
        if scenes is None:
            positions = [example.scene for example in episode.support]
            truth = space.truth.columns(positions, prior.ids)
        else:
            truth = np.array(
                [[evaluate(space.concept(int(h)), scene) for scene in scenes] for h in prior.ids],
                dtype=bool,
            ).reshape(len(prior.ids), len(scenes))
        return (truth == labels).all(axis=1)

    def posterior(
        self,
        prior: OraclePrior,
        episode: Episode,
        space: HypothesisSpace,
        scenes: Sequence[Scene] | None = None,
    ) -> OraclePosterior:
        """Condition a prior on the support set of an episode under the noise-free likelihood.

        Args:
            prior (OraclePrior): The prior.
            episode (Episode): The episode.
            space (HypothesisSpace): The space.
            scenes (Sequence[Scene] | None): The support scenes, when not in the filter pool.

        Returns:
            OraclePosterior: The consistent hypotheses and their renormalized weights; the fallback flag
            is set when none is consistent.
        """
        mask = self.consistent_mask(prior, episode, space, scenes)
        if not mask.any():
            self.log("debug", f"Episode {episode.idx}: no {prior.kind} hypothesis is consistent.")
            empty = np.zeros(0, dtype=np.int64)
            return OraclePosterior(
                idx=episode.idx,
                kind=prior.kind,
                ids=empty,
                weights=empty.astype(np.float64),
                fallback=True,
            )
        weights = prior.weights[mask]
        return OraclePosterior(idx=episode.idx, kind=prior.kind, ids=prior.ids[mask], weights=weights / weights.sum())

    def predictive(self, posterior: OraclePosterior, scene: Scene, space: HypothesisSpace) -> float:
        """Return the posterior probability that a scene is a positive, by direct evaluation."""
        if posterior.fallback:
            return FALLBACK_SCORE
        truth = np.array([evaluate(space.concept(int(h)), scene) for h in posterior.ids], dtype=np.float64)
        return float(posterior.weights @ truth)

    def predict(
        self,
        posterior: OraclePosterior,
        table: TruthTable,
        positions: Sequence[int] | np.ndarray | None = None,
    ) -> np.ndarray:
        """Return the predictive probabilities of many scenes from a truth table.

        Args:
            posterior (OraclePosterior): The posterior.
            table (TruthTable): A truth table holding every consistent hypothesis.
            positions (Sequence[int] | np.ndarray | None): Scene positions in the table. Defaults to all.

        Returns:
            np.ndarray: One probability per scene.
        """
        count = table.scene_count if positions is None else len(positions)
        if posterior.fallback:
            return np.full(count, FALLBACK_SCORE)
        if positions is None:
            truth = table.rows(posterior.ids)
        else:
            truth = table.columns(positions, posterior.ids)
        return posterior.weights @ truth.astype(np.float64)

    def score_episode(
        self,
        prior: OraclePrior,
        episode: Episode,
        space: HypothesisSpace,
        targets: TruthTable | None = None,
    ) -> OracleRecord:
        """Score the targets of an episode under one oracle.

        Args:
            prior (OraclePrior): The oracle's prior.
            episode (Episode): The episode.
            space (HypothesisSpace): The space.
            targets (TruthTable | None): The truth table of the scenes to score, e.g. the mAP pool.
                Defaults to the episode's query scenes.

        Returns:
            OracleRecord: The predictive score of every target, in target order.
        """
        posterior = self.posterior(prior, episode, space)
        if targets is None:
            scores = self.predict(posterior, space.truth, [example.scene for example in episode.query])
        else:
            scores = self.predict(posterior, targets)
        return OracleRecord(
            idx=episode.idx,
            oracle=prior.kind,
            consistent=posterior.consistent,
            fallback=posterior.fallback,
            scores=scores.tolist(),
        )

    def score_episodes(
        self,
        prior: OraclePrior,
        episodes: Sequence[Episode],
        space: HypothesisSpace,
        targets: TruthTable | None = None,
    ) -> list[OracleRecord]:
        """Score many episodes under one oracle, in episode order, using worker threads."""
        records = parallel_map(
            lambda episode: self.score_episode(prior, episode, space, targets),
            episodes,
            self.threads,
        )
        fallbacks = sum(record.fallback for record in records)
        self.log("info", f"Scored {len(records)} episodes with the {prior.kind} oracle ({fallbacks} fallbacks).")
        return records

    def prior_examples(self, prior: OraclePrior, space: HypothesisSpace, k: int = 10) -> list[PriorExample]:
        """Return the k highest-weight hypotheses of a prior, ties broken by id."""
        order = np.lexsort((prior.ids, -prior.weights))[:k]
        return [
            PriorExample(
                concept_id=int(prior.ids[i]),
                weight=float(prior.weights[i]),
                length=space.entry(int(prior.ids[i])).length,
                pretty=pretty_print(space.concept(int(prior.ids[i]))),
            )
            for i in order
        ]
