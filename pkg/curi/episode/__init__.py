"""This module provides a class that samples meta-learning episodes with hard or easy negatives."""

from __future__ import annotations

from typing import TYPE_CHECKING, Literal

import numpy as np
from pydantic import BaseModel, Field

from curi.base.component import BaseComponent
from curi.exceptions import InsufficientPositivesError, InsufficientScenesError
from curi.executor import evaluate
from curi.objects.episode import SUPPORT_NEGATIVES, SUPPORT_POSITIVES, Episode, Example
from curi.oracle import length_weights
from curi.utils import parallel_map, substream

if TYPE_CHECKING:
    from collections.abc import Sequence

    from curi.objects.config import NegativesMode
    from curi.objects.scene import Scene, ScenePool
    from curi.objects.space import HypothesisSpace
    from curi.objects.split import SplitAssignment

EPISODE_TAG = "episodes"

Side = Literal["train", "val", "test"]


class EpisodeFinding(BaseModel):
    """A class that represents one problem found while auditing an episode."""

    idx: int
    check: str
    message: str
    scenes: list[int] = Field(default_factory=list)


def draw_concept(ids: Sequence[int], lengths: Sequence[int] | np.ndarray, rng: np.random.Generator) -> int:
    """Draw a concept id in proportion to the length prior over a split side.

    Args:
        ids (Sequence[int]): The concept ids of the side.
        lengths (Sequence[int] | np.ndarray): Their postfix lengths.
        rng (np.random.Generator): The random stream.

    Returns:
        int: The drawn concept id.
    """
    if len(ids) == 1:
        return int(ids[0])
    return int(ids[int(rng.choice(len(ids), p=length_weights(lengths)))])


def _choose(rng: np.random.Generator, candidates: np.ndarray, count: int) -> np.ndarray:
    if count >= len(candidates):
        return rng.permutation(candidates)
    return rng.choice(candidates, size=count, replace=False)


class EpisodeSampler(BaseComponent):
    """A class that builds support and query sets for concepts of a hypothesis space."""

    def draw_concept(self, ids: Sequence[int], space: HypothesisSpace, rng: np.random.Generator) -> int:
        """Draw a concept of a split side from the length prior."""
        return draw_concept(ids, space.lengths(ids), rng)

    def find_alternatives(
        self,
        concept_id: int,
        positives: Sequence[int] | Sequence[Scene],
        space: HypothesisSpace,
    ) -> list[int]:
        """Return every other concept of the space that is true on all the given positives.

        Args:
            concept_id (int): The episode concept, never part of the result.
            positives (Sequence[int] | Sequence[Scene]): Filter pool positions, or scenes to evaluate
                directly.
            space (HypothesisSpace): The space.

        Returns:
            list[int]: The alternative concept ids, ascending. Synonyms of the concept are included.
        """
        if all(isinstance(positive, (int, np.integer)) for positive in positives):
            mask = space.truth.columns(np.asarray(positives, dtype=np.int64)).all(axis=1)
            candidates = space.truth.ids[mask]
        else:
            candidates = np.array(
                [h for h in space.ids if all(evaluate(space.concept(h), scene) for scene in positives)],  # type: ignore[arg-type]
                dtype=np.int64,
            )
        return [int(h) for h in candidates if h != concept_id]

    def _sample_set(
        self,
        concept_id: int,
        truth: np.ndarray,
        available: np.ndarray,
        space: HypothesisSpace,
        mode: NegativesMode,
        rng: np.random.Generator,
    ) -> tuple[list[Example], list[int]]:
        positives = _choose(rng, np.flatnonzero(truth & available), SUPPORT_POSITIVES)
        if len(positives) < SUPPORT_POSITIVES:
            msg = f"Concept {concept_id} has too few unused true scenes for {SUPPORT_POSITIVES} positives."
            raise InsufficientPositivesError(message=msg)
        negatives_pool = ~truth & available
        examples = [Example(scene=int(position), y=1) for position in positives]

        alternatives: list[int] = []
        hard = np.zeros(0, dtype=np.int64)
        if mode == "hard":
            alternatives = self.find_alternatives(concept_id, positives.tolist(), space)
            covered = space.truth.union(alternatives) & negatives_pool
            hard = _choose(rng, np.flatnonzero(covered), SUPPORT_NEGATIVES)
            if len(hard):
                # The first alternative (by id) true on a negative is recorded as its cover.
                cover = space.truth.columns(hard, alternatives).argmax(axis=0)
                examples.extend(
                    Example(scene=int(position), y=0, via=alternatives[int(k)]) for position, k in zip(hard, cover)
                )
            negatives_pool[hard] = False

        random = _choose(rng, np.flatnonzero(negatives_pool), SUPPORT_NEGATIVES - len(hard))
        if len(hard) + len(random) < SUPPORT_NEGATIVES:
            msg = f"Concept {concept_id} has too few unused false scenes for {SUPPORT_NEGATIVES} negatives."
            raise InsufficientScenesError(message=msg)
        examples.extend(Example(scene=int(position), y=0) for position in random)
        return examples, alternatives

    def sample_episode(
        self,
        concept_id: int,
        pool: ScenePool,
        space: HypothesisSpace,
        mode: NegativesMode,
        rng: np.random.Generator,
        *,
        idx: int = 0,
        disjoint: bool | None = None,
    ) -> Episode:
        """Sample the support and query sets of one episode.

        The query set repeats every step of the support set with the same concept, alternatives
        included. With `disjoint` set, no scene appears twice in the episode.

        Args:
            concept_id (int): The episode concept.
            pool (ScenePool): The filter pool the space's truth table covers.
            space (HypothesisSpace): The space.
            mode (NegativesMode): "hard" draws negatives satisfied by alternative concepts first.
            rng (np.random.Generator): The random stream.
            idx (int): The episode index.
            disjoint (bool | None): Whether scenes must be distinct. Defaults to the run configuration.

        Returns:
            Episode: The episode, positives first in each set.
        """
        disjoint = self.curi.config.disjoint_episodes if disjoint is None else disjoint
        if len(pool) != space.pool_size:
            msg = f"The pool has {len(pool)} scenes but the space was filtered on {space.pool_size}."
            raise InsufficientScenesError(message=msg)
        truth = space.truth.row(concept_id)
        needed = SUPPORT_POSITIVES * (2 if disjoint else 1)
        if int(truth.sum()) < needed:
            msg = f"Concept {concept_id} is true on {int(truth.sum())} scenes; {needed} positives are needed."
            raise InsufficientPositivesError(message=msg)

        available = np.ones(len(pool), dtype=bool)
        support, alt_support = self._sample_set(concept_id, truth, available, space, mode, rng)
        if disjoint:
            available[[example.scene for example in support]] = False
        query, alt_query = self._sample_set(concept_id, truth, available, space, mode, rng)
        return Episode(
            idx=idx,
            concept_id=concept_id,
            mode=mode,
            support=support,
            query=query,
            alt_support=alt_support,
            alt_query=alt_query,
        )

    def build_episode_set(
        self,
        assignment: SplitAssignment,
        side: Side,
        pool: ScenePool,
        space: HypothesisSpace,
        count: int,
        mode: NegativesMode,
        seed: int,
    ) -> list[Episode]:
        """Build the episodes of one side of a split.

        Episode i draws its concept and scenes from `substream(seed, "episodes:<kind>:<side>", i)`, so
        the output does not depend on the number of worker threads.

        Args:
            assignment (SplitAssignment): The split.
            side (Side): Which side the concepts are drawn from.
            pool (ScenePool): The filter pool.
            space (HypothesisSpace): The space.
            count (int): The number of episodes.
            mode (NegativesMode): The negatives mode.
            seed (int): The master seed.

        Returns:
            list[Episode]: The episodes, ordered by index.
        """
        ids = assignment.side(side)
        if not ids:
            self.log("warning", f"Split {assignment.kind} has no {side} concepts; no {side} episodes are built.")
            return []
        lengths = space.lengths(ids)
        tag = f"{EPISODE_TAG}:{assignment.kind}:{side}"

        def build(index: int) -> Episode:
            rng = substream(seed, tag, index)
            concept_id = draw_concept(ids, lengths, rng)
            episode = self.sample_episode(concept_id, pool, space, mode, rng, idx=index)
            return episode.model_copy(update={"split_kind": assignment.kind, "side": side})

        episodes = parallel_map(build, range(count), self.threads)
        self.log("info", f"Built {len(episodes)} {mode} {side} episodes for split {assignment.kind}.")
        return episodes

    def audit(self, episode: Episode, pool: ScenePool, space: HypothesisSpace) -> list[EpisodeFinding]:
        """Re-check an episode by evaluating its concept and recorded alternatives on its scenes.

        Args:
            episode (Episode): The episode.
            pool (ScenePool): The pool its scene ids refer to.
            space (HypothesisSpace): The space.

        Returns:
            list[EpisodeFinding]: Every problem found; empty when the episode is sound.
        """
        findings: list[EpisodeFinding] = []
        concept = space.concept(episode.concept_id)
        for part, alternatives in (("support", episode.alt_support), ("query", episode.alt_query)):
            examples: list[Example] = getattr(episode, part)
            positives = sum(example.y for example in examples)
            if positives != SUPPORT_POSITIVES or len(examples) - positives != SUPPORT_NEGATIVES:
                findings.append(
                    EpisodeFinding(
                        idx=episode.idx,
                        check="balance",
                        message=f"{part} has {positives} positives and {len(examples) - positives} negatives.",
                    ),
                )
            wrong = [example.scene for example in examples if evaluate(concept, pool[example.scene]) != bool(example.y)]
            if wrong:
                findings.append(
                    EpisodeFinding(idx=episode.idx, check="labels", message=f"{part} labels disagree.", scenes=wrong),
                )
            unsound = [
                example.scene
                for example in examples
                if example.via is not None
                and (
                    example.via not in alternatives
                    or not evaluate(space.concept(example.via), pool[example.scene])
                )
            ]
            if unsound:
                findings.append(
                    EpisodeFinding(
                        idx=episode.idx,
                        check="hard_negatives",
                        message=f"{part} hard negatives are not covered by their alternative.",
                        scenes=unsound,
                    ),
                )
        scenes = episode.scenes
        if self.curi.config.disjoint_episodes and len(set(scenes)) != len(scenes):
            findings.append(EpisodeFinding(idx=episode.idx, check="distinct", message="Scenes repeat."))
        return findings
