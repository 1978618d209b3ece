from __future__ import annotations

import numpy as np
import pytest

from curi import Curi
from curi.exceptions import EmptyHypothesisSetError
from curi.executor import evaluate
from curi.objects.episode import Episode, Example
from curi.objects.scene import ScenePool
from curi.objects.space import HypothesisSpace
from curi.oracle import FALLBACK_SCORE, length_weights
from curi.utils import substream

from .conftest import ANY_BLUE, BLUE, BLUE_CUBE, CUBE, TOY_CONCEPTS


def test_length_weights() -> None:
    assert length_weights([5]).tolist() == [1.0]
    weights = length_weights([5, 10])
    assert weights.sum() == pytest.approx(1.0)
    assert weights[0] / weights[1] == pytest.approx(np.e)
    assert length_weights([3, 3, 3]) == pytest.approx([1 / 3] * 3)


def test_length_weights_do_not_underflow() -> None:
    weights = length_weights([5000, 5005])
    assert np.isfinite(weights).all()
    assert weights.sum() == pytest.approx(1.0)


def test_empty_prior() -> None:
    with pytest.raises(EmptyHypothesisSetError):
        length_weights([])


def test_prior_sorts_ids(curi: Curi) -> None:
    prior = curi.oracle.prior([7, 2, 5], [9, 5, 5])
    assert prior.ids.tolist() == [2, 5, 7]
    assert prior.weights[0] == pytest.approx(prior.weights[1])
    assert prior.weights[2] < prior.weights[0]


@pytest.fixture
def episode(curi: Curi, pool: ScenePool, toy_space: HypothesisSpace) -> Episode:
    return curi.episodes.sample_episode(BLUE_CUBE, pool, toy_space, "hard", substream(2, "test"), idx=7)


def test_posterior_matches_brute_force(
    curi: Curi,
    pool: ScenePool,
    toy_space: HypothesisSpace,
    episode: Episode,
) -> None:
    prior = curi.oracle.prior(toy_space.ids, toy_space.lengths(toy_space.ids))
    posterior = curi.oracle.posterior(prior, episode, toy_space)
    consistent = [
        h
        for h in toy_space.ids
        if all(evaluate(toy_space.concept(h), pool[e.scene]) == bool(e.y) for e in episode.support)
    ]
    assert posterior.ids.tolist() == consistent
    assert BLUE_CUBE in consistent
    expected = np.exp(-0.2 * toy_space.lengths(consistent))
    assert np.allclose(posterior.weights, expected / expected.sum(), atol=1e-12)
    assert posterior.idx == 7
    assert not posterior.fallback


def test_direct_evaluation_agrees_with_truth_table(
    curi: Curi,
    pool: ScenePool,
    toy_space: HypothesisSpace,
    episode: Episode,
) -> None:
    prior = curi.oracle.prior(toy_space.ids, toy_space.lengths(toy_space.ids))
    scenes = [pool[e.scene] for e in episode.support]
    assert np.array_equal(
        curi.oracle.consistent_mask(prior, episode, toy_space),
        curi.oracle.consistent_mask(prior, episode, toy_space, scenes),
    )
    posterior = curi.oracle.posterior(prior, episode, toy_space)
    positions = [e.scene for e in episode.query]
    table_scores = curi.oracle.predict(posterior, toy_space.truth, positions)
    direct_scores = [curi.oracle.predictive(posterior, pool[p], toy_space) for p in positions]
    assert np.allclose(table_scores, direct_scores)


def test_query_positives_score_high(curi: Curi, toy_space: HypothesisSpace, episode: Episode) -> None:
    prior = curi.oracle.prior(toy_space.ids, toy_space.lengths(toy_space.ids))
    record = curi.oracle.score_episode(prior, episode, toy_space)
    assert len(record.scores) == len(episode.query)
    assert all(0.0 <= score <= 1.0 for score in record.scores)
    labels = episode.labels("query")
    # The episode concept is consistent, so every positive gets at least its posterior weight.
    assert min(s for s, y in zip(record.scores, labels) if y) > 0.0


def test_fallback_scores_half(curi: Curi, pool: ScenePool, toy_space: HypothesisSpace) -> None:
    sampled = curi.episodes.sample_episode(BLUE, pool, toy_space, "easy", substream(0, "test"))
    flipped = sampled.model_copy(
        update={"support": [Example(scene=e.scene, y=1 - e.y) for e in sampled.support]},  # type: ignore[arg-type]
    )
    prior = curi.oracle.prior([BLUE], toy_space.lengths([BLUE]), "weak")
    posterior = curi.oracle.posterior(prior, flipped, toy_space)
    assert posterior.fallback
    assert posterior.consistent == 0
    assert curi.oracle.predictive(posterior, pool[0], toy_space) == FALLBACK_SCORE
    record = curi.oracle.score_episode(prior, flipped, toy_space)
    assert record.fallback
    assert record.scores == [FALLBACK_SCORE] * len(flipped.query)


def test_synonyms_share_posterior_mass(curi: Curi, toy_space: HypothesisSpace, episode: Episode) -> None:
    prior = curi.oracle.prior([BLUE, ANY_BLUE], toy_space.lengths([BLUE, ANY_BLUE]))
    posterior = curi.oracle.posterior(prior, episode, toy_space)
    assert posterior.consistent in (0, 2)


def test_instance_iid_oracles_agree(curi: Curi, toy_space: HypothesisSpace, episode: Episode) -> None:
    assignment = curi.splits.assign(toy_space, "instance_iid")
    strong = curi.oracle.split_prior(assignment, toy_space, "strong")
    weak = curi.oracle.split_prior(assignment, toy_space, "weak")
    assert np.array_equal(strong.ids, weak.ids)
    assert np.array_equal(strong.weights, weak.weights)
    assert curi.oracle.score_episode(strong, episode, toy_space).scores == (
        curi.oracle.score_episode(weak, episode, toy_space).scores
    )


def test_weak_prior_excludes_test_concepts(curi: Curi, toy_space: HypothesisSpace) -> None:
    assignment = curi.splits.assign(toy_space, "concept_iid")
    strong = curi.oracle.split_prior(assignment, toy_space, "strong")
    weak = curi.oracle.split_prior(assignment, toy_space, "weak")
    assert strong.ids.tolist() == toy_space.ids
    assert weak.ids.tolist() == assignment.non_test()
    assert not set(weak.ids.tolist()) & set(assignment.test)


def test_more_evidence_never_grows_the_consistent_set(
    curi: Curi,
    toy_space: HypothesisSpace,
    episode: Episode,
) -> None:
    prior = curi.oracle.prior(toy_space.ids, toy_space.lengths(toy_space.ids))
    previous = len(toy_space)
    for size in range(1, len(episode.support) + 1):
        partial = episode.model_copy(update={"support": episode.support[:size]})
        consistent = curi.oracle.posterior(prior, partial, toy_space).consistent
        assert consistent <= previous
        previous = consistent


def test_prior_examples_rank_by_weight(curi: Curi, toy_space: HypothesisSpace) -> None:
    prior = curi.oracle.prior(toy_space.ids, toy_space.lengths(toy_space.ids))
    examples = curi.oracle.prior_examples(prior, toy_space, k=3)
    assert len(examples) == 3
    assert [example.concept_id for example in examples] == [BLUE, CUBE, 3]
    assert examples[0].weight == pytest.approx(examples[1].weight)
    assert all(example.length == len(TOY_CONCEPTS[example.concept_id].split()) for example in examples)
