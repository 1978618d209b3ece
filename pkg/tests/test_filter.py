from __future__ import annotations

import numpy as np
import pytest

from curi import Curi
from curi.exceptions import EmptyPoolError, EmptySpaceError
from curi.filter import cluster_signatures, interesting
from curi.filter.rules import RejectReason, structural_reject
from curi.grammar.postfix import parse_postfix
from curi.objects.scene import ScenePool
from curi.objects.signature import EvaluationSignature
from curi.objects.space import HypothesisSpace, Thresholds

from .conftest import ANY_BLUE, BLUE, TOY_CONCEPTS


@pytest.mark.parametrize(
    ("tokens", "reason"),
    [
        ("S_{-x} color? blue any for-all=", RejectReason.FOR_ALL_WITH_COMPLEMENT),
        ("x color? x color? = exists=", RejectReason.SELF_COMPARISON),
        ("S color? x color? any exists=", RejectReason.SET_AGAINST_MEMBER),
        ("S shape? x shape? count= 2 = exists=", RejectReason.SET_AGAINST_MEMBER),
        ("S locationY? x locationX? any exists=", RejectReason.SET_AGAINST_MEMBER),
        ("S locationX? x locationY? all exists=", RejectReason.SET_AGAINST_MEMBER),
        ("S locationY? x locationX? count= 1 = exists=", RejectReason.SET_AGAINST_MEMBER),
        ("S_{-x} color? x color? any exists=", None),
        ("S_{-x} color? blue any exists=", None),
        ("blue x color? = exists=", None),
    ],
)
def test_structural_rules(tokens: str, reason: RejectReason | None) -> None:
    assert structural_reject(parse_postfix(tokens)) is reason


def _signature(true_count: int, size: int = 100) -> EvaluationSignature:
    bits = np.zeros(size, dtype=bool)
    bits[:true_count] = True
    return EvaluationSignature.from_bits(0, bits)


@pytest.mark.parametrize(("true_count", "expected"), [(9, False), (10, True), (11, False)])
def test_interestingness_bounds_are_inclusive(true_count: int, expected: bool) -> None:  # noqa: FBT001
    assert interesting(_signature(true_count), max_rate=0.10, min_true=10) is expected


def test_clusters_group_identical_bits() -> None:
    a = EvaluationSignature.from_bits(4, np.array([1, 0, 1, 0], dtype=bool))
    b = EvaluationSignature.from_bits(2, np.array([1, 0, 1, 0], dtype=bool))
    c = EvaluationSignature.from_bits(1, np.array([0, 1, 1, 0], dtype=bool))
    assert cluster_signatures([a, b, c]) == [[1], [2, 4]]


def test_build_space_keeps_synonyms_in_one_cluster(toy_space: HypothesisSpace) -> None:
    assert toy_space.ids == list(range(len(TOY_CONCEPTS)))
    assert toy_space.cluster_of(BLUE) == toy_space.cluster_of(ANY_BLUE)
    assert toy_space.provenance.accepted == len(TOY_CONCEPTS)
    assert toy_space.provenance.distinct_signatures == len(TOY_CONCEPTS) - 1
    assert sum(size * count for size, count in toy_space.cluster_histogram().items()) == len(toy_space)


def test_build_space_counts_rejections(curi: Curi, pool: ScenePool) -> None:
    tokens = [
        "blue x color? = exists=",
        "blue x color? = exists=",
        "x color? x color? = exists=",
        "S_{-x} color? blue any for-all=",
        "blue x color? = not for-all=",
    ]
    space = curi.filter.build_space([parse_postfix(t) for t in tokens], pool, Thresholds(max_rate=0.5, min_true=10))
    rejected = space.provenance.rejected
    assert rejected["duplicate"] == 1
    assert rejected["R2"] == 1
    assert rejected["R1"] == 1
    assert rejected["too_frequent"] == 1
    assert space.ids == [0]
    assert space.provenance.raw_count == len(tokens)


def test_build_space_keeps_given_ids(curi: Curi, pool: ScenePool) -> None:
    concepts = [parse_postfix(TOY_CONCEPTS[0]), parse_postfix(TOY_CONCEPTS[1])]
    space = curi.filter.build_space(concepts, pool, Thresholds(max_rate=1.0, min_true=1), ids=[40, 12])
    assert space.ids == [12, 40]
    assert space.concept(40) == concepts[0]


def test_accepted_signatures_match_execution(curi: Curi, pool: ScenePool, toy_space: HypothesisSpace) -> None:
    for entry in toy_space.entries:
        assert np.array_equal(toy_space.truth.row(entry.concept_id), curi.executor.evaluate_pool(entry.concept, pool))


def test_empty_space(curi: Curi, pool: ScenePool) -> None:
    with pytest.raises(EmptySpaceError):
        curi.filter.build_space([parse_postfix(TOY_CONCEPTS[0])], pool, Thresholds(max_rate=1.0, min_true=10_000))


def test_empty_pool(curi: Curi) -> None:
    with pytest.raises(EmptyPoolError):
        curi.filter.build_space([parse_postfix(TOY_CONCEPTS[0])], ScenePool.from_scenes([]))


def test_cluster_stats(curi: Curi, toy_space: HypothesisSpace) -> None:
    stats = curi.filter.synonym_clusters(toy_space)
    assert stats.clusters == len(TOY_CONCEPTS) - 1
    assert stats.largest == 2
    assert stats.mode == 1


MIXED_LOCATION_R3 = [
    "S locationY? x locationX? any exists=",
    "S locationX? x locationY? all exists=",
    "S locationY? x locationX? count= 1 = exists=",
]


@pytest.fixture
def sampled_space(curi: Curi, pool: ScenePool) -> HypothesisSpace:
    raw = curi.grammar.sample_concepts(2000, seed=1)
    raw += [parse_postfix(tokens) for tokens in MIXED_LOCATION_R3]
    return curi.filter.build_space(raw, pool, Thresholds(max_rate=0.5, min_true=10))


def test_sampled_space_has_no_structural_violations(sampled_space: HypothesisSpace) -> None:
    assert len(sampled_space) > 0
    assert sampled_space.provenance.rejected["R3"] >= len(MIXED_LOCATION_R3)
    violations = [entry.concept_id for entry in sampled_space.entries if structural_reject(entry.concept) is not None]
    assert violations == []
    assert all(interesting(entry.signature, 0.5, 10) for entry in sampled_space.entries)


def test_build_space_is_idempotent(curi: Curi, pool: ScenePool, sampled_space: HypothesisSpace) -> None:
    raw = curi.grammar.sample_concepts(2000, seed=1)
    raw += [parse_postfix(tokens) for tokens in MIXED_LOCATION_R3]
    again = curi.filter.build_space(raw, pool, Thresholds(max_rate=0.5, min_true=10))
    assert again.ids == sampled_space.ids
    assert again.clusters == sampled_space.clusters
    assert again.truth.to_bytes() == sampled_space.truth.to_bytes()
    assert again.provenance == sampled_space.provenance
