from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from curi import Curi
from curi.exceptions import StackUnderflowError, TrailingOperandsError, TypeMismatchError, UnknownTokenError
from curi.grammar import DerivationSampler
from curi.grammar.postfix import (
    concept_length,
    derivation_depth,
    parse_postfix,
    pretty_print,
    serialize_postfix,
)
from curi.objects.concept import Access, Compare, Concept, Constant, Count, Variable
from curi.objects.grammar import PRODUCTIONS, START, GrammarConfig, minimal_heights
from curi.utils import substream

_CURI = Curi()


def test_parse_builds_expected_tree() -> None:
    concept = parse_postfix("blue x color? = exists=")
    assert concept == Concept(
        quantifier="exists",
        body=Compare(op="=", left=Constant(token="blue"), right=Access(accessor="color?", target=Variable(name="x"))),
    )


def test_parse_count_comparison() -> None:
    concept = parse_postfix("2 S_{-x} color? cyan count= = exists=")
    assert isinstance(concept.body, Compare)
    assert isinstance(concept.body.right, Count)
    assert pretty_print(concept) == "exists x in S =(2, count=(color?(S-x), cyan))"


def test_serialize_inverts_parse() -> None:
    tokens = "S_{-x} shape? x shape? any green x color? = not and for-all=".split()
    assert serialize_postfix(parse_postfix(tokens)) == tokens


def test_concept_length_counts_tokens() -> None:
    assert concept_length(parse_postfix("blue x color? = exists=")) == 5


@pytest.mark.parametrize(
    ("tokens", "error"),
    [
        ("blue x colour? = exists=", UnknownTokenError),
        ("=", StackUnderflowError),
        ("", StackUnderflowError),
        ("x blue color? = exists=", TypeMismatchError),
        ("blue x size? = exists=", TypeMismatchError),
        ("blue x color? > exists=", TypeMismatchError),
        ("blue x color? = exists= x", TrailingOperandsError),
        ("blue x color? =", TypeMismatchError),
    ],
)
def test_parse_errors(tokens: str, error: type[Exception]) -> None:
    with pytest.raises(error):
        parse_postfix(tokens)


def test_unknown_token_reports_position() -> None:
    with pytest.raises(UnknownTokenError) as info:
        parse_postfix("blue x colour? = exists=")
    assert info.value.token == "colour?"
    assert info.value.position == 2


def test_minimal_concept_depth() -> None:
    assert minimal_heights()[START] == 3
    assert derivation_depth(parse_postfix("1 2 = exists=")) == 3


def test_depth_below_minimum_is_rejected() -> None:
    with pytest.raises(ValidationError):
        GrammarConfig(max_depth=2)


def test_unknown_weight_label_is_rejected() -> None:
    with pytest.raises(ValidationError):
        GrammarConfig(weights={"BOOL": {"xor": 1.0}})


def test_default_table_halves_disjunction() -> None:
    table = GrammarConfig().table()
    labels = [production.label for production in PRODUCTIONS["BOOL"]]
    probabilities = dict(zip(labels, table["BOOL"]))
    assert probabilities["or"] == pytest.approx(probabilities["and"] / 2)
    assert sum(table["BOOL"]) == pytest.approx(1.0)


@pytest.mark.parametrize("for_all_weight", [1.0, 3.0])
def test_quantifier_frequency_follows_weights(for_all_weight: float) -> None:
    config = GrammarConfig(weights={"START": {"for-all": for_all_weight}})
    expected = dict(zip([production.label for production in PRODUCTIONS[START]], config.table()[START]))["for-all"]
    sampler = DerivationSampler(config)
    n = 2000
    hits = sum(sampler.sample_tokens(substream(9, "test", i))[-1] == "for-all=" for i in range(n))
    sigma = (n * expected * (1 - expected)) ** 0.5
    assert abs(hits - n * expected) <= 3 * sigma


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), max_depth=st.integers(min_value=3, max_value=7))
def test_sampled_concepts_respect_depth_and_round_trip(seed: int, max_depth: int) -> None:
    config = GrammarConfig(max_depth=max_depth)
    tokens = DerivationSampler(config).sample_tokens(substream(seed, "test"))
    concept = parse_postfix(tokens)
    assert serialize_postfix(concept) == tokens
    assert 3 <= derivation_depth(concept) <= max_depth


def test_sample_concepts_is_deterministic() -> None:
    first = _CURI.grammar.sample_concepts(20, seed=3)
    second = _CURI.grammar.sample_concepts(20, seed=3)
    assert first == second
    assert _CURI.grammar.sample_concepts(5, seed=3) == first[:5]


def test_record_uses_id_alias() -> None:
    record = _CURI.grammar.record(7, parse_postfix("blue x color? = exists="))
    assert record.model_dump(by_alias=True) == {
        "id": 7,
        "postfix": ["blue", "x", "color?", "=", "exists="],
        "length": 5,
    }
