from __future__ import annotations

import pytest

from curi import Curi
from curi.exceptions import DegenerateSplitError
from curi.grammar.postfix import parse_postfix
from curi.objects.scene import ScenePool
from curi.objects.space import HypothesisSpace, Thresholds
from curi.objects.split import HoldoutSpec, SplitAssignment
from curi.split.holdout import counting_pairs, held_out

from .conftest import ANY_BLUE, BLUE

SPLIT_CONCEPTS = [
    "blue x color? = exists=",
    "purple x color? = exists=",
    "cube x shape? = exists=",
    "cyan x color? = metal x material? = and exists=",
    "metal x material? = exists=",
    "large x size? = exists=",
    "red x color? = sphere x shape? = or exists=",
    "green x color? = rubber x material? = and exists=",
    "S color? gray count= 1 = exists=",
    "small x size? = sphere x shape? = and exists=",
    "red x color? = exists=",
    "gray x color? = exists=",
]
PURPLE, CYAN_METAL, RED_OR_SPHERE, GREEN_RUBBER, COUNT_GRAY = 1, 3, 6, 7, 8


@pytest.fixture
def split_space(curi: Curi, pool: ScenePool) -> HypothesisSpace:
    concepts = [parse_postfix(tokens) for tokens in SPLIT_CONCEPTS]
    return curi.filter.build_space(concepts, pool, Thresholds(max_rate=1.0, min_true=10))


def test_instance_iid_shares_every_concept(curi: Curi, split_space: HypothesisSpace) -> None:
    assignment = curi.splits.assign(split_space, "instance_iid")
    assert assignment.train == assignment.val == assignment.test == split_space.ids
    assert curi.splits.validate(assignment, split_space).ok


def test_binding_color_holds_out_color_tokens(curi: Curi, split_space: HypothesisSpace) -> None:
    assignment = curi.splits.assign(split_space, "binding_color")
    assert assignment.test == [PURPLE, CYAN_METAL]
    assert sorted(assignment.train + assignment.val) == [i for i in split_space.ids if i not in (PURPLE, CYAN_METAL)]
    assert len(assignment.val) == 1
    assert curi.splits.validate(assignment, split_space).ok


def test_intrinsic_requires_material(curi: Curi, split_space: HypothesisSpace) -> None:
    assignment = curi.splits.assign(split_space, "intrinsic")
    assert assignment.test == [GREEN_RUBBER]


def test_boolean_holds_out_color_operator_pairs(curi: Curi, split_space: HypothesisSpace) -> None:
    assignment = curi.splits.assign(split_space, "boolean")
    assert assignment.test == [CYAN_METAL, RED_OR_SPHERE, GREEN_RUBBER]
    assert curi.splits.validate(assignment, split_space).ok


EXTRINSIC_CONCEPTS = [
    "1 x locationX? = red x color? = and exists=",
    "red x color? = exists=",
    "4 x locationX? = blue x color? = and exists=",
    "1 x locationY? = exists=",
]


def test_extrinsic_needs_pair_and_location_accessor(curi: Curi, pool: ScenePool) -> None:
    concepts = [parse_postfix(tokens) for tokens in EXTRINSIC_CONCEPTS]
    space = curi.filter.build_space(concepts, pool, Thresholds(max_rate=1.0, min_true=10))
    assignment = curi.splits.assign(space, "extrinsic")
    assert assignment.test == [0]
    assert sorted(assignment.train + assignment.val) == [1, 2, 3]
    assert curi.splits.validate(assignment, space).ok
    spec = curi.splits.default_spec("extrinsic")
    assert held_out(spec, parse_postfix(EXTRINSIC_CONCEPTS[0]))
    assert not held_out(spec, parse_postfix("S color? red count= 1 = exists="))


def test_complexity_threshold(curi: Curi, split_space: HypothesisSpace) -> None:
    spec = HoldoutSpec(kind="complexity", length_threshold=5)
    assignment = curi.splits.assign(split_space, "complexity", spec)
    assert assignment.test == [i for i in split_space.ids if split_space.entry(i).length > 5]
    assert all(split_space.entry(i).length <= 5 for i in assignment.train + assignment.val)


def test_counting_pairs_hold_out_counted_values() -> None:
    concept = parse_postfix(SPLIT_CONCEPTS[COUNT_GRAY])
    assert held_out(HoldoutSpec(kind="counting", pairs=[("1", "gray")]), concept)
    assert not held_out(HoldoutSpec(kind="counting", pairs=[("2", "gray")]), concept)
    assert not held_out(HoldoutSpec(kind="counting", pairs=[("1", "gray")]), parse_postfix("gray x color? = exists="))


def test_default_counting_pairs() -> None:
    pairs = counting_pairs(5, seed=0)
    assert pairs == counting_pairs(5, seed=0)
    assert len(set(pairs)) == 5
    assert all(number in {"1", "2", "3"} for number, _ in pairs)


def test_counting_candidates_include_locations() -> None:
    everything = counting_pairs(3 * (8 + 3 + 2 + 2 + 8))
    assert len(set(everything)) == len(everything)
    assert ("2", "8") in everything
    assert ("3", "gray") in everything


def test_empty_test_side_is_degenerate(curi: Curi, split_space: HypothesisSpace) -> None:
    with pytest.raises(DegenerateSplitError):
        curi.splits.assign(split_space, "binding_shape")


def test_concept_iid_keeps_synonyms_together(curi: Curi, toy_space: HypothesisSpace) -> None:
    assignment = curi.splits.assign(toy_space, "concept_iid")
    sides = [name for name in ("train", "val", "test") if BLUE in assignment.side(name)]  # type: ignore[arg-type]
    assert sides
    assert ANY_BLUE in assignment.side(sides[0])  # type: ignore[arg-type]
    assert curi.splits.validate(assignment, toy_space).ok
    assert assignment == curi.splits.assign(toy_space, "concept_iid")


def test_validate_reports_leaks(curi: Curi, split_space: HypothesisSpace) -> None:
    spec = curi.splits.default_spec("binding_color")
    others = [i for i in split_space.ids if i != CYAN_METAL]
    leaky = SplitAssignment(kind="binding_color", spec=spec, train=others, val=[], test=[CYAN_METAL, PURPLE])
    report = curi.splits.validate(leaky, split_space)
    checks = {finding.check for finding in report.findings}
    assert "disjoint" in checks
    assert "predicate" in checks
    assert not report.ok
