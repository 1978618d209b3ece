"""Structural rejection rules applied to sampled concepts before execution."""

from __future__ import annotations

from enum import Enum

from curi.grammar.postfix import walk
from curi.objects.concept import Access, Compare, Concept, Count, Node, SetTest, Variable


class RejectReason(str, Enum):
    """Why a concept was rejected."""

    FOR_ALL_WITH_COMPLEMENT = "R1"
    SELF_COMPARISON = "R2"
    SET_AGAINST_MEMBER = "R3"
    DUPLICATE = "duplicate"
    TOO_FREQUENT = "too_frequent"
    TOO_RARE = "too_rare"


def _object_access(node: Node) -> Access | None:
    if isinstance(node, Access) and node.target.name == "x":
        return node
    return None


def uses_complement(concept: Concept) -> bool:
    """Whether the concept mentions `S_{-x}` anywhere."""
    return any(isinstance(node, Variable) and node.name == "S_{-x}" for node in walk(concept))


def compares_object_to_itself(concept: Concept) -> bool:
    """Whether a comparison applies the same accessor to `x` on both sides, e.g. `color?(x) = color?(x)`."""
    for node in walk(concept):
        if isinstance(node, Compare):
            left, right = _object_access(node.left), _object_access(node.right)
            if left is not None and right is not None and left.accessor == right.accessor:
                return True
    return False


def tests_set_against_member(concept: Concept) -> bool:
    """Whether an all/any/count= tests an accessor over `S` against an accessor of `x`.

    The accessors need not match: `any(locationY?(S), locationX?(x))` is rejected as well as
    `any(color?(S), color?(x))`, which always holds since x belongs to S.
    """
    for node in walk(concept):
        if (
            isinstance(node, (SetTest, Count))
            and node.values.target.name == "S"
            and _object_access(node.value) is not None
        ):
            return True
    return False


def structural_reject(concept: Concept) -> RejectReason | None:
    """Return the first structural rule a concept violates, if any.

    Args:
        concept (Concept): The concept.

    Returns:
        RejectReason | None: R1 for `for-all` together with `S_{-x}`, R2 for a self-comparison of the
            bound object, R3 for a set tested against its own member; None when the concept is clean.
    """
    if concept.quantifier == "for-all" and uses_complement(concept):
        return RejectReason.FOR_ALL_WITH_COMPLEMENT
    if compares_object_to_itself(concept):
        return RejectReason.SELF_COMPARISON
    if tests_set_against_member(concept):
        return RejectReason.SET_AGAINST_MEMBER
    return None
