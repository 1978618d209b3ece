"""Evaluate a concept on every scene of a pool at once with numpy."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from curi.grammar.postfix import walk
from curi.objects.common import ACCESSOR_COLUMN
from curi.objects.concept import Access, Compare, Concept, Constant, Count, Junction, Node, Not, SetTest, Variable

if TYPE_CHECKING:
    from curi.objects.scene import ScenePool


def binds_object(concept: Concept) -> bool:
    """Whether the body refers to the bound object, directly or through `S_{-x}`."""
    return any(isinstance(node, Variable) and node.name != "S" for node in walk(concept.body))


class _Binding:
    """The pool arrays seen with the quantified variable bound to one object slot."""

    def __init__(self, pool: ScenePool, slot: int) -> None:
        self.properties = pool.properties
        self.mask = pool.mask
        self.slot = slot
        self.size = len(pool)
        self._without: np.ndarray | None = None

    def members(self, variable: Variable) -> np.ndarray:
        if variable.name == "S":
            return self.mask
        if self._without is None:
            self._without = self.mask.copy()
            self._without[:, self.slot] = False
        return self._without

    def scalar(self, node: Node) -> np.ndarray:
        if isinstance(node, Constant):
            return np.full(self.size, node.code, dtype=np.int16)
        if isinstance(node, Access):
            return self.properties[:, self.slot, ACCESSOR_COLUMN[node.accessor]].astype(np.int16)
        if isinstance(node, Count):
            values, members = self.values(node.values)
            return ((values == self.scalar(node.value)[:, None]) & members).sum(axis=1).astype(np.int16)
        msg = f"not a scalar expression: {node!r}"
        raise TypeError(msg)

    def values(self, node: Access) -> tuple[np.ndarray, np.ndarray]:
        return self.properties[:, :, ACCESSOR_COLUMN[node.accessor]], self.members(node.target)

    def truth(self, node: Node) -> np.ndarray:  # noqa: PLR0911
        if isinstance(node, Compare):
            left, right = self.scalar(node.left), self.scalar(node.right)
            return left == right if node.op == "=" else left > right
        if isinstance(node, SetTest):
            values, members = self.values(node.values)
            equal = values == self.scalar(node.value)[:, None]
            if node.op == "all":
                return np.all(equal | ~members, axis=1)
            return np.any(equal & members, axis=1)
        if isinstance(node, Not):
            return ~self.truth(node.operand)
        if isinstance(node, Junction):
            left, right = self.truth(node.left), self.truth(node.right)
            return left & right if node.op == "and" else left | right
        msg = f"not a boolean expression: {node!r}"
        raise TypeError(msg)


def evaluate_pool(concept: Concept, pool: ScenePool) -> np.ndarray:
    """Evaluate a concept on every scene of a pool.

    Args:
        concept (Concept): The concept.
        pool (ScenePool): The scenes.

    Returns:
        np.ndarray: A boolean vector, one entry per scene in pool order.
    """
    exists = concept.quantifier == "exists"
    slots = pool.mask.shape[1] if len(pool) else 0
    if len(pool) == 0:
        return np.zeros(0, dtype=bool)
    if not binds_object(concept):
        body = _Binding(pool, 0).truth(concept.body)
        return body & pool.mask.any(axis=1) if exists else body | ~pool.mask.any(axis=1)
    result = np.full(len(pool), not exists, dtype=bool)
    for slot in range(slots):
        occupied = pool.mask[:, slot]
        body = _Binding(pool, slot).truth(concept.body)
        if exists:
            result |= occupied & body
        else:
            result &= ~occupied | body
    return result
