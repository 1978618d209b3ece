"""This module provides a class that executes concepts on scene schemas."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from curi.base.component import BaseComponent
from curi.exceptions import EmptyPoolError
from curi.executor.vectorized import evaluate_pool
from curi.objects.common import ACCESSOR_COLUMN
from curi.objects.concept import Access, Compare, Concept, Constant, Count, Junction, Node, Not, SetTest
from curi.objects.signature import EvaluationSignature, TruthTable
from curi.utils import parallel_map

if TYPE_CHECKING:
    from collections.abc import Sequence

    from curi.objects.scene import Scene, ScenePool

Codes = tuple[int, ...]


def evaluate(concept: Concept, scene: Scene) -> bool:
    """Evaluate a concept on one scene.

    The quantifier binds `x` to each object in turn: `exists` is the disjunction of the bindings and
    `for-all` their conjunction. `S` is every object, `S_{-x}` every object but the bound one.

    Args:
        concept (Concept): The concept.
        scene (Scene): The scene.

    Returns:
        bool: Whether the scene satisfies the concept.
    """
    objects = [obj.codes() for obj in scene.objects]
    bindings = (_truth(concept.body, objects, k) for k in range(len(objects)))
    return any(bindings) if concept.quantifier == "exists" else all(bindings)


def _values(node: Access, objects: list[Codes], bound: int) -> list[int]:
    column = ACCESSOR_COLUMN[node.accessor]
    if node.target.name == "x":
        msg = "a set accessor cannot target the bound object"
        raise TypeError(msg)
    return [obj[column] for k, obj in enumerate(objects) if node.target.name == "S" or k != bound]


def _scalar(node: Node, objects: list[Codes], bound: int) -> int:
    if isinstance(node, Constant):
        return node.code
    if isinstance(node, Access):
        return objects[bound][ACCESSOR_COLUMN[node.accessor]]
    if isinstance(node, Count):
        value = _scalar(node.value, objects, bound)
        return sum(1 for member in _values(node.values, objects, bound) if member == value)
    msg = f"not a scalar expression: {node!r}"
    raise TypeError(msg)


def _truth(node: Node, objects: list[Codes], bound: int) -> bool:  # noqa: PLR0911
    if isinstance(node, Compare):
        left, right = _scalar(node.left, objects, bound), _scalar(node.right, objects, bound)
        return left == right if node.op == "=" else left > right
    if isinstance(node, SetTest):
        value = _scalar(node.value, objects, bound)
        members = _values(node.values, objects, bound)
        if node.op == "all":
            return all(member == value for member in members)
        return any(member == value for member in members)
    if isinstance(node, Not):
        return not _truth(node.operand, objects, bound)
    if isinstance(node, Junction):
        if node.op == "and":
            return _truth(node.left, objects, bound) and _truth(node.right, objects, bound)
        return _truth(node.left, objects, bound) or _truth(node.right, objects, bound)
    msg = f"not a boolean expression: {node!r}"
    raise TypeError(msg)


class ConceptExecutor(BaseComponent):
    """A class that executes concepts on scenes and computes evaluation signatures."""

    def evaluate(self, concept: Concept, scene: Scene) -> bool:
        """Evaluate a concept on one scene."""
        return evaluate(concept, scene)

    def evaluate_pool(self, concept: Concept, pool: ScenePool) -> np.ndarray:
        """Evaluate a concept on every scene of a pool, returning a boolean vector."""
        return evaluate_pool(concept, pool)

    def signature(self, concept: Concept, pool: ScenePool, concept_id: int = 0) -> EvaluationSignature:
        """Compute the evaluation signature of a concept over a pool.

        Args:
            concept (Concept): The concept.
            pool (ScenePool): A non-empty scene pool.
            concept_id (int): The id recorded in the signature.

        Returns:
            EvaluationSignature: Bit i is the truth value of the concept on scene i.
        """
        if len(pool) == 0:
            raise EmptyPoolError(message="Cannot compute a signature over an empty pool.")
        return EvaluationSignature.from_bits(concept_id, evaluate_pool(concept, pool))

    def signatures(
        self,
        concepts: Sequence[tuple[int, Concept]],
        pool: ScenePool,
    ) -> list[EvaluationSignature]:
        """Compute the signatures of many (id, concept) pairs, in input order, using worker threads."""
        if len(pool) == 0:
            raise EmptyPoolError(message="Cannot compute signatures over an empty pool.")
        return parallel_map(lambda item: self.signature(item[1], pool, item[0]), concepts, self.threads)

    def truth_table(self, concepts: Sequence[tuple[int, Concept]], pool: ScenePool) -> TruthTable:
        """Evaluate many concepts over a pool into a packed truth table."""
        rows = parallel_map(lambda item: evaluate_pool(item[1], pool), concepts, self.threads)
        matrix = np.stack(rows) if rows else np.zeros((0, len(pool)), dtype=bool)
        return TruthTable.from_rows(matrix, [concept_id for concept_id, _ in concepts])
