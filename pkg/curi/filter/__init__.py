"""This module provides a class that filters sampled concepts into a hypothesis space."""

from __future__ import annotations

from collections import Counter
from typing import TYPE_CHECKING

from pydantic import BaseModel

from curi.base.component import BaseComponent
from curi.exceptions import EmptyPoolError, EmptySpaceError
from curi.executor.vectorized import evaluate_pool
from curi.filter.rules import RejectReason, structural_reject
from curi.grammar.postfix import serialize_postfix
from curi.objects.signature import EvaluationSignature
from curi.objects.space import HypothesisSpace, Provenance, SpaceEntry, Thresholds
from curi.utils import parallel_map

if TYPE_CHECKING:
    from collections.abc import Sequence

    from curi.objects.concept import Concept
    from curi.objects.scene import ScenePool


class ClusterStats(BaseModel):
    """A class that represents the synonym structure of a hypothesis space."""

    clusters: int
    histogram: dict[int, int]
    mode: int
    largest: int


def interesting(signature: EvaluationSignature, max_rate: float = 0.10, min_true: int = 10) -> bool:
    """Whether a concept is neither too often true nor too rarely true on the pool.

    Both bounds are inclusive: a true rate of exactly `max_rate` and exactly `min_true` true scenes pass.
    """
    return signature.true_rate <= max_rate and signature.true_count >= min_true


def cluster_signatures(signatures: Sequence[EvaluationSignature]) -> list[list[int]]:
    """Partition concept ids into groups with bit-identical signatures.

    Groups are formed by hash and confirmed by full comparison, so a hash collision never merges two
    different vectors. Clusters are ordered by their smallest id.
    """
    by_hash: dict[str, list[EvaluationSignature]] = {}
    for signature in signatures:
        by_hash.setdefault(signature.sig_hash, []).append(signature)
    clusters: list[list[int]] = []
    for group in by_hash.values():
        exact: list[list[EvaluationSignature]] = []
        for signature in group:
            for members in exact:
                if members[0].same_bits(signature):
                    members.append(signature)
                    break
            else:
                exact.append([signature])
        clusters.extend(sorted(member.concept_id for member in members) for members in exact)
    return sorted(clusters, key=lambda members: members[0])


class ConceptFilter(BaseComponent):
    """A class that applies rejection rules and interestingness thresholds to sampled concepts."""

    def structural_reject(self, concept: Concept) -> RejectReason | None:
        """Return the structural rule a concept violates, if any."""
        return structural_reject(concept)

    def interesting(self, signature: EvaluationSignature, max_rate: float = 0.10, min_true: int = 10) -> bool:
        """Whether a signature falls inside the interestingness window."""
        return interesting(signature, max_rate, min_true)

    def build_space(
        self,
        raw: Sequence[Concept],
        pool: ScenePool,
        thresholds: Thresholds | None = None,
        *,
        ids: Sequence[int] | None = None,
    ) -> HypothesisSpace:
        """Deduplicate, reject, execute and threshold raw concepts into a hypothesis space.

        Args:
            raw (Sequence[Concept]): The sampled concepts.
            pool (ScenePool): The pool concepts are executed on.
            thresholds (Thresholds | None): The interestingness window. Defaults to the run's one.
            ids (Sequence[int] | None): The ids of the raw concepts. Defaults to their positions.

        Returns:
            HypothesisSpace: The accepted concepts, their signatures and synonym clusters.
        """
        if len(pool) == 0:
            raise EmptyPoolError(message="Cannot filter concepts on an empty pool.")
        thresholds = thresholds or Thresholds(max_rate=self.curi.config.max_rate, min_true=self.curi.config.min_true)
        ids = list(range(len(raw))) if ids is None else list(ids)
        rejected: Counter[str] = Counter({reason.value: 0 for reason in RejectReason})

        seen: set[tuple[str, ...]] = set()
        candidates: list[tuple[int, Concept, int]] = []
        for concept_id, concept in zip(ids, raw):
            tokens = tuple(serialize_postfix(concept))
            if tokens in seen:
                rejected[RejectReason.DUPLICATE.value] += 1
                continue
            seen.add(tokens)
            reason = structural_reject(concept)
            if reason is not None:
                rejected[reason.value] += 1
                continue
            candidates.append((concept_id, concept, len(tokens)))

        def execute(item: tuple[int, Concept, int]) -> EvaluationSignature | RejectReason:
            # Only survivors keep their packed bits.
            bits = evaluate_pool(item[1], pool)
            true_count = int(bits.sum())
            if true_count / len(bits) > thresholds.max_rate:
                return RejectReason.TOO_FREQUENT
            if true_count < thresholds.min_true:
                return RejectReason.TOO_RARE
            return EvaluationSignature.from_bits(item[0], bits)

        entries: list[SpaceEntry] = []
        for (concept_id, concept, length), result in zip(candidates, parallel_map(execute, candidates, self.threads)):
            if isinstance(result, RejectReason):
                rejected[result.value] += 1
            else:
                entries.append(SpaceEntry(concept_id=concept_id, concept=concept, length=length, signature=result))

        if not entries:
            msg = f"No concept out of {len(raw)} survived filtering on {len(pool)} scenes."
            raise EmptySpaceError(message=msg)
        entries.sort(key=lambda entry: entry.concept_id)
        clusters = cluster_signatures([entry.signature for entry in entries])
        provenance = Provenance(
            raw_count=len(raw),
            rejected=dict(rejected),
            accepted=len(entries),
            distinct_signatures=len(clusters),
        )
        self.log("info", f"Accepted {len(entries)} of {len(raw)} concepts in {len(clusters)} synonym clusters.")
        self.log("debug", f"Rejections: {dict(rejected)}")
        return HypothesisSpace(
            entries=entries,
            clusters=clusters,
            provenance=provenance,
            thresholds=thresholds,
            pool_seed=pool.seed,
            pool_size=len(pool),
        )

    def synonym_clusters(self, space: HypothesisSpace) -> ClusterStats:
        """Summarize the synonym clusters of a space."""
        histogram = space.cluster_histogram()
        return ClusterStats(
            clusters=len(space.clusters),
            histogram=histogram,
            mode=max(histogram, key=lambda size: (histogram[size], -size)),
            largest=max(histogram),
        )
