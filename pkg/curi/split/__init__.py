"""This module provides a class that partitions a hypothesis space into generalization splits."""

from __future__ import annotations

from typing import TYPE_CHECKING

from curi.base.component import BaseComponent
from curi.exceptions import DegenerateSplitError
from curi.objects.split import CONCEPT_LEVEL_KINDS, HoldoutSpec, SplitAssignment, SplitFinding, SplitKind, SplitReport
from curi.split.holdout import default_spec, held_out
from curi.utils import substream

if TYPE_CHECKING:
    import numpy as np

    from curi.objects.space import HypothesisSpace

SPLIT_TAG = "split"


class SplitBuilder(BaseComponent):
    """A class that assigns concepts to the train, validation and test sides of each split."""

    def default_spec(self, kind: SplitKind) -> HoldoutSpec:
        """Return the default holdout specification of a split kind under the run configuration."""
        config = self.curi.config
        return default_spec(
            kind,
            complexity_threshold=config.complexity_threshold,
            counting_count=config.counting_pairs,
            test_fraction=config.concept_iid_test_fraction,
            val_fraction=config.val_fraction,
            seed=config.seed,
        )

    def assign(self, space: HypothesisSpace, kind: SplitKind, spec: HoldoutSpec | None = None) -> SplitAssignment:
        """Partition a hypothesis space for one split kind.

        Args:
            space (HypothesisSpace): The filtered concepts.
            kind (SplitKind): The split kind.
            spec (HoldoutSpec | None): What to hold out. Defaults to the kind's default specification.

        Returns:
            SplitAssignment: The train, validation and test concept ids, each ascending.
        """
        spec = spec or self.default_spec(kind)
        ids = space.ids
        if kind == "instance_iid":
            assignment = SplitAssignment(kind=kind, spec=spec, train=ids, val=ids, test=ids)
            self.log("info", f"Split {kind}: {len(ids)} concepts shared by train, val and test.")
            return assignment

        rng = substream(spec.seed, f"{SPLIT_TAG}:{kind}")
        if kind == "concept_iid":
            clusters = [space.clusters[i] for i in rng.permutation(len(space.clusters))]
            test_clusters = max(1, round((spec.test_fraction or 0.2) * len(clusters)))
            test = sorted(concept_id for members in clusters[:test_clusters] for concept_id in members)
            train = sorted(concept_id for members in clusters[test_clusters:] for concept_id in members)
        else:
            test = [
                concept_id
                for concept_id in ids
                if held_out(spec, space.concept(concept_id), space.entry(concept_id).length)
            ]
            held = set(test)
            train = [concept_id for concept_id in ids if concept_id not in held]

        train, val = self._carve_val(space, kind, train, spec.val_fraction, rng)
        if not train or not test:
            msg = f"Split {kind} is degenerate: {len(train)} train and {len(test)} test concepts."
            raise DegenerateSplitError(message=msg)
        self.log("info", f"Split {kind}: {len(train)} train, {len(val)} val, {len(test)} test concepts.")
        return SplitAssignment(kind=kind, spec=spec, train=train, val=val, test=test)

    def _carve_val(
        self,
        space: HypothesisSpace,
        kind: SplitKind,
        train: list[int],
        fraction: float,
        rng: np.random.Generator,
    ) -> tuple[list[int], list[int]]:
        # Concept-level splits move whole synonym clusters so no cluster straddles train and val.
        if kind in CONCEPT_LEVEL_KINDS:
            groups: dict[int, list[int]] = {}
            for concept_id in train:
                groups.setdefault(space.cluster_of(concept_id), []).append(concept_id)
            units = list(groups.values())
        else:
            units = [[concept_id] for concept_id in train]
        if len(units) < 2:  # noqa: PLR2004
            return train, []
        take = min(len(units) - 1, round(fraction * len(units)))
        order = rng.permutation(len(units))
        val = sorted(concept_id for i in order[:take] for concept_id in units[int(i)])
        chosen = set(val)
        return [concept_id for concept_id in train if concept_id not in chosen], val

    def validate(self, assignment: SplitAssignment, space: HypothesisSpace) -> SplitReport:  # noqa: C901
        """Check a split against its invariants.

        Args:
            assignment (SplitAssignment): The split.
            space (HypothesisSpace): The space it was built from.

        Returns:
            SplitReport: The side sizes and every violation found; an empty finding list means valid.
        """
        findings: list[SplitFinding] = []
        sides = {"train": set(assignment.train), "val": set(assignment.val), "test": set(assignment.test)}
        everything = set(space.ids)

        covered = sides["train"] | sides["val"] | sides["test"]
        if covered != everything:
            findings.append(
                SplitFinding(
                    check="coverage",
                    message="The sides do not cover exactly the concepts of the space.",
                    concept_ids=sorted(covered ^ everything),
                ),
            )

        if assignment.kind == "instance_iid":
            if sides["train"] != sides["test"] or sides["train"] != everything:
                findings.append(SplitFinding(check="instance_iid", message="Train and test must both equal the space."))
        else:
            for first, second in (("train", "test"), ("train", "val"), ("val", "test")):
                overlap = sides[first] & sides[second]
                if overlap:
                    findings.append(
                        SplitFinding(
                            check="disjoint",
                            message=f"{first} and {second} share concepts.",
                            concept_ids=sorted(overlap),
                        ),
                    )

        if assignment.kind in CONCEPT_LEVEL_KINDS:
            for members in space.clusters:
                touched = {name for name, ids in sides.items() if ids.intersection(members)}
                if len(touched) > 1:
                    findings.append(
                        SplitFinding(
                            check="synonyms",
                            message=f"A synonym cluster spans {sorted(touched)}.",
                            concept_ids=members,
                        ),
                    )
        elif assignment.kind != "instance_iid":
            leaked = [
                concept_id
                for concept_id in sorted(sides["train"] | sides["val"])
                if concept_id in space and held_out(assignment.spec, space.concept(concept_id))
            ]
            if leaked:
                findings.append(
                    SplitFinding(check="predicate", message="Non-test concepts match the holdout.", concept_ids=leaked),
                )
            missing = [
                concept_id
                for concept_id in sorted(sides["test"])
                if concept_id in space and not held_out(assignment.spec, space.concept(concept_id))
            ]
            if missing:
                findings.append(
                    SplitFinding(check="predicate", message="Test concepts miss the holdout.", concept_ids=missing),
                )

        if not sides["train"] or not sides["test"]:
            findings.append(SplitFinding(check="degenerate", message="Train or test is empty."))
        sizes = {name: len(ids) for name, ids in sides.items()}
        return SplitReport(kind=assignment.kind, sizes=sizes, findings=findings)
