"""This module provides the class that runs the benchmark stages and persists their artifacts."""

from __future__ import annotations

import csv
import io
import json
import time
from typing import TYPE_CHECKING, Callable

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter

from curi import __version__
from curi.base.component import BaseComponent
from curi.decorators import requires_artifacts
from curi.episode import EpisodeFinding
from curi.grammar.postfix import parse_postfix
from curi.objects.concept import ConceptRecord
from curi.objects.episode import Episode
from curi.objects.manifest import AuditFinding, Manifest, StageRecord
from curi.objects.metrics import MapPool, MapPoolMeta, MetricsReport, SummaryRow
from curi.objects.oracle import OracleRecord
from curi.objects.scene import Scene, ScenePool
from curi.objects.signature import EvaluationSignature, TruthTable
from curi.objects.space import HypothesisSpace, Provenance, SpaceEntry, SpaceManifest
from curi.objects.split import SplitAssignment, SplitReport
from curi.utils import (
    atomic_write_bytes,
    atomic_write_text,
    dump_jsonl,
    parallel_map,
    read_lines,
    sha256_bytes,
    sha256_file,
    substream,
)

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from curi.curi import Curi
    from curi.objects.config import NegativesMode
    from curi.objects.oracle import OraclePrior
    from curi.objects.split import SplitKind

MANIFEST = "manifest.json"
CONCEPTS = "concepts.jsonl"
POOL = "pool.jsonl"
SPACE_CONCEPTS = "space/concepts.jsonl"
SPACE_SIGNATURES = "space/signatures.jsonl"
SPACE_BITS = "space/signatures.bin"
SPACE_CLUSTERS = "space/clusters.json"
SPACE_MANIFEST = "space/manifest.json"
SPLIT = "splits/{kind}.json"
EPISODES = "episodes/{kind}/{mode}/{side}.jsonl"
TEST_EPISODES = "episodes/{kind}/{mode}/test.jsonl"
MAP_SCENES = "mappool/scenes.jsonl"
MAP_BITS = "mappool/truth.bin"
MAP_META = "mappool/meta.json"
REPORT = "reports/{kind}.{mode}.json"
ORACLE_RECORDS = "reports/{kind}.{mode}.{oracle}.jsonl"
SUMMARY = "summary.csv"

SIDES = ("train", "val", "test")
MODES: tuple[NegativesMode, ...] = ("hard", "easy")
AUDIT_TAG = "audit"

_CLUSTERS = TypeAdapter(list[list[int]])


class AuditReport(BaseModel):
    """A class that represents the findings of an audit of stored artifacts."""

    space: list[AuditFinding] = Field(default_factory=list)
    splits: dict[str, SplitReport] = Field(default_factory=dict)
    episodes: dict[str, list[EpisodeFinding]] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        """Whether no problem was found."""
        return (
            not self.space
            and all(report.ok for report in self.splits.values())
            and not any(self.episodes.values())
        )


def _json_bytes(model: BaseModel) -> bytes:
    return (model.model_dump_json(indent=2, by_alias=True) + "\n").encode()


def _fingerprint(inputs: dict[str, object]) -> str:
    return sha256_bytes(json.dumps(inputs, sort_keys=True, default=str).encode())


class Pipeline(BaseComponent):
    """A class that runs the generation stages, caching each one by the digest of its inputs.

    Every stage records its outputs and their sha256 digests in `manifest.json`. A stage whose input
    fingerprint and outputs are unchanged is skipped, and no stage reads an artifact whose digest
    differs from the manifest.
    """

    out: Path
    manifest: Manifest

    def __init__(self, curi: Curi, out: Path | None = None) -> None:
        """Initialize the pipeline on an output directory, loading its manifest if present."""
        super().__init__(curi)
        self.out = out or curi.config.out
        path = self.out / MANIFEST
        if path.exists():
            self.manifest = Manifest.model_validate_json(path.read_text())
        else:
            self.manifest = Manifest(version=__version__)
        self.manifest.config = curi.config.model_dump(mode="json")
        self._cache: dict[str, object] = {}

    # Stage bookkeeping

    def _digest(self, relative: str) -> str:
        return self.manifest.artifacts[relative]

    def _up_to_date(self, name: str, fingerprint: str) -> bool:
        stage = self.manifest.stages.get(name)
        if stage is None or stage.fingerprint != fingerprint:
            return False
        return all(
            (self.out / relative).exists() and sha256_file(self.out / relative) == digest
            for relative, digest in stage.outputs.items()
        )

    def _stage(self, name: str, inputs: dict[str, object], build: Callable[[], dict[str, bytes]]) -> bool:
        """Run a stage unless its recorded outputs already match its inputs.

        Args:
            name (str): The stage name in the manifest.
            inputs (dict[str, object]): Everything the outputs depend on.
            build (Callable[[], dict[str, bytes]]): Produces the outputs, keyed by relative path.

        Returns:
            bool: True when the stage ran, False when it was skipped.
        """
        fingerprint = _fingerprint(inputs)
        if self._up_to_date(name, fingerprint):
            self.log("info", f"Stage {name} is up to date.")
            return False
        start = time.perf_counter()
        outputs = build()
        for relative, data in outputs.items():
            atomic_write_bytes(self.out / relative, data)
        self.manifest.stages[name] = StageRecord(
            fingerprint=fingerprint,
            outputs={relative: sha256_bytes(data) for relative, data in outputs.items()},
            seconds=round(time.perf_counter() - start, 3),
        )
        atomic_write_text(self.out / MANIFEST, self.manifest.model_dump_json(indent=2))
        self.log("info", f"Stage {name} finished in {self.manifest.stages[name].seconds:.1f}s.")
        return True

    # Loaders

    def load_concepts(self) -> list[ConceptRecord]:
        """Load the raw concept records."""
        return [ConceptRecord.model_validate_json(line) for line in read_lines(self.out / CONCEPTS)]

    def load_pool(self) -> ScenePool:
        """Load the filter pool."""
        if "pool" not in self._cache:
            scenes = [Scene.model_validate_json(line) for line in read_lines(self.out / POOL)]
            self._cache["pool"] = ScenePool.from_scenes(
                scenes,
                slots=self.curi.config.max_objects,
                seed=self.curi.config.seed,
            )
        return self._cache["pool"]  # type: ignore[return-value]

    def load_space(self) -> HypothesisSpace:
        """Load the hypothesis space, its signatures and its packed truth table."""
        if "space" in self._cache:
            return self._cache["space"]  # type: ignore[return-value]
        summary = SpaceManifest.model_validate_json((self.out / SPACE_MANIFEST).read_text())
        records = [ConceptRecord.model_validate_json(line) for line in read_lines(self.out / SPACE_CONCEPTS)]
        ids = [record.id_ for record in records]
        table = TruthTable.from_bytes((self.out / SPACE_BITS).read_bytes(), ids, summary.pool_size)
        entries = []
        for row, (record, line) in enumerate(zip(records, read_lines(self.out / SPACE_SIGNATURES))):
            signature = EvaluationSignature.model_validate(
                {**json.loads(line), "packed": table.packed[row], "size": summary.pool_size},
            )
            entries.append(
                SpaceEntry(
                    concept_id=record.id_,
                    concept=parse_postfix(record.postfix),
                    length=record.length,
                    signature=signature,
                ),
            )
        space = HypothesisSpace(
            entries=entries,
            clusters=_CLUSTERS.validate_json((self.out / SPACE_CLUSTERS).read_bytes()),
            provenance=Provenance(
                raw_count=summary.raw_count,
                rejected=summary.rejected,
                accepted=summary.accepted,
                distinct_signatures=summary.distinct_signatures,
            ),
            thresholds=summary.thresholds,
            pool_seed=summary.pool_seed,
            pool_size=summary.pool_size,
        )
        self._cache["space"] = space
        return space

    def load_split(self, kind: SplitKind) -> SplitAssignment:
        """Load the assignment of one split kind."""
        return SplitAssignment.model_validate_json((self.out / SPLIT.format(kind=kind)).read_text())

    def load_episodes(self, kind: SplitKind, mode: NegativesMode, side: str) -> list[Episode]:
        """Load the episodes of one side of a split."""
        path = self.out / EPISODES.format(kind=kind, mode=mode, side=side)
        return [Episode.model_validate_json(line) for line in read_lines(path)]

    def load_map_pool(self) -> MapPool:
        """Load the mAP pool."""
        if "map_pool" not in self._cache:
            meta = MapPoolMeta.model_validate_json((self.out / MAP_META).read_text())
            scenes = [Scene.model_validate_json(line) for line in read_lines(self.out / MAP_SCENES)]
            table = TruthTable.from_bytes((self.out / MAP_BITS).read_bytes(), meta.concept_ids, len(scenes))
            self._cache["map_pool"] = MapPool(k=meta.k, scenes=scenes, sources=meta.sources, truth=table)
        return self._cache["map_pool"]  # type: ignore[return-value]

    # Commands

    def cmd_sample_concepts(self) -> bool:
        """Sample the raw concepts and write `concepts.jsonl`."""
        config = self.curi.config

        def build() -> dict[str, bytes]:
            concepts = self.curi.grammar.sample_concepts(config.raw_concepts, config.seed)
            records = (self.curi.grammar.record(i, concept) for i, concept in enumerate(concepts))
            return {CONCEPTS: dump_jsonl(records).encode()}

        inputs = {
            "seed": config.seed,
            "raw_concepts": config.raw_concepts,
            "grammar": config.grammar().model_dump(mode="json"),
        }
        return self._stage("sample-concepts", inputs, build)

    def cmd_build_pool(self) -> bool:
        """Build the filter pool and write `pool.jsonl`."""
        config = self.curi.config

        def build() -> dict[str, bytes]:
            self._cache.pop("pool", None)
            pool = self.curi.scenes.build_pool(config.pool_size, config.seed)
            return {POOL: dump_jsonl(pool).encode()}

        inputs = {
            "seed": config.seed,
            "pool_size": config.pool_size,
            "objects": [config.min_objects, config.max_objects],
        }
        return self._stage("build-pool", inputs, build)

    @requires_artifacts(CONCEPTS, POOL)
    def cmd_filter(self) -> bool:
        """Filter the raw concepts on the pool and write the hypothesis space under `space/`."""
        config = self.curi.config

        def build() -> dict[str, bytes]:
            self._cache.pop("space", None)
            records = self.load_concepts()
            space = self.curi.filter.build_space(
                [parse_postfix(record.postfix) for record in records],
                self.load_pool(),
                ids=[record.id_ for record in records],
            )
            accepted = (self.curi.grammar.record(entry.concept_id, entry.concept) for entry in space.entries)
            return {
                SPACE_CONCEPTS: dump_jsonl(accepted).encode(),
                SPACE_SIGNATURES: dump_jsonl(entry.signature for entry in space.entries).encode(),
                SPACE_BITS: space.truth.to_bytes(),
                SPACE_CLUSTERS: _CLUSTERS.dump_json(space.clusters) + b"\n",
                SPACE_MANIFEST: _json_bytes(space.manifest()),
            }

        inputs = {
            "concepts": self._digest(CONCEPTS),
            "pool": self._digest(POOL),
            "max_rate": config.max_rate,
            "min_true": config.min_true,
        }
        return self._stage("filter", inputs, build)

    @requires_artifacts(SPACE_CONCEPTS, SPACE_BITS, SPACE_CLUSTERS)
    def cmd_split(self, *, kind: SplitKind) -> bool:
        """Build one split and write `splits/<kind>.json`."""
        spec = self.curi.splits.default_spec(kind)

        def build() -> dict[str, bytes]:
            space = self.load_space()
            assignment = self.curi.splits.assign(space, kind, spec)
            report = self.curi.splits.validate(assignment, space)
            for finding in report.findings:
                self.log("warning", f"Split {kind}: {finding.check}: {finding.message}")
            return {SPLIT.format(kind=kind): _json_bytes(assignment)}

        inputs = {"space": self._digest(SPACE_BITS), "spec": spec.model_dump(mode="json")}
        return self._stage(f"split:{kind}", inputs, build)

    @requires_artifacts(POOL, SPACE_BITS, SPLIT)
    def cmd_episodes(self, *, kind: SplitKind, mode: NegativesMode) -> bool:
        """Build the train, validation and test episodes of one split and negatives mode."""
        config = self.curi.config
        counts = {"train": config.episodes_train, "val": config.episodes_val, "test": config.episodes_test}

        def build() -> dict[str, bytes]:
            space, pool, assignment = self.load_space(), self.load_pool(), self.load_split(kind)
            return {
                EPISODES.format(kind=kind, mode=mode, side=side): dump_jsonl(
                    self.curi.episodes.build_episode_set(
                        assignment, side, pool, space, counts[side], mode, config.seed,
                    ),
                ).encode()
                for side in SIDES
            }

        inputs = {
            "split": self._digest(SPLIT.format(kind=kind)),
            "space": self._digest(SPACE_BITS),
            "pool": self._digest(POOL),
            "counts": counts,
            "seed": config.seed,
            "disjoint": config.disjoint_episodes,
        }
        return self._stage(f"episodes:{kind}:{mode}", inputs, build)

    @requires_artifacts(POOL, SPACE_BITS)
    def cmd_map_pool(self) -> bool:
        """Build the mAP pool and write it under `mappool/`."""
        config = self.curi.config

        def build() -> dict[str, bytes]:
            self._cache.pop("map_pool", None)
            map_pool = self.curi.metrics.build_map_pool(self.load_space(), self.load_pool())
            meta = MapPoolMeta(k=map_pool.k, concept_ids=map_pool.truth.ids.tolist(), sources=map_pool.sources)
            return {
                MAP_SCENES: dump_jsonl(map_pool.scenes).encode(),
                MAP_BITS: map_pool.truth.to_bytes(),
                MAP_META: _json_bytes(meta),
            }

        inputs = {
            "space": self._digest(SPACE_BITS),
            "pool": self._digest(POOL),
            "k": config.map_k,
            "seed": config.seed,
            "objects": [config.min_objects, config.max_objects],
        }
        return self._stage("map-pool", inputs, build)

    def _score(
        self,
        prior: OraclePrior,
        episodes: Sequence[Episode],
        space: HypothesisSpace,
        map_pool: MapPool,
    ) -> tuple[list[OracleRecord], list[float]]:
        oracle, metrics = self.curi.oracle, self.curi.metrics

        def score(episode: Episode) -> tuple[OracleRecord, float]:
            posterior = oracle.posterior(prior, episode, space)
            query = oracle.predict(posterior, space.truth, [example.scene for example in episode.query])
            record = OracleRecord(
                idx=episode.idx,
                oracle=prior.kind,
                consistent=posterior.consistent,
                fallback=posterior.fallback,
                scores=query.tolist(),
            )
            return record, metrics.episode_precision(oracle.predict(posterior, map_pool.truth), map_pool, episode)

        results = parallel_map(score, episodes, self.threads)
        return [record for record, _ in results], [precision for _, precision in results]

    @requires_artifacts(SPLIT, TEST_EPISODES, MAP_BITS, MAP_META, SPACE_BITS)
    def cmd_compgap(self, *, kind: SplitKind, mode: NegativesMode) -> MetricsReport:
        """Score the test episodes of a split with both oracles and write the metrics report."""
        name = REPORT.format(kind=kind, mode=mode)

        def build() -> dict[str, bytes]:
            space, map_pool, assignment = self.load_space(), self.load_map_pool(), self.load_split(kind)
            episodes = self.load_episodes(kind, mode, "test")
            outputs: dict[str, bytes] = {}
            summaries = {}
            for oracle in ("strong", "weak"):
                prior = self.curi.oracle.split_prior(assignment, space, oracle)  # type: ignore[arg-type]
                records, precisions = self._score(prior, episodes, space, map_pool)
                summaries[oracle] = self.curi.metrics.summarize(prior.kind, records, precisions, episodes)
                outputs[ORACLE_RECORDS.format(kind=kind, mode=mode, oracle=oracle)] = dump_jsonl(records).encode()
            report = self.curi.metrics.report(kind, mode, summaries["strong"], summaries["weak"], self.curi.config.seed)
            outputs[name] = _json_bytes(report)
            return outputs

        inputs = {
            "split": self._digest(SPLIT.format(kind=kind)),
            "episodes": self._digest(TEST_EPISODES.format(kind=kind, mode=mode)),
            "map_pool": self._digest(MAP_BITS),
            "space": self._digest(SPACE_BITS),
        }
        self._stage(f"compgap:{kind}:{mode}", inputs, build)
        return MetricsReport.model_validate_json((self.out / name).read_text())

    def summary(self, reports: Sequence[MetricsReport]) -> str:
        """Render the summary table of many reports as CSV, rows ordered by mAP gap."""
        rows = sorted((SummaryRow.from_report(report) for report in reports), key=lambda row: row.gap_map)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(SummaryRow.model_fields), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.model_dump())
        return buffer.getvalue()

    def cmd_all(self, modes: Sequence[NegativesMode] = MODES) -> list[MetricsReport]:
        """Run every stage for every configured split and negatives mode, then write `summary.csv`."""
        self.cmd_sample_concepts()
        self.cmd_build_pool()
        self.cmd_filter()
        self.cmd_map_pool()
        reports: list[MetricsReport] = []
        for kind in self.curi.config.split_kinds:
            self.cmd_split(kind=kind)
            for mode in modes:
                self.cmd_episodes(kind=kind, mode=mode)
                reports.append(self.cmd_compgap(kind=kind, mode=mode))
        atomic_write_text(self.out / SUMMARY, self.summary(reports))
        self.log("info", f"Wrote {SUMMARY} with {len(reports)} rows.")
        return reports

    # Audit

    def audit_space(self, samples: int = 50, scenes: int = 200) -> list[AuditFinding]:
        """Re-check the stored space: rules and thresholds on every concept, then a spot check of its truth table.

        Args:
            samples (int): How many concepts to re-evaluate scene by scene.
            scenes (int): How many pool scenes each of them is re-evaluated on.

        Returns:
            list[AuditFinding]: Every problem found.
        """
        space, pool = self.load_space(), self.load_pool()
        findings: list[AuditFinding] = []
        structural = [
            entry.concept_id for entry in space.entries if self.curi.filter.structural_reject(entry.concept) is not None
        ]
        if structural:
            findings.append(
                AuditFinding(
                    check="structural",
                    message="Accepted concepts match a rejection rule.",
                    concept_ids=structural,
                ),
            )
        outside = [
            entry.concept_id
            for entry in space.entries
            if not self.curi.filter.interesting(entry.signature, space.thresholds.max_rate, space.thresholds.min_true)
        ]
        if outside:
            findings.append(
                AuditFinding(
                    check="thresholds",
                    message="Accepted concepts fall outside the window.",
                    concept_ids=outside,
                ),
            )
        rng = substream(self.curi.config.seed, AUDIT_TAG)
        ids = rng.choice(space.ids, size=min(samples, len(space)), replace=False)
        positions = np.sort(rng.choice(len(pool), size=min(scenes, len(pool)), replace=False))
        stored = space.truth.columns(positions, ids)
        wrong = [
            int(concept_id)
            for row, concept_id in enumerate(ids)
            if any(
                self.curi.executor.evaluate(space.concept(int(concept_id)), pool[int(p)]) != stored[row, column]
                for column, p in enumerate(positions)
            )
        ]
        if wrong:
            findings.append(
                AuditFinding(
                    check="signatures",
                    message="Stored truth values disagree with evaluation.",
                    concept_ids=wrong,
                ),
            )
        return findings

    def audit(self) -> AuditReport:
        """Audit every stored space, split and episode file of the output directory."""
        report = AuditReport(space=self.audit_space())
        space, pool = self.load_space(), self.load_pool()
        for kind in self.curi.config.split_kinds:
            if not (self.out / SPLIT.format(kind=kind)).exists():
                continue
            report.splits[kind] = self.curi.splits.validate(self.load_split(kind), space)
            for mode in MODES:
                for side in SIDES:
                    relative = EPISODES.format(kind=kind, mode=mode, side=side)
                    if (self.out / relative).exists():
                        report.episodes[relative] = [
                            finding
                            for episode in self.load_episodes(kind, mode, side)
                            for finding in self.curi.episodes.audit(episode, pool, space)
                        ]
        self.log("info", "Audit passed." if report.ok else "Audit found problems.")
        return report
