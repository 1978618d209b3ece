from __future__ import annotations

import csv
import io
import json
import sys
from typing import TYPE_CHECKING

import pytest

from curi import Curi
from curi.__main__ import main
from curi.exceptions import DigestMismatchError, MissingArtifactError
from curi.grammar.postfix import parse_postfix
from curi.objects.concept import ConceptRecord
from curi.objects.config import RunConfig
from curi.pipeline import POOL, REPORT, SPACE_CONCEPTS, SUMMARY, Pipeline

if TYPE_CHECKING:
    from pathlib import Path


@pytest.fixture
def pipeline(curi: Curi) -> Pipeline:
    return Pipeline(curi)


@pytest.fixture
def finished(pipeline: Pipeline) -> Pipeline:
    pipeline.cmd_all()
    return pipeline


def test_all_writes_the_summary(finished: Pipeline) -> None:
    rows = list(csv.DictReader(io.StringIO((finished.out / SUMMARY).read_text())))
    assert len(rows) == 4
    assert {(row["split"], row["negatives"]) for row in rows} == {
        (kind, mode) for kind in ("instance_iid", "concept_iid") for mode in ("hard", "easy")
    }
    assert [float(row["gap_map"]) for row in rows] == sorted(float(row["gap_map"]) for row in rows)
    for row in rows:
        assert row["modality"] == "schema-oracle"
        assert int(row["episodes"]) == 4
        if row["split"] == "instance_iid":
            assert float(row["gap_map"]) == 0.0
            assert float(row["gap_cba"]) == 0.0


def test_concept_iid_strong_oracle_never_falls_back(finished: Pipeline) -> None:
    for mode in ("hard", "easy"):
        report = json.loads((finished.out / REPORT.format(kind="concept_iid", mode=mode)).read_text())
        assert 0.0 <= report["weak"]["fallback"] <= 1.0
        assert report["strong"]["fallback"] == 0.0
        assert report["gap"]["map"] == pytest.approx(report["strong"]["map"] - report["weak"]["map"])


def test_rerun_skips_every_stage(finished: Pipeline, config: RunConfig) -> None:
    before = {path: path.read_bytes() for path in finished.out.rglob("*") if path.is_file()}
    rerun = Pipeline(Curi(config))
    assert not rerun.cmd_sample_concepts()
    assert not rerun.cmd_filter()
    rerun.cmd_all()
    after = {path: path.read_bytes() for path in finished.out.rglob("*") if path.is_file()}
    assert after == before


def test_tampered_artifact_is_refused(finished: Pipeline, config: RunConfig) -> None:
    pool = finished.out / POOL
    pool.write_text(pool.read_text().replace('"id":0', '"id":999', 1))
    with pytest.raises(DigestMismatchError):
        Pipeline(Curi(config)).cmd_filter()


def test_missing_artifact_is_refused(curi: Curi, tmp_path: Path) -> None:
    with pytest.raises(MissingArtifactError):
        Pipeline(curi, out=tmp_path / "empty").cmd_filter()
    with pytest.raises(MissingArtifactError):
        Pipeline(curi, out=tmp_path / "empty").cmd_compgap(kind="concept_iid", mode="hard")


def test_audit_passes(finished: Pipeline) -> None:
    report = finished.audit()
    assert report.ok
    assert set(report.splits) == {"instance_iid", "concept_iid"}


def test_audit_flags_structural_violations(finished: Pipeline, config: RunConfig) -> None:
    path = finished.out / SPACE_CONCEPTS
    lines = path.read_text().splitlines()
    first = ConceptRecord.model_validate_json(lines[0])
    forged = finished.curi.grammar.record(first.id_, parse_postfix("S locationY? x locationX? any exists="))
    path.write_text("\n".join([forged.model_dump_json(by_alias=True), *lines[1:]]) + "\n")
    report = Pipeline(Curi(config)).audit()
    assert not report.ok
    structural = [finding for finding in report.space if finding.check == "structural"]
    assert [finding.concept_ids for finding in structural] == [[first.id_]]


def test_object_range_rebuilds_the_map_pool(finished: Pipeline, config: RunConfig) -> None:
    assert not Pipeline(Curi(config)).cmd_map_pool()
    wider = config.model_copy(update={"max_objects": 6})
    assert Pipeline(Curi(wider)).cmd_map_pool()


def test_manifest_records_timings(finished: Pipeline) -> None:
    timings = finished.manifest.timings()
    assert {"sample-concepts", "build-pool", "filter", "map-pool"} <= set(timings)
    assert all(seconds >= 0 for seconds in timings.values())


def _config_file(tmp_path: Path) -> Path:
    path = tmp_path / "run.cfg"
    path.write_text(
        "raw_concepts = 300\npool_size = 600\nmax_rate = 0.5\n"
        "episodes_train = 2\nepisodes_val = 1\nepisodes_test = 3\nthreads = 1\n",
    )
    return path


def test_cli_all(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    out = tmp_path / "cli"
    argv = ["curi", "all", "--config", str(_config_file(tmp_path)), "--out", str(out), "--split", "instance_iid"]
    monkeypatch.setattr(sys, "argv", [*argv, "--negatives", "easy"])
    main()
    rows = list(csv.DictReader(io.StringIO((out / SUMMARY).read_text())))
    assert [(row["split"], row["negatives"]) for row in rows] == [("instance_iid", "easy")]


def test_cli_reports_errors_as_json(
    tmp_path: Path,
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    monkeypatch.setattr(sys, "argv", ["curi", "filter", "--out", str(tmp_path / "empty")])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 2
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error"] == "MissingArtifactError"
    assert "concepts.jsonl" in error["message"]
