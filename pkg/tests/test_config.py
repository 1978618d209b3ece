from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest
from pydantic import ValidationError

from curi import Curi
from curi.exceptions import ConfigFileError
from curi.objects.config import RunConfig
from curi.utils import parallel_map, substream, thread_count

if TYPE_CHECKING:
    from pathlib import Path

CONFIG = """\
# desk-scale run
seed = 7
pool_size = 2000
split_kinds = concept_iid, binding_color
negatives = easy
weight.BOOL.C= = 2.0
"""


def test_from_file(tmp_path: Path) -> None:
    path = tmp_path / "run.cfg"
    path.write_text(CONFIG)
    config = RunConfig.from_file(path)
    assert config.seed == 7
    assert config.pool_size == 2000
    assert config.split_kinds == ["concept_iid", "binding_color"]
    assert config.negatives == "easy"
    assert config.grammar_weights["BOOL"]["C="] == 2.0
    assert config.grammar().weights["BOOL"]["C="] == 2.0


def test_overrides_take_precedence(tmp_path: Path) -> None:
    path = tmp_path / "run.cfg"
    path.write_text(CONFIG)
    config = RunConfig.from_file(path, seed=11, out=tmp_path / "elsewhere", threads=None)
    assert config.seed == 11
    assert config.out == tmp_path / "elsewhere"
    assert config.threads is None


@pytest.mark.parametrize(
    "text",
    ["colour = blue\n", "pool_size = many\n", "seed\n", "weight.BOOL.C= = heavy\n", "split_kinds = diagonal\n"],
)
def test_bad_config_files(tmp_path: Path, text: str) -> None:
    path = tmp_path / "run.cfg"
    path.write_text(text)
    with pytest.raises(ConfigFileError):
        RunConfig.from_file(path)


def test_missing_config_file(tmp_path: Path) -> None:
    with pytest.raises(ConfigFileError):
        RunConfig.from_file(tmp_path / "absent.cfg")


def test_object_range_is_checked() -> None:
    with pytest.raises(ValidationError):
        RunConfig(min_objects=4, max_objects=3)


def test_paper_scale() -> None:
    config = RunConfig.paper_scale()
    assert config.pool_size == 990_000
    assert config.episodes_test == 20_000
    assert config.max_rate == 0.10


def test_thread_cap(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("CURI_THREADS", "2")
    assert thread_count(8) == 2
    assert Curi(RunConfig(threads=16)).threads == 2
    monkeypatch.delenv("CURI_THREADS")
    assert thread_count(3) == 3


def test_substreams_are_independent_of_order() -> None:
    first = substream(5, "pool", 3).integers(0, 1 << 30, size=4)
    assert np.array_equal(first, substream(5, "pool", 3).integers(0, 1 << 30, size=4))
    assert not np.array_equal(first, substream(5, "pool", 4).integers(0, 1 << 30, size=4))
    assert not np.array_equal(first, substream(5, "episodes", 3).integers(0, 1 << 30, size=4))


def test_parallel_map_keeps_order() -> None:
    assert parallel_map(lambda x: x * x, list(range(50)), threads=4) == [x * x for x in range(50)]
