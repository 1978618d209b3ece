from __future__ import annotations

import numpy as np
import pytest
from pydantic import ValidationError

from curi import Curi
from curi.exceptions import InfeasibleRangeError
from curi.objects.config import RunConfig
from curi.objects.scene import ScenePool
from curi.scene import sample_codes
from curi.utils import substream

from .conftest import make_scene


def test_pool_is_deterministic_and_prefix_stable(curi: Curi) -> None:
    small = curi.scenes.build_pool(50, seed=4)
    large = curi.scenes.build_pool(100, seed=4)
    assert np.array_equal(small.properties, large.properties[:50])
    assert np.array_equal(small.mask, large.mask[:50])
    assert not np.array_equal(curi.scenes.build_pool(50, seed=5).properties, small.properties)


def test_pool_does_not_depend_on_threads() -> None:
    single = Curi(RunConfig(threads=1)).scenes.build_pool(9000, seed=1)
    multi = Curi(RunConfig(threads=4)).scenes.build_pool(9000, seed=1)
    assert np.array_equal(single.properties, multi.properties)


def test_pool_scenes_are_valid(pool: ScenePool) -> None:
    counts = pool.object_counts
    assert counts.min() >= 2
    assert counts.max() <= 5
    for scene in pool.take(range(100)):
        cells = {(obj.location_x, obj.location_y) for obj in scene.objects}
        assert len(cells) == len(scene.objects)
    assert [scene.id_ for scene in pool.take([3, 7])] == [3, 7]


@pytest.fixture(scope="module")
def large_pool() -> ScenePool:
    return Curi(RunConfig(threads=1)).scenes.build_pool(4000, seed=2)


def _within(counts: np.ndarray, sigmas: float = 4.0) -> bool:
    n, p = counts.sum(), 1 / len(counts)
    return bool(np.all(np.abs(counts - n * p) <= sigmas * np.sqrt(n * p * (1 - p))))


def test_object_count_is_uniform(large_pool: ScenePool) -> None:
    counts = np.bincount(large_pool.object_counts, minlength=6)[2:6]
    assert counts.min() > 0
    assert _within(counts)


@pytest.mark.parametrize(
    ("column", "low", "size"),
    [(0, 0, 8), (1, 0, 3), (2, 0, 2), (3, 0, 2), (4, 1, 8), (5, 1, 8)],
)
def test_property_marginals_are_uniform(large_pool: ScenePool, column: int, low: int, size: int) -> None:
    codes = large_pool.properties[..., column][large_pool.mask].astype(np.int64) - low
    assert codes.min() == 0
    assert codes.max() == size - 1
    assert _within(np.bincount(codes, minlength=size))


@pytest.mark.parametrize("object_range", [(0, 3), (3, 2), (1, 65)])
def test_infeasible_ranges(object_range: tuple[int, int]) -> None:
    with pytest.raises(InfeasibleRangeError):
        sample_codes(substream(0, "test"), object_range)


def test_fixed_object_count() -> None:
    codes = sample_codes(substream(0, "test"), (4, 4))
    assert codes.shape == (4, 6)
    assert len({(x, y) for x, y in codes[:, 4:]}) == 4


def test_scene_rejects_shared_cell() -> None:
    with pytest.raises(ValidationError):
        make_scene(0, ("blue", "cube", "metal", "small", 1, 1), ("red", "cube", "metal", "small", 1, 1))


def test_scene_json_uses_location_aliases() -> None:
    scene = make_scene(3, ("blue", "cube", "metal", "small", 2, 7))
    data = scene.model_dump(by_alias=True)
    assert data["id"] == 3
    assert data["objects"][0]["locx"] == 2
    assert data["objects"][0]["locy"] == 7


def test_pool_round_trips_scenes() -> None:
    scenes = [
        make_scene(0, ("blue", "cube", "metal", "small", 1, 1)),
        make_scene(1, ("red", "sphere", "rubber", "large", 8, 8), ("gray", "cylinder", "metal", "small", 3, 4)),
    ]
    pool = ScenePool.from_scenes(scenes)
    assert len(pool) == 2
    assert list(pool) == scenes
