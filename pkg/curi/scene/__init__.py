"""This module provides a class that samples scene schemas and scene pools."""

from __future__ import annotations

import numpy as np

from curi.base.component import BaseComponent
from curi.exceptions import InfeasibleRangeError
from curi.objects.common import COLORS, GRID_CELLS, LOCATIONS, MATERIALS, SHAPES, SIZES
from curi.objects.scene import PROPERTY_COUNT, Scene, SceneObject, ScenePool
from curi.utils import parallel_map, substream

POOL_TAG = "pool"
_CHUNK = 4096


def sample_codes(rng: np.random.Generator, object_range: tuple[int, int] = (2, 5)) -> np.ndarray:
    """Sample the property codes of one scene.

    The object count is uniform over the range, every categorical property uniform over its domain, and
    location cells are drawn without replacement from the 8x8 grid.

    Args:
        rng (np.random.Generator): The random stream.
        object_range (tuple[int, int]): The inclusive range of the object count.

    Returns:
        np.ndarray: An (objects, 6) array of codes in accessor column order.
    """
    low, high = object_range
    if low < 1 or low > high:
        raise InfeasibleRangeError(message=f"Invalid object count range [{low}, {high}].")
    if high > GRID_CELLS:
        raise InfeasibleRangeError(message=f"Cannot place {high} objects on {GRID_CELLS} distinct cells.")
    count = int(rng.integers(low, high + 1))
    cells = rng.choice(GRID_CELLS, size=count, replace=False)
    codes = np.empty((count, PROPERTY_COUNT), dtype=np.int8)
    codes[:, 0] = rng.integers(0, len(COLORS), size=count)
    codes[:, 1] = rng.integers(0, len(SHAPES), size=count)
    codes[:, 2] = rng.integers(0, len(MATERIALS), size=count)
    codes[:, 3] = rng.integers(0, len(SIZES), size=count)
    codes[:, 4] = cells // len(LOCATIONS) + 1
    codes[:, 5] = cells % len(LOCATIONS) + 1
    return codes


class SceneSampler(BaseComponent):
    """A class that samples scene schemas and builds deterministic scene pools."""

    @property
    def object_range(self) -> tuple[int, int]:
        """The configured inclusive range of objects per scene."""
        return (self.curi.config.min_objects, self.curi.config.max_objects)

    def sample_scene(
        self,
        rng: np.random.Generator,
        object_range: tuple[int, int] | None = None,
        *,
        scene_id: int = 0,
    ) -> Scene:
        """Sample one scene schema.

        Args:
            rng (np.random.Generator): The random stream.
            object_range (tuple[int, int] | None): The object count range. Defaults to the configured one.
            scene_id (int): The id given to the scene.

        Returns:
            Scene: The sampled scene.
        """
        codes = sample_codes(rng, object_range or self.object_range)
        return Scene(id=scene_id, objects=tuple(SceneObject.from_codes(row) for row in codes))

    def build_pool(self, n: int, seed: int) -> ScenePool:
        """Build a pool of n scenes where scene i is drawn from `substream(seed, "pool", i)`.

        Pools of different sizes built from the same seed therefore share their prefix.

        Args:
            n (int): The number of scenes.
            seed (int): The pool seed.

        Returns:
            ScenePool: The pool; scene ids equal positions.
        """
        object_range = self.object_range
        slots = object_range[1]
        properties = np.zeros((n, slots, PROPERTY_COUNT), dtype=np.int8)
        mask = np.zeros((n, slots), dtype=bool)

        def fill(start: int) -> None:
            for i in range(start, min(start + _CHUNK, n)):
                codes = sample_codes(substream(seed, POOL_TAG, i), object_range)
                properties[i, : len(codes)] = codes
                mask[i, : len(codes)] = True

        parallel_map(fill, range(0, n, _CHUNK), self.threads)
        self.log("info", f"Built a pool of {n} scenes from seed {seed}.")
        return ScenePool(properties, mask, seed=seed)

    def fresh_scene(self, seed: int, tag: str, index: int, scene_id: int) -> Scene:
        """Sample a scene outside any pool, from its own tagged substream."""
        return self.sample_scene(substream(seed, tag, index), scene_id=scene_id)
