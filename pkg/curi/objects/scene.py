"""This module contains the classes that represent scene schemas and scene pools."""

from __future__ import annotations

from typing import TYPE_CHECKING, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from curi.objects.common import ACCESSOR_COLUMN, COLORS, MATERIALS, SHAPES, SIZES

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

PROPERTY_COUNT = len(ACCESSOR_COLUMN)


class SceneObject(BaseModel):
    """A class that represents one object of a scene schema."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    color: Literal["gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow"]
    shape: Literal["cube", "sphere", "cylinder"]
    material: Literal["rubber", "metal"]
    size: Literal["small", "large"]
    location_x: int = Field(..., alias="locx", ge=1, le=8)
    location_y: int = Field(..., alias="locy", ge=1, le=8)

    def codes(self) -> tuple[int, int, int, int, int, int]:
        """Return the comparable code of every property, in accessor column order."""
        return (
            COLORS.index(self.color),
            SHAPES.index(self.shape),
            MATERIALS.index(self.material),
            SIZES.index(self.size),
            self.location_x,
            self.location_y,
        )

    @classmethod
    def from_codes(cls, codes: Sequence[int]) -> SceneObject:
        """Build an object from property codes in accessor column order."""
        color, shape, material, size, location_x, location_y = (int(code) for code in codes)
        return cls(
            color=COLORS[color],  # type: ignore[arg-type]
            shape=SHAPES[shape],  # type: ignore[arg-type]
            material=MATERIALS[material],  # type: ignore[arg-type]
            size=SIZES[size],  # type: ignore[arg-type]
            locx=location_x,
            locy=location_y,
        )


class Scene(BaseModel):
    """A class that represents a scene schema: a set of objects on an 8x8 location grid."""

    model_config = ConfigDict(frozen=True)

    id_: int = Field(..., alias="id", ge=0)
    objects: tuple[SceneObject, ...]

    @model_validator(mode="after")
    def _check_cells(self) -> Scene:
        cells = {(obj.location_x, obj.location_y) for obj in self.objects}
        if len(cells) != len(self.objects):
            msg = f"scene {self.id_} places two objects on the same cell"
            raise ValueError(msg)
        return self


class ScenePool:
    """A class that represents an indexed pool of scenes stored as packed arrays.

    `properties[i, k]` holds the property codes of object slot k of scene i, and `mask[i, k]` tells
    whether the slot is occupied. Empty slots are zero-filled and never read unmasked.
    """

    properties: np.ndarray
    mask: np.ndarray
    ids: np.ndarray
    seed: int | None

    def __init__(
        self,
        properties: np.ndarray,
        mask: np.ndarray,
        *,
        ids: np.ndarray | None = None,
        seed: int | None = None,
    ) -> None:
        """Initialize the pool from packed arrays."""
        self.properties = np.ascontiguousarray(properties, dtype=np.int8)
        self.mask = np.ascontiguousarray(mask, dtype=bool)
        self.ids = np.arange(len(self.mask), dtype=np.int64) if ids is None else np.asarray(ids, dtype=np.int64)
        self.seed = seed

    @classmethod
    def from_scenes(cls, scenes: Sequence[Scene], *, slots: int = 5, seed: int | None = None) -> ScenePool:
        """Pack scene schemas into a pool.

        Args:
            scenes (Sequence[Scene]): The scenes, in pool order.
            slots (int): The number of object slots per scene.
            seed (int | None): The seed the scenes were generated from, if any.

        Returns:
            ScenePool: The packed pool, keeping the scenes' own ids.
        """
        slots = max([slots, *(len(scene.objects) for scene in scenes)])
        properties = np.zeros((len(scenes), slots, PROPERTY_COUNT), dtype=np.int8)
        mask = np.zeros((len(scenes), slots), dtype=bool)
        for i, scene in enumerate(scenes):
            for k, obj in enumerate(scene.objects):
                properties[i, k] = obj.codes()
                mask[i, k] = True
        ids = np.array([scene.id_ for scene in scenes], dtype=np.int64)
        return cls(properties, mask, ids=ids, seed=seed)

    def __len__(self) -> int:
        """Return the number of scenes."""
        return len(self.mask)

    def __getitem__(self, index: int) -> Scene:
        """Return the scene at a position."""
        count = int(self.mask[index].sum())
        objects = tuple(SceneObject.from_codes(self.properties[index, k]) for k in range(count))
        return Scene(id=int(self.ids[index]), objects=objects)

    def __iter__(self) -> Iterator[Scene]:
        """Iterate over the scenes in pool order."""
        return (self[i] for i in range(len(self)))

    def take(self, positions: Sequence[int] | np.ndarray) -> ScenePool:
        """Return the sub-pool made of the scenes at the given positions."""
        positions = np.asarray(positions, dtype=np.int64)
        return ScenePool(self.properties[positions], self.mask[positions], ids=self.ids[positions], seed=self.seed)

    @property
    def object_counts(self) -> np.ndarray:
        """The number of objects of every scene."""
        return self.mask.sum(axis=1)
