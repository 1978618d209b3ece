"""Shared fixtures: a small run configuration, a seeded pool and a hand-picked hypothesis space."""

from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from curi import Curi
from curi.grammar.postfix import parse_postfix
from curi.objects.config import RunConfig
from curi.objects.scene import Scene, SceneObject, ScenePool
from curi.objects.space import HypothesisSpace, Thresholds

if TYPE_CHECKING:
    from pathlib import Path

TOY_CONCEPTS = [
    "blue x color? = exists=",
    "cube x shape? = exists=",
    "blue x color? = cube x shape? = and exists=",
    "metal x material? = exists=",
    "S color? blue any exists=",
    "large x size? = exists=",
    "red x color? = exists=",
    "sphere x shape? = metal x material? = and exists=",
]
BLUE, CUBE, BLUE_CUBE, METAL, ANY_BLUE, LARGE, RED, METAL_SPHERE = range(len(TOY_CONCEPTS))

Obj = tuple[str, str, str, str, int, int]


def make_scene(scene_id: int, *objects: Obj) -> Scene:
    """Build a scene from (color, shape, material, size, locx, locy) tuples."""
    return Scene(
        id=scene_id,
        objects=tuple(
            SceneObject(color=color, shape=shape, material=material, size=size, locx=x, locy=y)  # type: ignore[arg-type]
            for color, shape, material, size, x, y in objects
        ),
    )


def make_pool(scenes: list[Scene]) -> ScenePool:
    """Pack scenes into a pool."""
    return ScenePool.from_scenes(scenes)


@pytest.fixture
def config(tmp_path: Path) -> RunConfig:
    return RunConfig(
        seed=0,
        raw_concepts=300,
        pool_size=600,
        max_rate=0.5,
        min_true=10,
        episodes_train=4,
        episodes_val=2,
        episodes_test=4,
        split_kinds=["instance_iid", "concept_iid"],
        out=tmp_path / "out",
        threads=1,
    )


@pytest.fixture
def curi(config: RunConfig) -> Curi:
    return Curi(config)


@pytest.fixture
def pool(curi: Curi) -> ScenePool:
    return curi.scenes.build_pool(600, seed=0)


@pytest.fixture
def toy_space(curi: Curi, pool: ScenePool) -> HypothesisSpace:
    concepts = [parse_postfix(tokens) for tokens in TOY_CONCEPTS]
    return curi.filter.build_space(concepts, pool, Thresholds(max_rate=1.0, min_true=10))
