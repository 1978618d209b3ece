"""Utility functions for curi module."""

from __future__ import annotations

import hashlib
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import TYPE_CHECKING, TypeVar

import numpy as np

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence

    from pydantic import BaseModel

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "CURI_THREADS"


def tag_key(tag: str) -> int:
    """Map a stage tag to a stable 32-bit integer.

    Args:
        tag (str): The stage tag, e.g. "pool".

    Returns:
        int: The first four bytes of the sha256 digest of the tag.
    """
    return int.from_bytes(hashlib.sha256(tag.encode()).digest()[:4], "little")


def substream(seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Derive the random stream of one item of one stage.

    The stream depends only on (seed, tag, index), never on scheduling, so work can be split over
    threads without changing results.

    Args:
        seed (int): The master seed.
        tag (str): The stage tag.
        index (int): The item index within the stage.

    Returns:
        np.random.Generator: A counter-based Philox generator.
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(tag_key(tag), index))
    return np.random.Generator(np.random.Philox(sequence))


def thread_count(requested: int | None = None) -> int:
    """Return the number of worker threads, capped by the CURI_THREADS environment variable."""
    count = requested or os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap is not None and cap.strip():
        count = min(count, max(1, int(cap)))
    return max(1, count)


def parallel_map(func: Callable[[T], R], items: Sequence[T], threads: int = 1) -> list[R]:
    """Apply a function to every item, preserving input order.

    Args:
        func (Callable[[T], R]): The function to apply.
        items (Sequence[T]): The inputs.
        threads (int): The number of worker threads; 1 runs inline.

    Returns:
        list[R]: The outputs, in input order.
    """
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


def sha256_bytes(data: bytes) -> str:
    """Return the hex sha256 digest of a byte string."""
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: Path) -> str:
    """Return the hex sha256 digest of a file."""
    digest = hashlib.sha256()
    with path.open("rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def atomic_write_bytes(path: Path, data: bytes) -> None:
    """Write a file so that readers never observe a partial write."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        Path(tmp).replace(path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def atomic_write_text(path: Path, text: str) -> None:
    """Write a text file atomically."""
    atomic_write_bytes(path, text.encode())


def dump_jsonl(records: Iterable[BaseModel]) -> str:
    """Serialize pydantic records to JSON lines, using field aliases."""
    return "".join(record.model_dump_json(by_alias=True) + "\n" for record in records)


def write_jsonl(path: Path, records: Iterable[BaseModel]) -> None:
    """Write pydantic records to a JSON lines file atomically."""
    atomic_write_text(path, dump_jsonl(records))


def read_lines(path: Path) -> list[str]:
    """Read the non-empty lines of a text file."""
    with path.open() as f:
        return [line for line in (raw.strip() for raw in f) if line]
