"""This module contains the classes that represent evaluation signatures."""

from __future__ import annotations

import hashlib
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

if TYPE_CHECKING:
    from collections.abc import Sequence


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a boolean vector (or matrix rows) into bytes, least significant bit first."""
    return np.packbits(np.asarray(bits, dtype=bool), axis=-1, bitorder="little")


def signature_hash(packed: np.ndarray, size: int) -> str:
    """Return the 128-bit hex digest of a packed bit vector of the given length."""
    digest = hashlib.blake2b(digest_size=16)
    digest.update(size.to_bytes(8, "little"))
    digest.update(np.ascontiguousarray(packed, dtype=np.uint8).tobytes())
    return digest.hexdigest()


class EvaluationSignature(BaseModel):
    """A class that represents the truth values of one concept over a scene pool."""

    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)

    concept_id: int
    true_count: int
    true_rate: float
    sig_hash: str
    packed: np.ndarray = Field(..., exclude=True, repr=False)
    size: int = Field(..., exclude=True)

    @classmethod
    def from_bits(cls, concept_id: int, bits: np.ndarray) -> EvaluationSignature:
        """Build a signature from a boolean vector over the pool."""
        bits = np.asarray(bits, dtype=bool)
        true_count = int(bits.sum())
        packed = pack_bits(bits)
        return cls(
            concept_id=concept_id,
            true_count=true_count,
            true_rate=true_count / len(bits),
            sig_hash=signature_hash(packed, len(bits)),
            packed=packed,
            size=len(bits),
        )

    @property
    def bits(self) -> np.ndarray:
        """The boolean vector over the pool."""
        return np.unpackbits(self.packed, count=self.size, bitorder="little").astype(bool)

    def same_bits(self, other: EvaluationSignature) -> bool:
        """Whether two signatures have bit-identical vectors."""
        return self.size == other.size and bool(np.array_equal(self.packed, other.packed))


class TruthTable:
    """A class that represents the packed truth values of many concepts over one set of scenes.

    Row r holds the bits of concept `ids[r]`; bit p of a row is the truth value on scene position p.
    """

    packed: np.ndarray
    ids: np.ndarray
    scene_count: int

    def __init__(self, packed: np.ndarray, ids: Sequence[int] | np.ndarray, scene_count: int) -> None:
        """Initialize the table from packed rows."""
        self.packed = np.ascontiguousarray(packed, dtype=np.uint8).reshape(len(ids), (scene_count + 7) // 8)
        self.ids = np.asarray(ids, dtype=np.int64)
        self.scene_count = scene_count
        self._rows = {int(concept_id): row for row, concept_id in enumerate(self.ids)}

    @classmethod
    def from_rows(cls, rows: np.ndarray, ids: Sequence[int] | np.ndarray) -> TruthTable:
        """Build a table from an unpacked (concepts, scenes) boolean matrix."""
        rows = np.asarray(rows, dtype=bool)
        return cls(pack_bits(rows), ids, rows.shape[-1])

    @classmethod
    def from_signatures(cls, signatures: Sequence[EvaluationSignature], scene_count: int) -> TruthTable:
        """Build a table from signatures over the same pool."""
        packed = np.zeros((len(signatures), (scene_count + 7) // 8), dtype=np.uint8)
        for row, signature in enumerate(signatures):
            packed[row] = signature.packed
        return cls(packed, [signature.concept_id for signature in signatures], scene_count)

    @classmethod
    def from_bytes(cls, data: bytes, ids: Sequence[int], scene_count: int) -> TruthTable:
        """Load a table written by `to_bytes`."""
        return cls(np.frombuffer(data, dtype=np.uint8), ids, scene_count)

    def to_bytes(self) -> bytes:
        """Return the packed rows, concatenated in row order."""
        return self.packed.tobytes()

    def __len__(self) -> int:
        """Return the number of concepts."""
        return len(self.ids)

    def __contains__(self, concept_id: object) -> bool:
        """Whether the table holds a concept."""
        return concept_id in self._rows

    def row_index(self, concept_ids: Sequence[int] | np.ndarray) -> np.ndarray:
        """Return the row positions of the given concepts."""
        return np.fromiter((self._rows[int(i)] for i in concept_ids), dtype=np.int64, count=len(concept_ids))

    def row(self, concept_id: int) -> np.ndarray:
        """Return the boolean vector of one concept."""
        packed = self.packed[self._rows[int(concept_id)]]
        return np.unpackbits(packed, count=self.scene_count, bitorder="little").astype(bool)

    def rows(self, concept_ids: Sequence[int] | np.ndarray | None = None) -> np.ndarray:
        """Return the (concepts, scenes) boolean matrix of the given concepts (all by default)."""
        packed = self.packed if concept_ids is None else self.packed[self.row_index(concept_ids)]
        return np.unpackbits(packed, axis=1, count=self.scene_count, bitorder="little").astype(bool)

    def columns(
        self,
        positions: Sequence[int] | np.ndarray,
        concept_ids: Sequence[int] | np.ndarray | None = None,
    ) -> np.ndarray:
        """Return the truth values of the given concepts (all by default) at a few scene positions.

        Args:
            positions (Sequence[int] | np.ndarray): Scene positions.
            concept_ids (Sequence[int] | np.ndarray | None): Concepts to read. Defaults to every row.

        Returns:
            np.ndarray: A (concepts, positions) boolean matrix.
        """
        positions = np.asarray(positions, dtype=np.int64)
        packed = self.packed if concept_ids is None else self.packed[self.row_index(concept_ids)]
        selected = packed[:, positions >> 3]
        return ((selected >> (positions & 7).astype(np.uint8)) & 1).astype(bool)

    def union(self, concept_ids: Sequence[int] | np.ndarray) -> np.ndarray:
        """Return the scenes on which at least one of the given concepts is true."""
        if len(concept_ids) == 0:
            return np.zeros(self.scene_count, dtype=bool)
        packed = np.bitwise_or.reduce(self.packed[self.row_index(concept_ids)], axis=0)
        return np.unpackbits(packed, count=self.scene_count, bitorder="little").astype(bool)
