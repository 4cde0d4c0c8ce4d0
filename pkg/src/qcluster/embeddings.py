"""Embedding vectors, the SOCV vector file format, and a hashing embedder.

The SOCV format is the interchange surface between this pipeline and any
external encoder. Layout, little-endian throughout::

    magic 'SOCV' (4 bytes) | version u32 = 1 | dim u32 | count u64
    then count records of: question_id u64 | dim x f32

No padding, no compression. Vectors are stored as 32-bit floats; all cosine
arithmetic downstream happens in 64-bit.
"""

from __future__ import annotations

import hashlib
import re
import struct
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .errors import VectorFormatError

MAGIC = b"SOCV"
VERSION = 1
HEADER = struct.Struct("<4sIIQ")

_TOKEN_RE = re.compile(r"[^0-9a-z]+")


@dataclass(frozen=True)
class EmbeddingVector:
    question_id: int
    values: np.ndarray  # float32, shape (dim,)

    def __post_init__(self):
        if self.question_id <= 0:
            raise ValueError("question_id must be positive")


class VectorCollection:
    """Immutable set of equal-dimension vectors with unique question ids."""

    def __init__(self, dim: int, ids: Sequence[int], matrix: np.ndarray):
        ids = np.asarray(ids, dtype=np.uint64)
        matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        if matrix.shape != (len(ids), dim):
            raise VectorFormatError(
                f"matrix shape {matrix.shape} inconsistent with {len(ids)} ids of dim {dim}"
            )
        seen: dict[int, int] = {}
        for pos, qid in enumerate(ids.tolist()):
            if qid in seen:
                raise VectorFormatError(f"duplicate question id {qid}")
            seen[qid] = pos
        if len(ids):
            nonzero = matrix.any(axis=1)
            if not nonzero.all():
                first = int(np.argmin(nonzero))
                raise VectorFormatError(f"zero vector for question id {int(ids[first])}")
        self.dim = dim
        self.ids = ids
        self.matrix = matrix
        self.id_index = seen
        self.matrix.setflags(write=False)
        self.ids.setflags(write=False)

    @classmethod
    def from_vectors(cls, vectors: Sequence[EmbeddingVector], dim: int | None = None):
        if not vectors and dim is None:
            raise ValueError("dim required for an empty collection")
        if dim is None:
            dim = len(vectors[0].values)
        matrix = np.zeros((len(vectors), dim), dtype=np.float32)
        ids = []
        for i, v in enumerate(vectors):
            if len(v.values) != dim:
                raise VectorFormatError(
                    f"vector for id {v.question_id} has dim {len(v.values)}, expected {dim}"
                )
            matrix[i] = v.values
            ids.append(v.question_id)
        return cls(dim, ids, matrix)

    def __len__(self) -> int:
        return len(self.ids)

    def vector(self, question_id: int) -> EmbeddingVector:
        pos = self.id_index[question_id]
        return EmbeddingVector(question_id, self.matrix[pos])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VectorCollection)
            and self.dim == other.dim
            and np.array_equal(self.ids, other.ids)
            and np.array_equal(self.matrix, other.matrix)
        )


def _token_hash(token: str, seed: int) -> tuple[int, int]:
    key = seed.to_bytes(8, "little", signed=True)
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=9, key=key).digest()
    return int.from_bytes(digest[:8], "little"), digest[8] & 1


def hash_embed(text: str, dim: int = 768, seed: int = 0) -> np.ndarray:
    """Deterministic bag-of-tokens embedding: seeded signed feature hashing.

    Lowercases, splits on non-alphanumerics, hashes each token to a bucket
    with a +/-1 sign, accumulates, and L2-normalizes. Identical token
    multisets produce identical vectors. Returns a float32 array.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    tokens = [t for t in _TOKEN_RE.split(text.lower()) if t]
    if not tokens:
        raise ValueError("empty text")
    acc = np.zeros(dim, dtype=np.float64)
    for token in tokens:
        h, sign_bit = _token_hash(token, seed)
        acc[h % dim] += 1.0 if sign_bit else -1.0
    norm = float(np.sqrt(np.dot(acc, acc)))
    if norm == 0.0:
        # Signed counts can cancel exactly; fall back to a one-hot on the
        # first token so the vector stays usable.
        h, _ = _token_hash(tokens[0], seed)
        acc[h % dim] = 1.0
        norm = 1.0
    return (acc / norm).astype(np.float32)


def write_vectors(collection: VectorCollection, sink: IO[bytes]) -> int:
    """Serialize a collection as SOCV; returns the byte count written."""
    header = HEADER.pack(MAGIC, VERSION, collection.dim, len(collection))
    sink.write(header)
    record = np.dtype([("id", "<u8"), ("values", "<f4", (collection.dim,))])
    records = np.zeros(len(collection), dtype=record)
    records["id"] = collection.ids
    records["values"] = collection.matrix
    payload = records.tobytes()
    sink.write(payload)
    return len(header) + len(payload)


def read_vectors(source: IO[bytes]) -> VectorCollection:
    """Parse and validate a SOCV stream."""
    header = source.read(HEADER.size)
    if len(header) < HEADER.size:
        raise VectorFormatError("truncated: incomplete header")
    magic, version, dim, count = HEADER.unpack(header)
    if magic != MAGIC:
        raise VectorFormatError("not a SOCV file")
    if version != VERSION:
        raise VectorFormatError(f"unsupported SOCV version {version}")
    if dim == 0:
        raise VectorFormatError("dim must be positive")
    record = np.dtype([("id", "<u8"), ("values", "<f4", (dim,))])
    payload = source.read()
    if len(payload) != count * record.itemsize:
        raise VectorFormatError(
            f"truncated: expected {count} records ({count * record.itemsize} bytes), "
            f"got {len(payload)} bytes"
        )
    records = np.frombuffer(payload, dtype=record)
    return VectorCollection(dim, records["id"].copy(), records["values"].copy())
