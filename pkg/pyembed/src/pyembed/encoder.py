"""Encode question texts with a sentence-transformer and write SOCV files.

SOCV layout (little-endian), kept byte-identical to what the clustering
pipeline reads: magic ``SOCV`` (4 bytes), version u32 = 1, dim u32,
count u64, then ``count`` records of (question id u64, dim x f32).
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_HEADER = struct.Struct("<4sIIQ")
_MAGIC = b"SOCV"
_VERSION = 1


class EncoderError(Exception):
    """Bad input data or a model that doesn't fit the configuration."""


@dataclass(frozen=True)
class EncoderConfig:
    """How to encode: which model, batching, width, normalization."""

    model_name: str
    batch_size: int = 64
    dim: int = 768
    normalize: bool = True

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise EncoderError(f"batch_size must be positive, got {self.batch_size}")
        if self.dim < 1:
            raise EncoderError(f"dim must be positive, got {self.dim}")


def read_questions(path: str | Path) -> list[tuple[int, str]]:
    """(id, text) pairs from a questions.jsonl file, in file order."""
    out: list[tuple[int, str]] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                qid = int(obj["id"])
                text = f"{obj['title']}\n{obj['bodyText']}"
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise EncoderError(f"{path}: bad question on line {lineno}: {exc}")
            if qid < 1:
                raise EncoderError(f"{path}: non-positive id {qid} on line {lineno}")
            out.append((qid, text))
    return out


def write_socv(path: str | Path, ids: list[int], matrix: np.ndarray) -> None:
    """Atomically write an SOCV file (temp file in place, then rename)."""
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    count, dim = matrix.shape
    if len(ids) != count:
        raise EncoderError(f"{len(ids)} ids but {count} vector rows")
    records = np.empty(count, dtype=[("id", "<u8"), ("values", "<f4", (dim,))])
    records["id"] = np.asarray(ids, dtype="<u8")
    records["values"] = matrix
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".socv.tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(_HEADER.pack(_MAGIC, _VERSION, dim, count))
            f.write(records.tobytes())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def encode_file(questions: str | Path, cfg: EncoderConfig, out: str | Path) -> int:
    """Encode every question and write an SOCV file; returns the count.

    The model is loaded and its output width checked against cfg.dim before
    anything is written, so a mismatch never leaves a file behind.
    """
    from sentence_transformers import SentenceTransformer

    pairs = read_questions(questions)

    try:
        model = SentenceTransformer(cfg.model_name, device="cpu")
    except Exception as exc:
        raise EncoderError(f"could not load model {cfg.model_name!r}: {exc}")
    get_dim = getattr(model, "get_embedding_dimension", None)
    model_dim = get_dim() if get_dim else model.get_sentence_embedding_dimension()
    if model_dim != cfg.dim:
        raise EncoderError(
            f"model {cfg.model_name!r} outputs dim {model_dim}, configured dim {cfg.dim}"
        )

    if pairs:
        matrix = model.encode(
            [text for _, text in pairs],
            batch_size=cfg.batch_size,
            convert_to_numpy=True,
            show_progress_bar=False,
        ).astype(np.float64)
        if cfg.normalize:
            norms = np.linalg.norm(matrix, axis=1, keepdims=True)
            if not norms.all():
                zero = pairs[int(np.flatnonzero(norms[:, 0] == 0.0)[0])][0]
                raise EncoderError(f"model produced a zero vector for question {zero}")
            matrix = matrix / norms
        matrix = matrix.astype(np.float32)
    else:
        matrix = np.empty((0, cfg.dim), dtype=np.float32)

    write_socv(out, [qid for qid, _ in pairs], matrix)
    return len(pairs)
