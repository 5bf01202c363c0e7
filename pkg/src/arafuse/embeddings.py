"""Embedding stores: static word vectors and contextual sentence vectors.

Static embeddings arrive in word2vec text format: a ``vocab_size dim``
header line, then one ``word v1 v2 ...`` line per word, space-separated.
Contextual vectors arrive as ``id<TAB>v1,v2,...`` with comma-separated
components, one line per example id.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from arafuse.errors import DataError
from arafuse.preprocess import FIRST_WORD_ID


@dataclass(frozen=True)
class StaticEmbeddingTable:
    """Word-id lookup table backed by one (vocab, dim) float64 matrix.

    Row 0 is the all-zero padding vector, row 1 the out-of-vocabulary
    vector (zeros unless trained); file words occupy rows 2 and up, in
    file order. The matrix is frozen by default: ``embed_sequence`` only
    reads it, and the training loop never registers it as a parameter
    unless explicitly asked to.
    """

    vectors: np.ndarray
    vocabulary: dict[str, int]

    def __post_init__(self):
        if self.vectors.ndim != 2:
            raise DataError(f"embedding matrix must be 2-D, got {self.vectors.ndim}-D")
        if len(self.vocabulary) + FIRST_WORD_ID != self.vectors.shape[0]:
            raise DataError(
                f"vocabulary size {len(self.vocabulary)} does not match "
                f"matrix rows {self.vectors.shape[0]} (2 reserved rows)"
            )

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def vocab_size(self) -> int:
        return int(self.vectors.shape[0])

    def checksum(self) -> str:
        """SHA-256 of the raw little-endian float64 matrix bytes."""
        buf = np.ascontiguousarray(self.vectors, dtype="<f8").tobytes()
        return hashlib.sha256(buf).hexdigest()

    def vocab_hash(self) -> str:
        """SHA-256 over the ordered word list; pins checkpoints to a vocab."""
        digest = hashlib.sha256()
        for word, _ in sorted(self.vocabulary.items(), key=lambda kv: kv[1]):
            digest.update(word.encode("utf-8"))
            digest.update(b"\n")
        return digest.hexdigest()


def load_static_embeddings(path: str | Path) -> StaticEmbeddingTable:
    """Parse word2vec text format into a StaticEmbeddingTable.

    The declared vocabulary size and dimension must match the body;
    duplicate words and malformed lines abort with the line number.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"embeddings file not found: {path}")
    with path.open(encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise DataError(
                f"{path}: line 1: expected 'vocab_size dim' header, got {header!r}"
            )
        try:
            declared_vocab, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError(
                f"{path}: line 1: non-integer header fields {parts!r}"
            ) from None
        if declared_vocab < 1 or dim < 1:
            raise DataError(f"{path}: line 1: header values must be positive")

        vocabulary: dict[str, int] = {}
        rows = [np.zeros(dim)] * FIRST_WORD_ID  # zero rows for PAD_ID, OOV_ID
        for line_num, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split(" ")
            word = fields[0]
            if word == "":
                raise DataError(f"{path}: line {line_num}: empty word")
            if word in vocabulary:
                raise DataError(f"{path}: line {line_num}: duplicate word {word!r}")
            values = [f for f in fields[1:] if f != ""]
            if len(values) != dim:
                raise DataError(
                    f"{path}: line {line_num}: expected {dim} components, "
                    f"got {len(values)}"
                )
            try:
                vector = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError:
                raise DataError(
                    f"{path}: line {line_num}: non-numeric component"
                ) from None
            if not np.all(np.isfinite(vector)):
                raise DataError(f"{path}: line {line_num}: non-finite component")
            vocabulary[word] = len(rows)
            rows.append(vector)

    if len(vocabulary) != declared_vocab:
        raise DataError(
            f"{path}: header declares {declared_vocab} words, body has "
            f"{len(vocabulary)}"
        )
    return StaticEmbeddingTable(
        vectors=np.vstack(rows), vocabulary=dict(vocabulary)
    )


def embed_sequence(ids, table: StaticEmbeddingTable) -> np.ndarray:
    """Map token ids to their vectors; returns (len(ids), dim) float64."""
    idx = np.asarray(ids, dtype=np.int64)
    if idx.ndim != 1:
        raise DataError(f"ids must be 1-D, got {idx.ndim}-D")
    if idx.size and (idx.min() < 0 or idx.max() >= table.vocab_size):
        raise DataError(
            f"token id out of range [0, {table.vocab_size}): "
            f"min {idx.min()}, max {idx.max()}"
        )
    return table.vectors[idx]


@dataclass(frozen=True)
class ContextVectorStore:
    """Per-example contextual sentence vectors keyed by example id."""

    vectors: dict[str, np.ndarray]
    dim: int

    def __getitem__(self, example_id: str) -> np.ndarray:
        try:
            return self.vectors[example_id]
        except KeyError:
            raise DataError(
                f"no context vector for example id {example_id!r}"
            ) from None

    def __contains__(self, example_id: str) -> bool:
        return example_id in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def ids(self) -> list[str]:
        return list(self.vectors)

    def checksum(self) -> str:
        """SHA-256 over ids and vector bytes, order-independent."""
        digest = hashlib.sha256()
        for example_id in sorted(self.vectors):
            digest.update(example_id.encode("utf-8"))
            digest.update(b"\x00")
            digest.update(
                np.ascontiguousarray(self.vectors[example_id], dtype="<f8").tobytes()
            )
        return digest.hexdigest()


def load_context_vectors(path: str | Path) -> ContextVectorStore:
    """Parse ``id<TAB>v1,v2,...`` lines into a ContextVectorStore.

    Every line must carry the same dimensionality; duplicate ids and
    non-finite components abort with the line number.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"context vectors file not found: {path}")
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with path.open(encoding="utf-8") as fh:
        for line_num, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise DataError(f"{path}: line {line_num}: expected id<TAB>values")
            example_id, _, payload = line.partition("\t")
            if example_id == "":
                raise DataError(f"{path}: line {line_num}: empty id")
            if example_id in vectors:
                raise DataError(
                    f"{path}: line {line_num}: duplicate id {example_id!r}"
                )
            try:
                vector = np.array(
                    [float(v) for v in payload.split(",")], dtype=np.float64
                )
            except ValueError:
                raise DataError(
                    f"{path}: line {line_num}: non-numeric component"
                ) from None
            if not np.all(np.isfinite(vector)):
                raise DataError(f"{path}: line {line_num}: non-finite component")
            if dim is None:
                dim = int(vector.size)
                if dim == 0:
                    raise DataError(f"{path}: line {line_num}: empty vector")
            elif vector.size != dim:
                raise DataError(
                    f"{path}: line {line_num}: dimension {vector.size} differs "
                    f"from {dim}"
                )
            vectors[example_id] = vector
    if dim is None:
        raise DataError(f"{path}: no vectors found")
    return ContextVectorStore(vectors=vectors, dim=dim)


def save_context_vectors(store: ContextVectorStore, path: str | Path) -> None:
    """Write a store back to ``id<TAB>v1,v2,...`` format (load round-trips)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for example_id, vector in store.vectors.items():
            payload = ",".join(repr(float(v)) for v in vector)
            fh.write(f"{example_id}\t{payload}\n")
