"""Model checkpoints: one file holding manifest plus raw float64 tensors.

Layout: the magic line, a little-endian uint32 byte length, a UTF-8 JSON
manifest of exactly that length, then each tensor's raw little-endian
float64 buffer, concatenated in manifest order. Writing the same weights
twice produces byte-identical files (the manifest serializes with sorted
keys and no timestamps), and a save/load round trip preserves every bit.

The manifest records the architecture, the preprocessing switches, the
training seed, and a hash of the embedding vocabulary so a checkpoint
refuses to load against a mismatched embedding file.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from arafuse.embeddings import StaticEmbeddingTable
from arafuse.errors import DataError
from arafuse.model import FusionConfig, FusionModel
from arafuse.preprocess import PreprocessConfig

MAGIC = b"AFCHKPT1\n"
FORMAT_VERSION = 1


def _preprocess_to_dict(config: PreprocessConfig) -> dict:
    return {
        "keep_hashtag_words": config.keep_hashtag_words,
        "remove_stopwords": config.remove_stopwords,
        "emoji_map": dict(config.emoji_map),
        "stopwords": sorted(config.stopwords),
        "max_len": config.max_len,
    }


def _preprocess_from_dict(payload: dict) -> PreprocessConfig:
    return PreprocessConfig(
        keep_hashtag_words=payload["keep_hashtag_words"],
        remove_stopwords=payload["remove_stopwords"],
        emoji_map=dict(payload["emoji_map"]),
        stopwords=frozenset(payload["stopwords"]),
        max_len=payload["max_len"],
    )


def save_checkpoint(
    path: str | Path,
    model: FusionModel,
    preprocess: PreprocessConfig,
    task: str,
    seed: int | None = None,
    train_config: dict | None = None,
) -> None:
    """Serialize the model's trainable parameters and its build recipe."""
    params = model.trainable_parameters()
    manifest = {
        "format_version": FORMAT_VERSION,
        "task": task,
        "model_config": model.config.to_dict(),
        "preprocess": _preprocess_to_dict(preprocess),
        "trainable_static": model.embedding is not None and model.embedding.param is not None,
        "vocab_hash": model.table.vocab_hash() if model.table is not None else None,
        "seed": seed,
        "train_config": train_config,
        "tensors": [{"name": p.name, "shape": list(p.value.shape)} for p in params],
    }
    blob = json.dumps(manifest, sort_keys=True, ensure_ascii=False).encode("utf-8")
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for p in params:
            fh.write(np.ascontiguousarray(p.value, dtype="<f8").tobytes())


def _read_manifest_block(path: Path) -> tuple[dict, int]:
    """Parse the manifest; returns it with the tensor data offset."""
    if not path.exists():
        raise DataError(f"checkpoint file not found: {path}")
    with path.open("rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise DataError(f"{path}: not a checkpoint file (bad magic {magic!r})")
        raw_len = fh.read(4)
        if len(raw_len) != 4:
            raise DataError(f"{path}: truncated before manifest length")
        (manifest_len,) = struct.unpack("<I", raw_len)
        blob = fh.read(manifest_len)
        if len(blob) != manifest_len:
            raise DataError(f"{path}: truncated manifest")
    try:
        manifest = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: corrupt manifest: {exc}") from None
    if manifest.get("format_version") != FORMAT_VERSION:
        raise DataError(
            f"{path}: unsupported format version {manifest.get('format_version')!r}"
        )
    return manifest, len(MAGIC) + 4 + manifest_len


def read_manifest(path: str | Path) -> dict:
    """Parse and validate just the manifest block."""
    manifest, _ = _read_manifest_block(Path(path))
    return manifest


def load_checkpoint(
    path: str | Path, table: StaticEmbeddingTable | None = None
) -> tuple[FusionModel, PreprocessConfig, dict]:
    """Rebuild a model from a checkpoint.

    ``table`` is required for variants with a static branch unless the
    checkpoint carries trained embeddings; when given, its vocabulary
    hash must match the one recorded at save time.
    """
    path = Path(path)
    manifest, data_offset = _read_manifest_block(path)
    config = FusionConfig.from_dict(manifest["model_config"])
    preprocess = _preprocess_from_dict(manifest["preprocess"])
    trainable_static = bool(manifest.get("trainable_static"))

    needs_static = config.variant in ("fusion", "static_only")
    if needs_static:
        if table is None:
            raise DataError(
                f"checkpoint variant {config.variant!r} needs the static embeddings file"
            )
        if manifest["vocab_hash"] != table.vocab_hash():
            raise DataError(
                f"{path}: embedding vocabulary hash mismatch; checkpoint was "
                "saved against a different embeddings file"
            )

    model = FusionModel(config, table=table, rng=0, trainable_static=trainable_static)
    params = model.trainable_parameters()
    index = manifest["tensors"]
    if [p.name for p in params] != [t["name"] for t in index]:
        raise DataError(
            f"{path}: tensor index {[t['name'] for t in index]} does not match "
            f"model parameters {[p.name for p in params]}"
        )

    with path.open("rb") as fh:
        fh.seek(data_offset)
        for p, entry in zip(params, index):
            shape = tuple(entry["shape"])
            if shape != p.value.shape:
                raise DataError(
                    f"{path}: tensor {p.name} shape {shape} does not match "
                    f"model shape {p.value.shape}"
                )
            n_bytes = int(np.prod(shape, dtype=np.int64)) * 8 if shape else 8
            buf = fh.read(n_bytes)
            if len(buf) != n_bytes:
                raise DataError(f"{path}: truncated tensor data for {p.name}")
            p.value[...] = np.frombuffer(buf, dtype="<f8").reshape(shape)
        if fh.read(1):
            raise DataError(f"{path}: trailing bytes after tensor data")
    return model, preprocess, manifest
