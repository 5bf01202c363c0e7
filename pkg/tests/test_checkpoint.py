"""Checkpoint container: round trips, validation, byte stability."""

from __future__ import annotations

import struct

import numpy as np
import pytest

from arafuse.checkpoint import (
    MAGIC,
    load_checkpoint,
    read_manifest,
    save_checkpoint,
)
from arafuse.errors import DataError
from arafuse.model import FusionConfig, FusionModel
from arafuse.preprocess import PreprocessConfig
from tests.conftest import make_table


def small_setup(variant="fusion", trainable_static=False):
    table = make_table([f"w{i}" for i in range(6)], dim=4, seed=2)
    config = FusionConfig(
        context_dim=5, n_classes=2, variant=variant, static_dim=4,
        n_filters=3, kernel=3, pool=2, max_len=8,
    )
    model = FusionModel(
        config,
        table=None if variant == "context_only" else table,
        rng=9,
        trainable_static=trainable_static,
    )
    preprocess = PreprocessConfig(
        keep_hashtag_words=False,
        remove_stopwords=True,
        emoji_map={"😂": "ضحك"},
        stopwords=frozenset({"في"}),
        max_len=8,
    )
    return table, model, preprocess


class TestRoundTrip:
    @pytest.mark.parametrize("variant", ["fusion", "static_only", "context_only"])
    def test_weights_survive_bit_for_bit(self, tmp_path, variant):
        table, model, preprocess = small_setup(variant)
        path = tmp_path / "m.ckpt"
        save_checkpoint(path, model, preprocess, "sarcasm", seed=4)
        loaded, loaded_pre, manifest = load_checkpoint(
            path, table=None if variant == "context_only" else table
        )
        for a, b in zip(model.trainable_parameters(), loaded.trainable_parameters()):
            assert a.name == b.name
            np.testing.assert_array_equal(a.value, b.value)
        assert loaded.config == model.config
        assert loaded_pre == preprocess
        assert manifest["task"] == "sarcasm"
        assert manifest["seed"] == 4

    def test_trainable_static_matrix_is_stored(self, tmp_path):
        table, model, preprocess = small_setup(trainable_static=True)
        model.trainable_parameters()[0].value[3, 0] = 123.456
        path = tmp_path / "m.ckpt"
        save_checkpoint(path, model, preprocess, "sarcasm")
        loaded, _, manifest = load_checkpoint(path, table=table)
        assert manifest["trainable_static"] is True
        assert loaded.trainable_parameters()[0].value[3, 0] == 123.456

    def test_same_weights_same_bytes(self, tmp_path):
        """Saving twice yields byte-identical files (no timestamps)."""
        table, model, preprocess = small_setup()
        a, b = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
        save_checkpoint(a, model, preprocess, "sentiment", seed=1)
        save_checkpoint(b, model, preprocess, "sentiment", seed=1)
        assert a.read_bytes() == b.read_bytes()

    def test_predictions_identical_after_reload(self, tmp_path):
        table, model, preprocess = small_setup()
        path = tmp_path / "m.ckpt"
        save_checkpoint(path, model, preprocess, "sarcasm")
        loaded, _, _ = load_checkpoint(path, table=table)
        rng = np.random.default_rng(0)
        ids = rng.integers(0, table.vocab_size, size=(4, 8))
        ctx = rng.normal(size=(4, 5))
        np.testing.assert_array_equal(
            model.forward(ids, ctx).probs, loaded.forward(ids, ctx).probs
        )


class TestValidation:
    def test_vocab_hash_mismatch_rejected(self, tmp_path):
        table, model, preprocess = small_setup()
        path = tmp_path / "m.ckpt"
        save_checkpoint(path, model, preprocess, "sarcasm")
        other = make_table([f"q{i}" for i in range(6)], dim=4, seed=2)
        with pytest.raises(DataError, match="vocabulary hash mismatch"):
            load_checkpoint(path, table=other)

    def test_static_variant_requires_table(self, tmp_path):
        table, model, preprocess = small_setup()
        path = tmp_path / "m.ckpt"
        save_checkpoint(path, model, preprocess, "sarcasm")
        with pytest.raises(DataError, match="needs the static embeddings"):
            load_checkpoint(path, table=None)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "m.ckpt"
        path.write_bytes(b"NOTMAGIC" + b"\x00" * 20)
        with pytest.raises(DataError, match="bad magic"):
            read_manifest(path)

    def test_truncated_files_rejected(self, tmp_path):
        table, model, preprocess = small_setup()
        path = tmp_path / "m.ckpt"
        save_checkpoint(path, model, preprocess, "sarcasm")
        data = path.read_bytes()
        for cut in (len(MAGIC) + 2, len(MAGIC) + 30, len(data) - 5):
            partial = tmp_path / "p.ckpt"
            partial.write_bytes(data[:cut])
            with pytest.raises(DataError, match="truncated"):
                load_checkpoint(partial, table=table)

    def test_trailing_garbage_rejected(self, tmp_path):
        table, model, preprocess = small_setup()
        path = tmp_path / "m.ckpt"
        save_checkpoint(path, model, preprocess, "sarcasm")
        path.write_bytes(path.read_bytes() + b"x")
        with pytest.raises(DataError, match="trailing bytes"):
            load_checkpoint(path, table=table)

    def test_corrupt_manifest_rejected(self, tmp_path):
        path = tmp_path / "m.ckpt"
        blob = b"{not json"
        path.write_bytes(MAGIC + struct.pack("<I", len(blob)) + blob)
        with pytest.raises(DataError, match="corrupt manifest"):
            read_manifest(path)

    def test_unsupported_version_rejected(self, tmp_path):
        path = tmp_path / "m.ckpt"
        blob = b'{"format_version": 99}'
        path.write_bytes(MAGIC + struct.pack("<I", len(blob)) + blob)
        with pytest.raises(DataError, match="unsupported format version"):
            read_manifest(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="not found"):
            read_manifest(tmp_path / "nope.ckpt")
