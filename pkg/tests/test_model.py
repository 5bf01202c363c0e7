"""Fusion model: shape contracts, variants, freezing, joint gradients."""

from __future__ import annotations

import numpy as np
import pytest

from arafuse.errors import DataError
from arafuse.model import FusionConfig, FusionModel
from arafuse.neural import softmax_cross_entropy
from tests.conftest import make_table
from tests.gradcheck import assert_grad_close, finite_difference_grad


def tiny_config(**overrides) -> FusionConfig:
    base = dict(
        context_dim=6,
        n_classes=3,
        variant="fusion",
        static_dim=4,
        n_filters=5,
        kernel=3,
        pool=2,
        head_dropout=0.2,
        recurrent_dropout=0.2,
        max_len=9,
    )
    base.update(overrides)
    return FusionConfig(**base)


@pytest.fixture
def table():
    return make_table([f"w{i}" for i in range(8)], dim=4, seed=1)


def random_batch(config, table, batch=3, seed=0):
    rng = np.random.default_rng(seed)
    ids = rng.integers(0, table.vocab_size, size=(batch, config.max_len))
    context = rng.normal(size=(batch, config.context_dim))
    return ids, context


class TestShapes:
    def test_reference_fusion_dimensions(self, ):
        """Defaults: 128-dim sentence vector + 768-dim context = 896 fused,
        with the static part in the first 128 slots."""
        words = [f"w{i}" for i in range(6)]
        table = make_table(words, dim=8, seed=0)
        config = FusionConfig()  # reference defaults
        model = FusionModel(config, table=table, rng=0)
        rng = np.random.default_rng(0)
        ids = rng.integers(0, table.vocab_size, size=(2, 100))
        context = rng.normal(size=(2, 768))
        acts = model.forward(ids, context)
        assert config.fused_dim == 896
        assert acts.fused.shape == (2, 896)
        np.testing.assert_array_equal(acts.fused[:, :128], acts.static_features)
        np.testing.assert_array_equal(acts.fused[:, 128:], acts.context_vector)
        assert acts.static_features.shape == (2, 128)
        assert acts.probs.shape == (2, config.n_classes)

    def test_forward_activation_shapes(self, table):
        config = tiny_config()
        model = FusionModel(config, table=table, rng=0)
        ids, context = random_batch(config, table)
        acts = model.forward(ids, context)
        assert acts.static_features.shape == (3, 4)
        assert acts.context_vector.shape == (3, 6)
        assert acts.fused.shape == (3, 10)
        assert acts.logits.shape == (3, 3)
        np.testing.assert_allclose(acts.probs.sum(axis=1), 1.0, rtol=1e-12)

    def test_rejects_wrong_input_shapes(self, table):
        config = tiny_config()
        model = FusionModel(config, table=table, rng=0)
        ids, context = random_batch(config, table)
        with pytest.raises(DataError, match="ids must be"):
            model.forward(ids[:, :5], context)
        with pytest.raises(DataError, match="context must be"):
            model.forward(ids, context[:, :3])
        with pytest.raises(DataError, match="needs token ids"):
            model.forward(None, context)
        with pytest.raises(DataError, match="needs context vectors"):
            model.forward(ids, None)


class TestVariants:
    def test_static_only_ignores_context(self, table):
        config = tiny_config(variant="static_only")
        model = FusionModel(config, table=table, rng=0)
        ids, _ = random_batch(config, table)
        acts = model.forward(ids, None)
        assert acts.context_vector is None
        assert acts.fused.shape == (3, config.static_dim)
        np.testing.assert_array_equal(acts.fused, acts.static_features)

    def test_context_only_trains_head_weights_only(self, table):
        """No static branch is built: exactly the head's W and b train."""
        config = tiny_config(variant="context_only")
        model = FusionModel(config, rng=0)
        params = model.trainable_parameters()
        assert [p.name for p in params] == ["head.w", "head.b"]
        assert model.embedding is None and model.bilstm is None
        _, context = random_batch(config, table)
        acts = model.forward(None, context)
        assert acts.static_features is None
        np.testing.assert_array_equal(acts.fused, context)

    def test_fusion_parameter_order_is_stable(self, table):
        model = FusionModel(tiny_config(), table=table, rng=0)
        names = [p.name for p in model.trainable_parameters()]
        assert names == [
            "conv.w", "conv.b",
            "bilstm.fwd.w", "bilstm.fwd.u", "bilstm.fwd.b",
            "bilstm.bwd.w", "bilstm.bwd.u", "bilstm.bwd.b",
            "head.w", "head.b",
        ]

    def test_trainable_static_adds_embedding_matrix(self, table):
        model = FusionModel(tiny_config(), table=table, rng=0, trainable_static=True)
        names = [p.name for p in model.trainable_parameters()]
        assert names[0] == "embedding.matrix"

    def test_config_validation(self):
        with pytest.raises(DataError, match="unknown variant"):
            tiny_config(variant="both")
        with pytest.raises(DataError, match="static_dim"):
            tiny_config(static_dim=3)
        with pytest.raises(DataError, match="n_classes"):
            tiny_config(n_classes=1)
        with pytest.raises(DataError, match="context_dim"):
            tiny_config(variant="context_only", context_dim=0)
        with pytest.raises(DataError, match="max_len"):
            tiny_config(max_len=4)
        with pytest.raises(DataError, match="unknown config fields"):
            FusionConfig.from_dict({"filters": 3})
        with pytest.raises(DataError, match="needs a static embedding table"):
            FusionModel(tiny_config(), table=None)
        with pytest.raises(DataError, match="no static embeddings"):
            FusionModel(tiny_config(variant="context_only"), trainable_static=True)

    def test_config_round_trips_through_dict(self):
        config = tiny_config(n_filters=7)
        assert FusionConfig.from_dict(config.to_dict()) == config


class TestFreezing:
    def test_frozen_embeddings_never_change(self, table):
        """Training steps leave the source table bitwise intact."""
        before = table.checksum()
        config = tiny_config()
        model = FusionModel(config, table=table, rng=0)
        ids, context = random_batch(config, table)
        labels = np.array([0, 1, 2])
        for _ in range(5):
            model.zero_grad()
            acts = model.forward(ids, context, train=False)
            _, _, dlogits = softmax_cross_entropy(acts.logits, labels)
            model.backward(dlogits)
            for p in model.trainable_parameters():
                p.value -= 0.01 * p.grad
        assert table.checksum() == before

    def test_trainable_static_trains_a_copy(self, table):
        before = table.checksum()
        config = tiny_config()
        model = FusionModel(config, table=table, rng=0, trainable_static=True)
        ids, context = random_batch(config, table)
        labels = np.array([0, 1, 2])
        model.zero_grad()
        acts = model.forward(ids, context)
        _, _, dlogits = softmax_cross_entropy(acts.logits, labels)
        model.backward(dlogits)
        emb = model.trainable_parameters()[0]
        assert np.abs(emb.grad).sum() > 0
        emb.value -= 0.1 * emb.grad
        assert table.checksum() == before  # source still untouched
        assert not np.array_equal(emb.value, table.vectors)


class TestJointGradients:
    @pytest.mark.parametrize("variant", ["fusion", "static_only", "context_only"])
    def test_full_model_backprop_matches_finite_differences(self, table, variant):
        """End-to-end check through conv, pool, BiLSTM, fusion, and head."""
        config = tiny_config(variant=variant, head_dropout=0.0, recurrent_dropout=0.0)
        model = FusionModel(
            config, table=table if variant != "context_only" else None, rng=3,
            trainable_static=(variant == "fusion"),
        )
        rng = np.random.default_rng(11)
        batch = 2
        ids = rng.integers(0, table.vocab_size, size=(batch, config.max_len))
        context = rng.normal(size=(batch, config.context_dim))
        labels = rng.integers(0, config.n_classes, size=batch)
        use_ids = None if variant == "context_only" else ids
        use_ctx = None if variant == "static_only" else context

        def loss():
            acts = model.forward(use_ids, use_ctx, train=False)
            return softmax_cross_entropy(acts.logits, labels)[0]

        model.zero_grad()
        acts = model.forward(use_ids, use_ctx, train=False)
        _, _, dlogits = softmax_cross_entropy(acts.logits, labels)
        model.backward(dlogits)
        for p in model.trainable_parameters():
            assert_grad_close(p.grad, finite_difference_grad(loss, p.value), p.name)
