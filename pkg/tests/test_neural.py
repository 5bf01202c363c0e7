"""Layer forward values and hand-written gradients vs finite differences.

Every gradcheck builds a scalar loss L = sum(layer_output * R) with a
fixed random R, runs the layer's backward pass, and compares each
parameter (and input) gradient against central differences.
"""

from __future__ import annotations

import numpy as np
import pytest

from arafuse.errors import DataError
from arafuse.neural import (
    LSTM,
    BiLSTM,
    Conv1D,
    Dense,
    Dropout,
    Embedding,
    MaxPool1D,
    Parameter,
    ReLU,
    glorot_uniform,
    sigmoid,
    softmax,
    softmax_cross_entropy,
)
from tests.gradcheck import assert_grad_close, finite_difference_grad

SEEDS = (0, 1, 2)


class TestActivations:
    def test_sigmoid_matches_definition_and_is_stable(self):
        x = np.array([-800.0, -2.0, 0.0, 2.0, 800.0])
        out = sigmoid(x)
        np.testing.assert_allclose(out[1:4], 1.0 / (1.0 + np.exp(-x[1:4])), rtol=1e-15)
        assert out[0] == 0.0 and out[4] == 1.0
        assert np.all(np.isfinite(out))

    def test_softmax_frozen_values(self):
        """softmax([1,2,3]) against independently computed constants."""
        probs = softmax(np.array([[1.0, 2.0, 3.0]]))
        np.testing.assert_allclose(
            probs[0],
            [0.09003057317038046, 0.24472847105479764, 0.6652409557748218],
            rtol=1e-14,
        )

    def test_softmax_rows_sum_to_one_and_shift_invariant(self):
        rng = np.random.default_rng(4)
        logits = rng.normal(scale=5.0, size=(20, 7))
        probs = softmax(logits)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, rtol=1e-12)
        np.testing.assert_allclose(softmax(logits + 1000.0), probs, atol=1e-12)

    def test_cross_entropy_frozen_value_and_gradient(self):
        logits = np.array([[1.0, 2.0, 3.0]])
        loss, probs, dlogits = softmax_cross_entropy(logits, np.array([0]))
        assert loss == pytest.approx(2.40760596444438, rel=1e-14)
        expected = probs.copy()
        expected[0, 0] -= 1.0
        np.testing.assert_allclose(dlogits, expected, rtol=1e-15)

    def test_cross_entropy_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(8)
        logits = rng.normal(size=(4, 3))
        labels = np.array([0, 2, 1, 1])
        _, _, dlogits = softmax_cross_entropy(logits, labels)
        numeric = finite_difference_grad(
            lambda: softmax_cross_entropy(logits, labels)[0], logits
        )
        assert_grad_close(dlogits, numeric, "cross_entropy dlogits")

    def test_cross_entropy_clamps_log_but_not_gradient(self):
        """A certain wrong prediction yields a finite loss."""
        logits = np.array([[1000.0, 0.0]])
        loss, _, dlogits = softmax_cross_entropy(logits, np.array([1]))
        assert np.isfinite(loss)
        assert loss == pytest.approx(-np.log(1e-12))
        assert np.all(np.isfinite(dlogits))


class TestInit:
    def test_glorot_bounds(self):
        rng = np.random.default_rng(0)
        w = glorot_uniform((50, 80), 50, 80, rng)
        limit = np.sqrt(6.0 / 130.0)
        assert np.abs(w).max() <= limit
        assert np.abs(w).max() > 0.8 * limit  # actually fills the range

    def test_lstm_forget_bias_starts_at_one(self):
        lstm = LSTM(3, 4, np.random.default_rng(0), "t")
        np.testing.assert_array_equal(lstm.b.value[4:8], np.ones(4))
        np.testing.assert_array_equal(lstm.b.value[:4], np.zeros(4))
        np.testing.assert_array_equal(lstm.b.value[8:], np.zeros(8))


class TestConv1D:
    def test_forward_hand_computed(self):
        """Valid convolution: y_t = 2*x_t - x_{t+1} + 0.5 for k=2."""
        conv = Conv1D(1, 1, 2, np.random.default_rng(0), "c")
        conv.w.value[...] = np.array([[[2.0]], [[-1.0]]])
        conv.b.value[...] = np.array([0.5])
        x = np.array([[[1.0], [2.0], [3.0], [4.0]]])
        np.testing.assert_allclose(
            conv.forward(x)[0, :, 0], [0.5, 1.5, 2.5], rtol=1e-15
        )

    @pytest.mark.parametrize("seed", SEEDS)
    def test_gradients(self, seed):
        rng = np.random.default_rng(seed)
        conv = Conv1D(5, 6, 3, rng, "c")
        x = rng.normal(size=(2, 7, 5))
        r = rng.normal(size=(2, 5, 6))

        def loss():
            return float(np.sum(conv.forward(x) * r))

        base = loss()
        conv.backward(r)
        assert_grad_close(conv.w.grad, finite_difference_grad(loss, conv.w.value), "conv dW")
        assert_grad_close(conv.b.grad, finite_difference_grad(loss, conv.b.value), "conv db")
        conv.w.zero_grad()
        conv.b.zero_grad()
        conv.forward(x)
        dx = conv.backward(r)
        assert_grad_close(dx, finite_difference_grad(loss, x), "conv dx")
        assert loss() == base  # checks restored perturbations

    def test_rejects_short_sequence(self):
        conv = Conv1D(2, 3, 4, np.random.default_rng(0), "c")
        with pytest.raises(DataError, match="shorter than kernel"):
            conv.forward(np.zeros((1, 3, 2)))


class TestMaxPool1D:
    def test_forward_drops_trailing_window(self):
        pool = MaxPool1D(2)
        x = np.arange(10.0).reshape(1, 5, 2)  # length 5 -> 2 windows
        out = pool.forward(x)
        np.testing.assert_array_equal(out, [[[2.0, 3.0], [6.0, 7.0]]])

    @pytest.mark.parametrize("seed", SEEDS)
    def test_gradients_without_ties(self, seed):
        rng = np.random.default_rng(seed)
        pool = MaxPool1D(2)
        x = rng.permutation(48).astype(np.float64).reshape(2, 6, 4)  # distinct values
        r = rng.normal(size=(2, 3, 4))

        def loss():
            return float(np.sum(pool.forward(x) * r))

        pool.forward(x)
        dx = pool.backward(r)
        assert_grad_close(dx, finite_difference_grad(loss, x), "maxpool dx")

    def test_tie_routes_gradient_to_first_index(self):
        """Equal values in a window: all gradient goes to the earliest one,
        and it equals the joint perturbation derivative of the window."""
        pool = MaxPool1D(2)
        x = np.array([[[3.0], [3.0]]])
        pool.forward(x)
        dx = pool.backward(np.array([[[2.5]]]))
        np.testing.assert_array_equal(dx, [[[2.5], [0.0]]])
        # Shifting both tied entries together moves the max one-for-one.
        eps = 1e-6
        up = np.max(x + eps) * 2.5
        down = np.max(x - eps) * 2.5
        assert (up - down) / (2 * eps) == pytest.approx(float(dx.sum()), rel=1e-6)

    def test_rejects_too_short_sequence(self):
        with pytest.raises(DataError, match="shorter than pool"):
            MaxPool1D(4).forward(np.zeros((1, 3, 2)))


class TestReLU:
    def test_gradient_away_from_kink(self):
        rng = np.random.default_rng(1)
        relu = ReLU()
        x = rng.normal(size=(3, 4, 5))
        x[np.abs(x) < 0.01] = 0.5  # keep finite differences off the kink
        r = rng.normal(size=x.shape)

        def loss():
            return float(np.sum(relu.forward(x) * r))

        relu.forward(x)
        dx = relu.backward(r)
        assert_grad_close(dx, finite_difference_grad(loss, x), "relu dx")


class TestDense:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_gradients(self, seed):
        rng = np.random.default_rng(seed)
        dense = Dense(4, 3, rng, "d")
        x = rng.normal(size=(5, 4))
        r = rng.normal(size=(5, 3))

        def loss():
            return float(np.sum(dense.forward(x) * r))

        dense.forward(x)
        dx = dense.backward(r)
        assert_grad_close(dense.w.grad, finite_difference_grad(loss, dense.w.value), "dense dW")
        assert_grad_close(dense.b.grad, finite_difference_grad(loss, dense.b.value), "dense db")
        assert_grad_close(dx, finite_difference_grad(loss, x), "dense dx")


class TestDropout:
    def test_eval_mode_is_identity(self):
        drop = Dropout(0.5)
        x = np.ones((2, 3))
        np.testing.assert_array_equal(drop.forward(x, train=False), x)
        np.testing.assert_array_equal(drop.backward(x), x)

    def test_train_mask_values_and_scaling(self):
        drop = Dropout(0.2)
        rng = np.random.default_rng(0)
        x = np.ones((200, 50))
        out = drop.forward(x, train=True, rng=rng)
        values = np.unique(out)
        np.testing.assert_allclose(values, [0.0, 1.0 / 0.8], rtol=1e-15)
        assert abs(out.mean() - 1.0) < 0.02  # inverted scaling keeps the mean

    def test_gradient_with_injected_mask(self):
        rng = np.random.default_rng(2)
        drop = Dropout(0.4)
        x = rng.normal(size=(3, 4))
        mask = (rng.random(x.shape) >= 0.4) / 0.6
        r = rng.normal(size=x.shape)

        def loss():
            return float(np.sum(drop.forward(x, train=True, mask=mask) * r))

        drop.forward(x, train=True, mask=mask)
        dx = drop.backward(r)
        assert_grad_close(dx, finite_difference_grad(loss, x), "dropout dx")

    def test_zero_rate_never_draws(self):
        drop = Dropout(0.0)
        x = np.ones((2, 2))
        np.testing.assert_array_equal(drop.forward(x, train=True, rng=None), x)


class TestLSTM:
    def test_two_step_chain_frozen_values(self):
        """Scalar cell against independently computed constants."""
        lstm = LSTM(1, 1, np.random.default_rng(0), "l")
        lstm.w.value[...] = np.array([[0.1, 0.2, 0.3, 0.4]])
        lstm.u.value[...] = np.array([[0.5, 0.6, 0.7, 0.8]])
        lstm.b.value[...] = np.array([0.01, 0.02, 0.03, 0.04])
        x = np.array([[[1.0], [-0.5]]])
        h_seq = lstm.forward(x)
        assert h_seq[0, 0, 0] == pytest.approx(0.10124330736972535, rel=1e-14)
        assert h_seq[0, 1, 0] == pytest.approx(0.028073334866206622, rel=1e-14)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_gradients_eval_mode(self, seed):
        rng = np.random.default_rng(seed)
        lstm = LSTM(2, 3, rng, "l")
        x = rng.normal(size=(2, 4, 2))
        r = rng.normal(size=(2, 4, 3))

        def loss():
            return float(np.sum(lstm.forward(x) * r))

        lstm.forward(x)
        dx = lstm.backward(r)
        for param, label in ((lstm.w, "dW"), (lstm.u, "dU"), (lstm.b, "db")):
            assert_grad_close(
                param.grad, finite_difference_grad(loss, param.value), f"lstm {label}"
            )
        assert_grad_close(dx, finite_difference_grad(loss, x), "lstm dx")

    def test_gradients_with_recurrent_mask(self):
        """Backward respects the per-sequence recurrent dropout mask."""
        rng = np.random.default_rng(7)
        lstm = LSTM(2, 3, rng, "l", recurrent_dropout=0.5)
        x = rng.normal(size=(2, 4, 2))
        r = rng.normal(size=(2, 4, 3))
        mask = (rng.random((2, 3)) >= 0.5) / 0.5
        assert mask.sum() > 0

        def loss():
            return float(
                np.sum(lstm.forward(x, train=True, recurrent_mask=mask) * r)
            )

        lstm.forward(x, train=True, recurrent_mask=mask)
        dx = lstm.backward(r)
        for param, label in ((lstm.w, "dW"), (lstm.u, "dU"), (lstm.b, "db")):
            assert_grad_close(
                param.grad, finite_difference_grad(loss, param.value), f"lstm {label}"
            )
        assert_grad_close(dx, finite_difference_grad(loss, x), "lstm dx masked")

    def test_mask_is_per_sequence_not_per_step(self):
        """With a zero mask the recurrent path is fully severed."""
        rng = np.random.default_rng(3)
        lstm = LSTM(1, 2, rng, "l", recurrent_dropout=0.9)
        x = rng.normal(size=(1, 3, 1))
        zero_mask = np.zeros((1, 2))
        h_masked = lstm.forward(x, train=True, recurrent_mask=zero_mask)
        # Without recurrence each step depends only on x_t and c, so
        # permuting earlier inputs cannot change h through U.
        lstm.u.value[...] = 0.0
        h_no_u = lstm.forward(x, train=True, recurrent_mask=np.ones((1, 2)))
        np.testing.assert_allclose(h_masked, h_no_u, rtol=1e-12)


class TestBiLSTM:
    def test_output_concatenates_final_states(self):
        rng = np.random.default_rng(5)
        bi = BiLSTM(2, 3, rng, "b")
        x = rng.normal(size=(2, 4, 2))
        out = bi.forward(x)
        assert out.shape == (2, 6)
        np.testing.assert_array_equal(out[:, :3], bi.fwd.forward(x)[:, -1, :])
        np.testing.assert_array_equal(
            out[:, 3:], bi.bwd.forward(x[:, ::-1, :])[:, -1, :]
        )

    @pytest.mark.parametrize("seed", SEEDS)
    def test_gradients(self, seed):
        rng = np.random.default_rng(seed)
        bi = BiLSTM(2, 2, rng, "b")
        x = rng.normal(size=(2, 3, 2))
        r = rng.normal(size=(2, 4))

        def loss():
            return float(np.sum(bi.forward(x) * r))

        bi.forward(x)
        dx = bi.backward(r)
        for param in bi.params():
            assert_grad_close(
                param.grad, finite_difference_grad(loss, param.value), param.name
            )
        assert_grad_close(dx, finite_difference_grad(loss, x), "bilstm dx")


class TestEmbedding:
    def test_frozen_has_no_params_and_reads_source(self):
        matrix = np.arange(12.0).reshape(4, 3)
        emb = Embedding(matrix, trainable=False, name="e")
        assert emb.params() == []
        out = emb.forward(np.array([[1, 3]]))
        np.testing.assert_array_equal(out[0, 1], matrix[3])
        emb.backward(np.ones((1, 2, 3)))  # no-op, must not raise

    def test_trainable_copies_and_scatters_gradients(self):
        matrix = np.zeros((4, 3))
        emb = Embedding(matrix, trainable=True, name="e")
        ids = np.array([[1, 1, 2]])
        emb.forward(ids)
        dy = np.ones((1, 3, 3))
        emb.backward(dy)
        expected = np.zeros((4, 3))
        expected[1] = 2.0  # repeated id accumulates
        expected[2] = 1.0
        np.testing.assert_array_equal(emb.param.grad, expected)
        # The source matrix object is never mutated.
        emb.param.value[...] = 99.0
        np.testing.assert_array_equal(matrix, np.zeros((4, 3)))


class TestParameter:
    def test_zero_grad_and_repr(self):
        p = Parameter("x", np.ones((2, 2)))
        p.grad += 5.0
        p.zero_grad()
        np.testing.assert_array_equal(p.grad, np.zeros((2, 2)))
        assert "x" in repr(p)
