"""From-scratch neural layers with hand-written backpropagation.

Everything operates on float64 numpy arrays with an explicit batch axis.
Each layer caches what its backward pass needs during ``forward``;
``backward`` consumes that cache and accumulates parameter gradients in
place, returning the gradient with respect to the layer input. Gradients
accumulate across calls until ``zero_grad``.

Loss gradients follow the mean-over-batch convention: the value returned
by ``softmax_cross_entropy`` and the gradients that flow from it are
averaged over the batch axis.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from arafuse.errors import DataError


class Parameter:
    """A trainable tensor: value plus an accumulated gradient."""

    __slots__ = ("name", "value", "grad")

    def __init__(self, name: str, value: np.ndarray):
        self.name = name
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)

    def zero_grad(self) -> None:
        self.grad[...] = 0.0

    def __repr__(self) -> str:
        return f"Parameter({self.name!r}, shape={self.value.shape})"


def glorot_uniform(shape: tuple, fan_in: int, fan_out: int, rng) -> np.ndarray:
    """Uniform init on [-limit, limit] with limit = sqrt(6/(fan_in+fan_out))."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Logistic function, computed without overflow for large |x|."""
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax, stabilized by max subtraction."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    ex = np.exp(shifted)
    return ex / ex.sum(axis=-1, keepdims=True)


def softmax_cross_entropy(
    logits: np.ndarray, labels: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy over integer labels.

    Returns (loss, probs, dlogits). The loss clamps probabilities at
    1e-12 before the log; the gradient is the exact unclamped
    (probs - onehot) / batch.
    """
    probs = softmax(logits)
    n = logits.shape[0]
    picked = probs[np.arange(n), labels]
    loss = float(-np.log(np.maximum(picked, 1e-12)).mean())
    dlogits = probs.copy()
    dlogits[np.arange(n), labels] -= 1.0
    dlogits /= n
    return loss, probs, dlogits


class Conv1D:
    """Valid 1-D convolution over time: (B, T, d_in) -> (B, T-k+1, filters)."""

    def __init__(self, d_in: int, n_filters: int, kernel: int, rng, name: str):
        fan_in = kernel * d_in
        fan_out = kernel * n_filters
        self.kernel = kernel
        self.w = Parameter(
            f"{name}.w", glorot_uniform((kernel, d_in, n_filters), fan_in, fan_out, rng)
        )
        self.b = Parameter(f"{name}.b", np.zeros(n_filters))
        self._windows: np.ndarray | None = None
        self._in_time: int = 0

    def params(self) -> list[Parameter]:
        return [self.w, self.b]

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape[1] < self.kernel:
            raise DataError(
                f"sequence length {x.shape[1]} shorter than kernel {self.kernel}"
            )
        # (B, T-k+1, d_in, k): one window per output step.
        self._windows = sliding_window_view(x, self.kernel, axis=1)
        self._in_time = x.shape[1]
        return np.einsum("bodk,kdf->bof", self._windows, self.w.value) + self.b.value

    def backward(self, dy: np.ndarray) -> np.ndarray:
        windows = self._windows
        self.b.grad += dy.sum(axis=(0, 1))
        self.w.grad += np.einsum("bodk,bof->kdf", windows, dy)
        batch, out_time, _ = dy.shape
        dx = np.zeros((batch, self._in_time, self.w.value.shape[1]))
        for j in range(self.kernel):
            dx[:, j : j + out_time, :] += dy @ self.w.value[j].T
        return dx


class ReLU:
    """Elementwise max(x, 0)."""

    def __init__(self):
        self._active: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._active = x > 0
        return np.where(self._active, x, 0.0)

    def backward(self, dy: np.ndarray) -> np.ndarray:
        return np.where(self._active, dy, 0.0)


class MaxPool1D:
    """Non-overlapping temporal max pooling; a trailing partial window drops.

    Within a window, ties route the full gradient to the earliest maximal
    position (argmax convention).
    """

    def __init__(self, pool: int):
        if pool < 1:
            raise DataError(f"pool size must be positive, got {pool}")
        self.pool = pool
        self._arg: np.ndarray | None = None
        self._in_shape: tuple | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        batch, time, channels = x.shape
        n_win = time // self.pool
        if n_win < 1:
            raise DataError(f"sequence length {time} shorter than pool {self.pool}")
        trimmed = x[:, : n_win * self.pool, :].reshape(batch, n_win, self.pool, channels)
        self._arg = trimmed.argmax(axis=2)
        self._in_shape = x.shape
        return np.take_along_axis(trimmed, self._arg[:, :, None, :], axis=2)[:, :, 0, :]

    def backward(self, dy: np.ndarray) -> np.ndarray:
        batch, n_win, channels = dy.shape
        scattered = np.zeros((batch, n_win, self.pool, channels))
        np.put_along_axis(scattered, self._arg[:, :, None, :], dy[:, :, None, :], axis=2)
        dx = np.zeros(self._in_shape)
        dx[:, : n_win * self.pool, :] = scattered.reshape(batch, n_win * self.pool, channels)
        return dx


class Dropout:
    """Inverted-scaling dropout; identity outside training."""

    def __init__(self, rate: float):
        if not 0.0 <= rate < 1.0:
            raise DataError(f"dropout rate must be in [0, 1), got {rate}")
        self.rate = rate
        self._mask: np.ndarray | None = None

    def forward(self, x, train: bool = False, rng=None, mask=None) -> np.ndarray:
        if not train or self.rate == 0.0:
            self._mask = None
            return x
        if mask is None:
            mask = (rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        self._mask = mask
        return x * mask

    def backward(self, dy: np.ndarray) -> np.ndarray:
        if self._mask is None:
            return dy
        return dy * self._mask


class Dense:
    """Affine map: (B, d_in) -> (B, d_out)."""

    def __init__(self, d_in: int, d_out: int, rng, name: str):
        self.w = Parameter(f"{name}.w", glorot_uniform((d_in, d_out), d_in, d_out, rng))
        self.b = Parameter(f"{name}.b", np.zeros(d_out))
        self._x: np.ndarray | None = None

    def params(self) -> list[Parameter]:
        return [self.w, self.b]

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        return x @ self.w.value + self.b.value

    def backward(self, dy: np.ndarray) -> np.ndarray:
        self.w.grad += self._x.T @ dy
        self.b.grad += dy.sum(axis=0)
        return dy @ self.w.value.T


class LSTM:
    """Single-direction LSTM over (B, T, d_in), returning all hidden states.

    Gates are packed [input, forget, cell, output] along the last axis of
    the kernel ``w`` (d_in, 4h), recurrent kernel ``u`` (h, 4h), and bias
    (4h,). The forget-gate bias initializes to 1.0. Recurrent dropout
    masks the previous hidden state on the recurrent path only, with one
    inverted-scaled mask per sequence, drawn once per forward call.
    """

    def __init__(self, d_in: int, hidden: int, rng, name: str, recurrent_dropout: float = 0.0):
        if not 0.0 <= recurrent_dropout < 1.0:
            raise DataError(
                f"recurrent dropout must be in [0, 1), got {recurrent_dropout}"
            )
        self.d_in = d_in
        self.hidden = hidden
        self.recurrent_dropout = recurrent_dropout
        self.w = Parameter(
            f"{name}.w", glorot_uniform((d_in, 4 * hidden), d_in, 4 * hidden, rng)
        )
        self.u = Parameter(
            f"{name}.u", glorot_uniform((hidden, 4 * hidden), hidden, 4 * hidden, rng)
        )
        bias = np.zeros(4 * hidden)
        bias[hidden : 2 * hidden] = 1.0  # forget gate starts open
        self.b = Parameter(f"{name}.b", bias)
        self._cache: dict | None = None

    def params(self) -> list[Parameter]:
        return [self.w, self.u, self.b]

    def forward(self, x, train: bool = False, rng=None, recurrent_mask=None) -> np.ndarray:
        batch, time, _ = x.shape
        h = self.hidden
        if train and self.recurrent_dropout > 0.0:
            if recurrent_mask is None:
                recurrent_mask = (
                    rng.random((batch, h)) >= self.recurrent_dropout
                ) / (1.0 - self.recurrent_dropout)
        else:
            recurrent_mask = np.ones((batch, h))

        h_prev = np.zeros((batch, h))
        c_prev = np.zeros((batch, h))
        steps = []
        h_seq = np.empty((batch, time, h))
        for t in range(time):
            h_masked = h_prev * recurrent_mask
            z = x[:, t, :] @ self.w.value + h_masked @ self.u.value + self.b.value
            gi = sigmoid(z[:, :h])
            gf = sigmoid(z[:, h : 2 * h])
            gg = np.tanh(z[:, 2 * h : 3 * h])
            go = sigmoid(z[:, 3 * h :])
            c = gf * c_prev + gi * gg
            tanh_c = np.tanh(c)
            h_now = go * tanh_c
            steps.append(
                {
                    "h_masked": h_masked,
                    "c_prev": c_prev,
                    "gi": gi,
                    "gf": gf,
                    "gg": gg,
                    "go": go,
                    "tanh_c": tanh_c,
                }
            )
            h_seq[:, t, :] = h_now
            h_prev, c_prev = h_now, c
        self._cache = {"x": x, "steps": steps, "mask": recurrent_mask}
        return h_seq

    def backward(self, dh_seq: np.ndarray) -> np.ndarray:
        cache = self._cache
        x, steps, mask = cache["x"], cache["steps"], cache["mask"]
        batch, time, _ = x.shape
        h = self.hidden
        dx = np.zeros_like(x)
        dh_carry = np.zeros((batch, h))
        dc = np.zeros((batch, h))
        for t in range(time - 1, -1, -1):
            s = steps[t]
            dh = dh_seq[:, t, :] + dh_carry
            dgo = dh * s["tanh_c"]
            dc = dc + dh * s["go"] * (1.0 - s["tanh_c"] ** 2)
            dgf = dc * s["c_prev"]
            dgi = dc * s["gg"]
            dgg = dc * s["gi"]
            dz = np.concatenate(
                [
                    dgi * s["gi"] * (1.0 - s["gi"]),
                    dgf * s["gf"] * (1.0 - s["gf"]),
                    dgg * (1.0 - s["gg"] ** 2),
                    dgo * s["go"] * (1.0 - s["go"]),
                ],
                axis=1,
            )
            self.w.grad += x[:, t, :].T @ dz
            self.u.grad += s["h_masked"].T @ dz
            self.b.grad += dz.sum(axis=0)
            dx[:, t, :] = dz @ self.w.value.T
            dh_carry = (dz @ self.u.value.T) * mask
            dc = dc * s["gf"]
        return dx


class BiLSTM:
    """Two LSTMs over opposite directions; output concatenates their final
    hidden states into (B, 2*hidden)."""

    def __init__(self, d_in: int, hidden: int, rng, name: str, recurrent_dropout: float = 0.0):
        self.hidden = hidden
        self.fwd = LSTM(d_in, hidden, rng, f"{name}.fwd", recurrent_dropout)
        self.bwd = LSTM(d_in, hidden, rng, f"{name}.bwd", recurrent_dropout)
        self._time: int = 0

    def params(self) -> list[Parameter]:
        return self.fwd.params() + self.bwd.params()

    def forward(self, x, train: bool = False, rng=None, recurrent_masks=None) -> np.ndarray:
        self._time = x.shape[1]
        masks = recurrent_masks or (None, None)
        h_f = self.fwd.forward(x, train=train, rng=rng, recurrent_mask=masks[0])
        h_b = self.bwd.forward(x[:, ::-1, :], train=train, rng=rng, recurrent_mask=masks[1])
        return np.concatenate([h_f[:, -1, :], h_b[:, -1, :]], axis=1)

    def backward(self, dout: np.ndarray) -> np.ndarray:
        batch = dout.shape[0]
        h = self.hidden
        dh_f = np.zeros((batch, self._time, h))
        dh_f[:, -1, :] = dout[:, :h]
        dh_b = np.zeros((batch, self._time, h))
        dh_b[:, -1, :] = dout[:, h:]
        dx = self.fwd.backward(dh_f)
        dx += self.bwd.backward(dh_b)[:, ::-1, :]
        return dx


class Embedding:
    """Id lookup over a (vocab, dim) matrix, optionally trainable.

    When frozen (the default) the matrix is only read and never appears
    among trainable parameters. When trainable, gradients scatter-add
    into the rows selected by the forward ids.
    """

    def __init__(self, matrix: np.ndarray, trainable: bool, name: str):
        if trainable:
            self.param: Parameter | None = Parameter(f"{name}.matrix", matrix.copy())
            self._matrix = self.param.value
        else:
            self.param = None
            self._matrix = np.asarray(matrix, dtype=np.float64)
        self._ids: np.ndarray | None = None

    def params(self) -> list[Parameter]:
        return [self.param] if self.param is not None else []

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def forward(self, ids: np.ndarray) -> np.ndarray:
        self._ids = ids
        return self._matrix[ids]

    def backward(self, dy: np.ndarray) -> None:
        if self.param is not None:
            np.add.at(self.param.grad, self._ids, dy)
