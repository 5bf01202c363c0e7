"""
Verifying hand-written backprop with finite differences
=======================================================

Every layer in this package computes its own gradients in plain numpy.
The way to trust such code is an oracle that knows nothing about the
implementation: perturb one parameter entry at a time and compare the
slope (f(x+eps) - f(x-eps)) / 2eps against the analytic gradient. This
script runs that check on the convolution and the bidirectional LSTM.

    python3 demos/03_gradient_check.py
"""

import numpy as np

from arafuse.neural import BiLSTM, Conv1D

EPS = 1e-6


def finite_difference(loss_fn, values):
    """Central-difference gradient of a scalar function, one entry at a time."""
    grad = np.zeros_like(values)
    flat, out = values.reshape(-1), grad.reshape(-1)
    for i in range(flat.size):
        keep = flat[i]
        flat[i] = keep + EPS
        plus = loss_fn()
        flat[i] = keep - EPS
        minus = loss_fn()
        flat[i] = keep
        out[i] = (plus - minus) / (2 * EPS)
    return grad


def worst_relative_error(analytic, numeric):
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return float((np.abs(analytic - numeric) / denom).max())


rng = np.random.default_rng(0)

# A tiny batch: 2 sequences of 7 steps with 5 features each. The scalar
# "loss" is a fixed random projection of the layer output, which makes
# every output element influence the loss.
x = rng.normal(size=(2, 7, 5))

print("convolution layer")
conv = Conv1D(d_in=5, n_filters=4, kernel=3, rng=rng, name="conv")
projection = rng.normal(size=(2, 5, 4))
loss = lambda: float(np.sum(conv.forward(x) * projection))

conv.w.zero_grad()
conv.forward(x)
conv.backward(projection)
for param in (conv.w, conv.b):
    err = worst_relative_error(param.grad, finite_difference(loss, param.value))
    print(f"  {param.name:8s} worst relative error {err:.2e}")

print("bidirectional LSTM (final-state concatenation)")
bilstm = BiLSTM(d_in=5, hidden=4, rng=rng, name="bilstm")
projection = rng.normal(size=(2, 8))
loss = lambda: float(np.sum(bilstm.forward(x) * projection))

for param in bilstm.params():
    param.zero_grad()
bilstm.forward(x)
bilstm.backward(projection)
for param in bilstm.params():
    err = worst_relative_error(param.grad, finite_difference(loss, param.value))
    print(f"  {param.name:12s} worst relative error {err:.2e}")

print("\nanything below 1e-4 means analytic and numeric gradients agree;")
print("the full per-layer sweep runs in the test suite on every change.")
