"""Compute reference values that are frozen as literals in the tests.

Pure python + math only: nothing here touches the library code, so the
printed numbers are an independent oracle for the hand-written layers.
Run once; paste the output into the tests. Do not import arafuse here.
"""

import math


def sigmoid(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


def lstm_single_step():
    # One LSTM cell with scalar input/hidden, gate order [i, f, g, o].
    x, h_prev, c_prev = 1.0, 0.5, 0.3
    w = [0.1, 0.2, 0.3, 0.4]
    u = [0.5, 0.6, 0.7, 0.8]
    b = [0.01, 0.02, 0.03, 0.04]
    z = [x * w[k] + h_prev * u[k] + b[k] for k in range(4)]
    gi, gf, go = sigmoid(z[0]), sigmoid(z[1]), sigmoid(z[3])
    gg = math.tanh(z[2])
    c = gf * c_prev + gi * gg
    h = go * math.tanh(c)
    print("lstm_single_step:")
    for name, v in [("z_i", z[0]), ("z_f", z[1]), ("z_g", z[2]), ("z_o", z[3]),
                    ("i", gi), ("f", gf), ("g", gg), ("o", go), ("c", c), ("h", h)]:
        print(f"  {name} = {v!r}")


def lstm_two_step_chain():
    # Same scalar cell, h0 = c0 = 0, inputs x1 = 1.0 then x2 = -0.5;
    # step 2 exercises the recurrent kernel through h1.
    w = [0.1, 0.2, 0.3, 0.4]
    u = [0.5, 0.6, 0.7, 0.8]
    b = [0.01, 0.02, 0.03, 0.04]
    h, c = 0.0, 0.0
    for step, x in enumerate([1.0, -0.5], start=1):
        z = [x * w[k] + h * u[k] + b[k] for k in range(4)]
        gi, gf, go = sigmoid(z[0]), sigmoid(z[1]), sigmoid(z[3])
        gg = math.tanh(z[2])
        c = gf * c + gi * gg
        h = go * math.tanh(c)
        print(f"lstm_two_step_chain step {step}: h = {h!r}  c = {c!r}")


def adam_first_step():
    # One Adam update: lr 0.01, beta1 0.9, beta2 0.999, eps 1e-8.
    lr, b1, b2, eps = 0.01, 0.9, 0.999, 1e-8
    for label, clipnorm, params, grads in [
        ("unclipped (norm 0.5 < 1.0)", 1.0, [1.0, -2.0], [0.3, -0.4]),
        ("clipped (norm 2.0 -> scale 0.5)", 1.0, [1.0, -2.0], [1.2, -1.6]),
    ]:
        norm = math.sqrt(sum(g * g for g in grads))
        scale = clipnorm / norm if norm > clipnorm else 1.0
        out = []
        for p, g in zip(params, grads):
            g = g * scale
            m = (1 - b1) * g
            v = (1 - b2) * g * g
            mhat = m / (1 - b1)
            vhat = v / (1 - b2)
            out.append(p - lr * mhat / (math.sqrt(vhat) + eps))
        print(f"adam_first_step {label}:")
        for v in out:
            print(f"  {v!r}")


def softmax_three():
    logits = [1.0, 2.0, 3.0]
    mx = max(logits)
    ex = [math.exp(v - mx) for v in logits]
    s = sum(ex)
    print("softmax([1,2,3]):")
    for v in ex:
        print(f"  {v / s!r}")
    # Cross-entropy picking class 0 of that distribution.
    print(f"  ce_class0 = {-math.log(ex[0] / s)!r}")


if __name__ == "__main__":
    lstm_single_step()
    lstm_two_step_chain()
    adam_first_step()
    softmax_three()
