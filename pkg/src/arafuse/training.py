"""Training loop: Adam with gradient clipping, early stopping, history.

Reproducibility contract: one integer seed derives three independent
random streams (weight init, batch shuffling, dropout) through
``numpy.random.SeedSequence.spawn``. Given the same seed, datasets, and
configuration, training produces bitwise-identical histories and weights.
History records carry no timestamps for that reason.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from arafuse.corpus import Corpus, class_order
from arafuse.embeddings import ContextVectorStore
from arafuse.errors import DataError, NumericError
from arafuse.metrics import evaluate
from arafuse.model import FusionModel
from arafuse.neural import Parameter, softmax_cross_entropy
from arafuse.preprocess import PreprocessConfig, tokenize_encode


@dataclass(frozen=True)
class TrainConfig:
    """Optimization hyperparameters.

    ``patience`` counts consecutive epochs without a strict validation
    loss improvement before stopping; 0 disables early stopping. The
    best-epoch weights are restored either way.
    """

    learning_rate: float = 5e-5
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    clipnorm: float = 1.0
    batch_size: int = 16
    max_epochs: int = 30
    patience: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise DataError(f"learning_rate must be positive, got {self.learning_rate}")
        if not 0.0 <= self.beta1 < 1.0 or not 0.0 <= self.beta2 < 1.0:
            raise DataError("beta1 and beta2 must be in [0, 1)")
        if self.batch_size < 1 or self.max_epochs < 1:
            raise DataError("batch_size and max_epochs must be positive")
        if self.patience < 0:
            raise DataError(f"patience must be non-negative, got {self.patience}")

    def to_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "epsilon": self.epsilon,
            "clipnorm": self.clipnorm,
            "batch_size": self.batch_size,
            "max_epochs": self.max_epochs,
            "patience": self.patience,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TrainConfig":
        unknown = set(payload) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise DataError(f"unknown training config fields: {sorted(unknown)}")
        return cls(**payload)


def seeded_generators(seed: int):
    """Derive (init, shuffle, dropout) generators from one seed.

    The three streams are statistically independent; consuming more from
    one never shifts the others.
    """
    init_ss, shuffle_ss, dropout_ss = np.random.SeedSequence(seed).spawn(3)
    return (
        np.random.default_rng(init_ss),
        np.random.default_rng(shuffle_ss),
        np.random.default_rng(dropout_ss),
    )


class AdamOptimizer:
    """Adam with bias correction, preceded by global-norm gradient clipping.

    When the concatenated gradient's L2 norm exceeds ``clipnorm``, every
    gradient scales by clipnorm/norm before the moment updates. Pass
    ``clipnorm=None`` to disable clipping.
    """

    def __init__(
        self,
        params: list[Parameter],
        learning_rate: float = 5e-5,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
        clipnorm: float | None = 1.0,
    ):
        self.params = list(params)
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.clipnorm = clipnorm
        self.t = 0
        self.m = [np.zeros_like(p.value) for p in self.params]
        self.v = [np.zeros_like(p.value) for p in self.params]

    def global_grad_norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(p.grad**2)) for p in self.params)))

    def step(self) -> None:
        scale = 1.0
        if self.clipnorm is not None:
            norm = self.global_grad_norm()
            if not np.isfinite(norm):
                raise NumericError(f"non-finite gradient norm {norm}")
            if norm > self.clipnorm:
                scale = self.clipnorm / norm
        self.t += 1
        bias1 = 1.0 - self.beta1**self.t
        bias2 = 1.0 - self.beta2**self.t
        for p, m, v in zip(self.params, self.m, self.v):
            g = p.grad * scale
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g**2
            p.value -= self.learning_rate * (m / bias1) / (np.sqrt(v / bias2) + self.epsilon)


class EarlyStopper:
    """Stop after ``patience`` epochs without strict val-loss improvement.

    Snapshots the best parameter values and restores them at the end,
    whether stopping fired or training ran out of epochs.
    """

    def __init__(self, params: list[Parameter], patience: int):
        self.params = list(params)
        self.patience = patience
        self.best_loss = np.inf
        self.best_epoch = 0
        self._bad_epochs = 0
        self._snapshot: list[np.ndarray] | None = None

    def update(self, epoch: int, val_loss: float) -> bool:
        """Record one epoch result; returns True when training should stop."""
        if val_loss < self.best_loss:
            self.best_loss = val_loss
            self.best_epoch = epoch
            self._bad_epochs = 0
            self._snapshot = [p.value.copy() for p in self.params]
            return False
        self._bad_epochs += 1
        return self._bad_epochs >= self.patience > 0

    def restore_best(self) -> None:
        if self._snapshot is not None:
            for p, value in zip(self.params, self._snapshot):
                p.value[...] = value


@dataclass(frozen=True)
class EncodedDataset:
    """Model-ready arrays for one corpus split.

    ``ids`` is (N, max_len) int64; ``contexts`` is (N, context_dim)
    float64 or None for static-only models; ``labels`` is (N,) int64
    class indices in the task's fixed order.
    """

    example_ids: tuple[str, ...]
    ids: np.ndarray
    contexts: np.ndarray | None
    labels: np.ndarray
    task: str

    def __len__(self) -> int:
        return len(self.example_ids)


def build_examples(
    corpus: Corpus,
    vocabulary: dict[str, int],
    preprocess: PreprocessConfig,
    context_store: ContextVectorStore | None,
) -> EncodedDataset:
    """Encode a corpus into arrays, pairing context vectors by example id.

    A missing context vector aborts the build; silent example drops would
    skew class balance.
    """
    sequences = []
    contexts = [] if context_store is not None else None
    labels = []
    order = {c: i for i, c in enumerate(class_order(corpus.task))}
    for ex in corpus:
        sequences.append(tokenize_encode(ex.text, vocabulary, preprocess).ids)
        if context_store is not None:
            contexts.append(context_store[ex.id])
        labels.append(order[ex.label(corpus.task)])
    if not sequences:
        raise DataError("cannot encode an empty corpus")
    return EncodedDataset(
        example_ids=tuple(ex.id for ex in corpus),
        ids=np.array(sequences, dtype=np.int64),
        contexts=None if contexts is None else np.vstack(contexts),
        labels=np.array(labels, dtype=np.int64),
        task=corpus.task,
    )


@dataclass(frozen=True)
class TrainResult:
    """Outcome of one training run (model weights hold the best epoch)."""

    history: tuple[dict, ...]
    best_epoch: int
    best_val_loss: float
    stopped_early: bool
    epochs_run: int


def _dataset_loss(model: FusionModel, dataset: EncodedDataset, batch_size: int) -> float:
    """Mean cross-entropy in evaluation mode (no dropout)."""
    total = 0.0
    n = len(dataset)
    for start in range(0, n, batch_size):
        stop = min(start + batch_size, n)
        acts = model.forward(
            None if model.embedding is None else dataset.ids[start:stop],
            None if dataset.contexts is None else dataset.contexts[start:stop],
            train=False,
        )
        loss, _, _ = softmax_cross_entropy(acts.logits, dataset.labels[start:stop])
        total += loss * (stop - start)
    return total / n


def _dataset_accuracy(model: FusionModel, dataset: EncodedDataset, batch_size: int) -> float:
    report = evaluate(
        model,
        None if model.embedding is None else dataset.ids,
        dataset.contexts,
        dataset.labels,
        dataset.task,
        batch_size=batch_size,
    )
    return report.accuracy


def train(
    model: FusionModel,
    train_set: EncodedDataset,
    val_set: EncodedDataset,
    config: TrainConfig,
    shuffle_rng: np.random.Generator | None = None,
    dropout_rng: np.random.Generator | None = None,
) -> TrainResult:
    """Optimize the model, early-stopping on validation loss.

    When the rng streams are omitted they derive from ``config.seed``;
    pass streams from ``seeded_generators`` to also control weight init
    with the same seed. Epoch metrics: train_loss averages the training
    batches as seen (dropout active); the accuracies and val_loss come
    from full evaluation-mode passes after the epoch.
    """
    if train_set.task != val_set.task:
        raise DataError(
            f"train task {train_set.task!r} != validation task {val_set.task!r}"
        )
    if shuffle_rng is None or dropout_rng is None:
        _, shuffle_rng, dropout_rng = seeded_generators(config.seed)

    params = model.trainable_parameters()
    optimizer = AdamOptimizer(
        params,
        learning_rate=config.learning_rate,
        beta1=config.beta1,
        beta2=config.beta2,
        epsilon=config.epsilon,
        clipnorm=config.clipnorm,
    )
    stopper = EarlyStopper(params, config.patience)
    history: list[dict] = []
    n = len(train_set)
    stopped_early = False
    epochs_run = 0

    for epoch in range(1, config.max_epochs + 1):
        perm = shuffle_rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            batch = perm[start : start + config.batch_size]
            model.zero_grad()
            acts = model.forward(
                None if model.embedding is None else train_set.ids[batch],
                None if train_set.contexts is None else train_set.contexts[batch],
                train=True,
                rng=dropout_rng,
            )
            loss, _, dlogits = softmax_cross_entropy(acts.logits, train_set.labels[batch])
            if not np.isfinite(loss):
                raise NumericError(
                    f"non-finite training loss {loss} at epoch {epoch}, "
                    f"batch starting {start}"
                )
            model.backward(dlogits)
            optimizer.step()
            epoch_loss += loss * len(batch)

        val_loss = _dataset_loss(model, val_set, config.batch_size)
        if not np.isfinite(val_loss):
            raise NumericError(f"non-finite validation loss {val_loss} at epoch {epoch}")
        record = {
            "epoch": epoch,
            "train_loss": epoch_loss / n,
            "train_accuracy": _dataset_accuracy(model, train_set, config.batch_size),
            "val_loss": val_loss,
            "val_accuracy": _dataset_accuracy(model, val_set, config.batch_size),
        }
        history.append(record)
        epochs_run = epoch
        if stopper.update(epoch, val_loss):
            stopped_early = True
            break

    stopper.restore_best()
    return TrainResult(
        history=tuple(history),
        best_epoch=stopper.best_epoch,
        best_val_loss=float(stopper.best_loss),
        stopped_early=stopped_early,
        epochs_run=epochs_run,
    )


def write_history(history, path: str | Path) -> None:
    """One JSON object per epoch, sorted keys, newline-terminated lines."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in history:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_history(path: str | Path) -> list[dict]:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
