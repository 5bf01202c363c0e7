"""Sentence classification model fusing two text representations.

The static branch encodes a tweet from frozen word embeddings: valid 1-D
convolution with ReLU, temporal max pooling, then a bidirectional LSTM
whose two final hidden states concatenate into a sentence vector. That
vector is fused by concatenation with a precomputed contextual sentence
vector, and a dropout + dense softmax head maps the fused vector to class
probabilities.

Three variants share the head contract: ``fusion`` uses both branches,
``static_only`` classifies from the sentence encoder alone, and
``context_only`` classifies straight from the contextual vector (its only
trainable parameters are the head weights).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from arafuse.embeddings import StaticEmbeddingTable
from arafuse.errors import DataError
from arafuse.neural import (
    BiLSTM,
    Conv1D,
    Dense,
    Dropout,
    Embedding,
    MaxPool1D,
    Parameter,
    ReLU,
    softmax,
)

VARIANTS = ("fusion", "static_only", "context_only")


@dataclass(frozen=True)
class FusionConfig:
    """Architecture hyperparameters.

    ``static_dim`` is the sentence-encoder output width (split evenly
    across the two LSTM directions); ``context_dim`` must match the
    vectors the context extractor produced.
    """

    context_dim: int = 768
    n_classes: int = 2
    variant: str = "fusion"
    static_dim: int = 128
    n_filters: int = 256
    kernel: int = 3
    pool: int = 2
    head_dropout: float = 0.2
    recurrent_dropout: float = 0.2
    max_len: int = 100

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DataError(f"unknown variant {self.variant!r}; expected {VARIANTS}")
        if self.n_classes < 2:
            raise DataError(f"n_classes must be at least 2, got {self.n_classes}")
        if self.static_dim % 2 != 0 or self.static_dim < 2:
            raise DataError(
                f"static_dim must be a positive even number, got {self.static_dim}"
            )
        if self.variant != "static_only" and self.context_dim < 1:
            raise DataError(
                f"context_dim must be positive for {self.variant}, got {self.context_dim}"
            )
        if self.kernel < 1 or self.n_filters < 1 or self.pool < 1:
            raise DataError("kernel, n_filters, and pool must all be positive")
        if self.max_len < self.kernel * self.pool:
            raise DataError(
                f"max_len {self.max_len} too short for kernel {self.kernel} "
                f"and pool {self.pool}"
            )

    @property
    def fused_dim(self) -> int:
        if self.variant == "fusion":
            return self.static_dim + self.context_dim
        if self.variant == "static_only":
            return self.static_dim
        return self.context_dim

    def to_dict(self) -> dict:
        return {
            "context_dim": self.context_dim,
            "n_classes": self.n_classes,
            "variant": self.variant,
            "static_dim": self.static_dim,
            "n_filters": self.n_filters,
            "kernel": self.kernel,
            "pool": self.pool,
            "head_dropout": self.head_dropout,
            "recurrent_dropout": self.recurrent_dropout,
            "max_len": self.max_len,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FusionConfig":
        unknown = set(payload) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise DataError(f"unknown config fields: {sorted(unknown)}")
        return cls(**payload)


@dataclass
class FusionActivations:
    """Intermediate vectors of one forward pass (batch-first)."""

    static_features: np.ndarray | None
    context_vector: np.ndarray | None
    fused: np.ndarray
    logits: np.ndarray
    probs: np.ndarray


class FusionModel:
    """The classifier. Holds parameters; forward/backward are batched."""

    def __init__(
        self,
        config: FusionConfig,
        table: StaticEmbeddingTable | None = None,
        rng: np.random.Generator | int = 0,
        trainable_static: bool = False,
    ):
        if isinstance(rng, (int, np.integer)):
            rng = np.random.default_rng(int(rng))
        self.config = config
        self.table = table
        self._uses_static = config.variant in ("fusion", "static_only")
        self._uses_context = config.variant in ("fusion", "context_only")

        if self._uses_static:
            if table is None:
                raise DataError(f"variant {config.variant!r} needs a static embedding table")
            self.embedding = Embedding(table.vectors, trainable_static, "embedding")
            self.conv = Conv1D(table.dim, config.n_filters, config.kernel, rng, "conv")
            self.relu = ReLU()
            self.maxpool = MaxPool1D(config.pool)
            self.bilstm = BiLSTM(
                config.n_filters,
                config.static_dim // 2,
                rng,
                "bilstm",
                recurrent_dropout=config.recurrent_dropout,
            )
        else:
            if trainable_static:
                raise DataError("context_only has no static embeddings to train")
            self.embedding = None
            self.conv = None
            self.relu = None
            self.maxpool = None
            self.bilstm = None

        self.head_dropout = Dropout(config.head_dropout)
        self.head = Dense(config.fused_dim, config.n_classes, rng, "head")

    def trainable_parameters(self) -> list[Parameter]:
        """All trainable tensors, in a fixed deterministic order."""
        params: list[Parameter] = []
        if self._uses_static:
            params.extend(self.embedding.params())
            params.extend(self.conv.params())
            params.extend(self.bilstm.params())
        params.extend(self.head.params())
        return params

    def zero_grad(self) -> None:
        for p in self.trainable_parameters():
            p.zero_grad()

    def forward(
        self,
        ids: np.ndarray | None,
        context: np.ndarray | None,
        train: bool = False,
        rng: np.random.Generator | None = None,
    ) -> FusionActivations:
        """Run the network; caches activations for one backward call.

        ``ids`` is (B, max_len) int token ids; ``context`` is (B,
        context_dim) float vectors. Either may be None when the variant
        does not consume it.
        """
        static_features = None
        if self._uses_static:
            if ids is None:
                raise DataError(f"variant {self.config.variant!r} needs token ids")
            ids = np.asarray(ids)
            if ids.ndim != 2 or ids.shape[1] != self.config.max_len:
                raise DataError(
                    f"ids must be (batch, {self.config.max_len}), got {ids.shape}"
                )
            embedded = self.embedding.forward(ids)
            conv_out = self.relu.forward(self.conv.forward(embedded))
            pooled = self.maxpool.forward(conv_out)
            static_features = self.bilstm.forward(pooled, train=train, rng=rng)

        context_vector = None
        if self._uses_context:
            if context is None:
                raise DataError(f"variant {self.config.variant!r} needs context vectors")
            context_vector = np.asarray(context, dtype=np.float64)
            if context_vector.ndim != 2 or context_vector.shape[1] != self.config.context_dim:
                raise DataError(
                    f"context must be (batch, {self.config.context_dim}), "
                    f"got {context_vector.shape}"
                )

        if self.config.variant == "fusion":
            fused = np.concatenate([static_features, context_vector], axis=1)
        elif self.config.variant == "static_only":
            fused = static_features
        else:
            fused = context_vector

        dropped = self.head_dropout.forward(fused, train=train, rng=rng)
        logits = self.head.forward(dropped)
        return FusionActivations(
            static_features=static_features,
            context_vector=context_vector,
            fused=fused,
            logits=logits,
            probs=softmax(logits),
        )

    def backward(self, dlogits: np.ndarray) -> None:
        """Accumulate parameter gradients from the loss gradient at the logits."""
        dfused = self.head_dropout.backward(self.head.backward(dlogits))
        if not self._uses_static:
            return
        dstatic = dfused[:, : self.config.static_dim] if self.config.variant == "fusion" else dfused
        dpool = self.bilstm.backward(dstatic)
        dconv = self.relu.backward(self.maxpool.backward(dpool))
        dembed = self.conv.backward(dconv)
        self.embedding.backward(dembed)
