"""Hybrid static+contextual text classification for Arabic tweets.

The package pairs a trainable CNN-BiLSTM encoder over frozen static word
embeddings with precomputed contextual sentence vectors: the two sentence
representations are concatenated and classified by a dense softmax head.
Everything that trains (convolution, BiLSTM, classifier head, Adam) is
implemented here in plain numpy with hand-written backward passes.
"""

from arafuse.corpus import Corpus, SplitSpec, Tweet, class_distribution, load_corpus, stratified_split
from arafuse.embeddings import (
    ContextVectorStore,
    StaticEmbeddingTable,
    embed_sequence,
    load_context_vectors,
    load_static_embeddings,
)
from arafuse.metrics import MetricsReport, averaged_report, evaluate
from arafuse.model import FusionActivations, FusionConfig, FusionModel
from arafuse.preprocess import PreprocessConfig, TokenSequence, clean, normalize, remove_stopwords, tokenize_encode
from arafuse.training import AdamOptimizer, TrainConfig, train

__version__ = "0.1.0"

__all__ = [
    "AdamOptimizer",
    "ContextVectorStore",
    "Corpus",
    "FusionActivations",
    "FusionConfig",
    "FusionModel",
    "MetricsReport",
    "PreprocessConfig",
    "SplitSpec",
    "StaticEmbeddingTable",
    "TokenSequence",
    "TrainConfig",
    "Tweet",
    "averaged_report",
    "class_distribution",
    "clean",
    "embed_sequence",
    "evaluate",
    "load_context_vectors",
    "load_corpus",
    "load_static_embeddings",
    "normalize",
    "remove_stopwords",
    "stratified_split",
    "tokenize_encode",
    "train",
]
