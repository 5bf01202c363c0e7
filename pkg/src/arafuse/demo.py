"""Paths to the bundled demo assets.

The package ships a tiny synthetic corpus (60 tweets, both task labels),
matching 8-dim static embeddings, 12-dim context vectors, an Arabic
stopword list, and an emoji-to-phrase map. Together they let every
pipeline stage run end to end in seconds with no external downloads.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_dir() -> Path:
    return Path(str(resources.files("arafuse").joinpath("data")))


def demo_dataset_path() -> Path:
    return data_dir() / "demo_tweets.tsv"


def demo_embeddings_path() -> Path:
    return data_dir() / "toy_embeddings.vec"


def demo_context_vectors_path() -> Path:
    return data_dir() / "toy_context_vectors.tsv"


def stopwords_path() -> Path:
    return data_dir() / "stopwords_ar.txt"


def emoji_map_path() -> Path:
    return data_dir() / "emoji_map.tsv"
