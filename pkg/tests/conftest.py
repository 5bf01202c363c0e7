"""Shared fixtures and the acceptance-suite result reporter."""

from __future__ import annotations

import numpy as np
import pytest

from arafuse.corpus import Corpus, Tweet
from arafuse.embeddings import StaticEmbeddingTable
from arafuse.preprocess import FIRST_WORD_ID

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[1]
    if report.when == "setup" and report.skipped:
        _acceptance_results[name] = "SKIP"
    elif report.when == "call":
        if report.skipped:
            _acceptance_results[name] = "SKIP"
        else:
            _acceptance_results[name] = "PASS" if report.passed else "FAIL"
    elif report.failed:
        _acceptance_results[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name, outcome in _acceptance_results.items():
        terminalreporter.write_line(f"  ACCEPTANCE {name}: {outcome}")


def make_table(words: list[str], dim: int, seed: int = 0) -> StaticEmbeddingTable:
    """Random embedding table over the given words (rows 0/1 reserved)."""
    rng = np.random.default_rng(seed)
    vectors = np.vstack(
        [np.zeros((FIRST_WORD_ID, dim)), rng.normal(0.0, 0.5, size=(len(words), dim))]
    )
    vocabulary = {w: i + FIRST_WORD_ID for i, w in enumerate(words)}
    return StaticEmbeddingTable(vectors=vectors, vocabulary=vocabulary)


def make_corpus(labels_by_class: dict, task: str) -> Corpus:
    """Synthetic corpus with the given per-class example counts."""
    examples = []
    idx = 0
    for label, count in labels_by_class.items():
        for _ in range(count):
            examples.append(
                Tweet(
                    id=f"x{idx:05d}",
                    text=f"كلمه {idx}",
                    sarcasm=label if isinstance(label, bool) else None,
                    sentiment=label if isinstance(label, str) else None,
                )
            )
            idx += 1
    return Corpus(examples=tuple(examples), task=task)


@pytest.fixture
def small_table() -> StaticEmbeddingTable:
    return make_table([f"w{i}" for i in range(10)], dim=5, seed=3)
