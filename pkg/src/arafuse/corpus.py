"""Labeled tweet corpora: loading, validation, stratified splitting.

Dataset files are UTF-8 tab-separated with the header
``id<TAB>text<TAB>sarcasm<TAB>sentiment<TAB>dialect``. Text fields that
embed tabs or newlines follow standard quoted-field rules. Sarcasm labels
are TRUE/FALSE, sentiment labels POS/NEG/NEU; either column may be empty,
but every example must carry a label for the corpus task.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from arafuse.errors import DataError

TASKS = ("sarcasm", "sentiment")

# Fixed class orders; confusion matrices and class indices follow these.
SARCASM_CLASSES: tuple[bool, ...] = (False, True)
SENTIMENT_CLASSES: tuple[str, ...] = ("negative", "neutral", "positive")

HEADER = ("id", "text", "sarcasm", "sentiment", "dialect")

_SARCASM_FROM_FILE = {"TRUE": True, "FALSE": False}
_SENTIMENT_FROM_FILE = {"POS": "positive", "NEG": "negative", "NEU": "neutral"}
_SARCASM_TO_FILE = {True: "TRUE", False: "FALSE"}
_SENTIMENT_TO_FILE = {v: k for k, v in _SENTIMENT_FROM_FILE.items()}


def class_order(task: str) -> tuple:
    """Return the fixed class order for a task."""
    if task == "sarcasm":
        return SARCASM_CLASSES
    if task == "sentiment":
        return SENTIMENT_CLASSES
    raise DataError(f"unknown task {task!r}; expected one of {TASKS}")


def label_name(label) -> str:
    """Human-readable class name used in reports and prediction files."""
    if isinstance(label, bool):
        return "true" if label else "false"
    return str(label)


@dataclass(frozen=True)
class Tweet:
    """One example. The dialect tag is carried through, never predicted."""

    id: str
    text: str
    sarcasm: bool | None = None
    sentiment: str | None = None
    dialect: str | None = None

    def label(self, task: str):
        value = self.sarcasm if task == "sarcasm" else self.sentiment
        if value is None:
            raise DataError(f"example {self.id!r} has no {task} label")
        return value


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of labeled tweets for one task."""

    examples: tuple[Tweet, ...]
    task: str

    def __post_init__(self):
        if self.task not in TASKS:
            raise DataError(f"unknown task {self.task!r}; expected one of {TASKS}")
        for ex in self.examples:
            ex.label(self.task)

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    def labels(self) -> list:
        return [ex.label(self.task) for ex in self.examples]


@dataclass(frozen=True)
class SplitSpec:
    """Parameters of the seeded stratified train/validation split."""

    validation_fraction: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.validation_fraction < 1.0:
            raise DataError(
                f"validation_fraction must be in (0, 1), got {self.validation_fraction}"
            )


def _parse_label(kind: str, raw: str, row_num: int):
    table = _SARCASM_FROM_FILE if kind == "sarcasm" else _SENTIMENT_FROM_FILE
    if raw == "":
        return None
    if raw not in table:
        raise DataError(
            f"row {row_num}: unknown {kind} label {raw!r} "
            f"(expected one of {sorted(table)} or empty)"
        )
    return table[raw]


def load_corpus(path: str | Path, task: str) -> Corpus:
    """Load a dataset file, validating schema and label vocabulary.

    Malformed rows abort the load with the offending row number; nothing
    is skipped silently. Example order follows file order.
    """
    path = Path(path)
    if task not in TASKS:
        raise DataError(f"unknown task {task!r}; expected one of {TASKS}")
    if not path.exists():
        raise DataError(f"dataset file not found: {path}")

    examples: list[Tweet] = []
    seen_ids: set[str] = set()
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected header {list(HEADER)}") from None
        if tuple(header) != HEADER:
            raise DataError(f"{path}: bad header {header!r}, expected {list(HEADER)}")
        for row_num, row in enumerate(reader, start=2):
            if len(row) != len(HEADER):
                raise DataError(
                    f"row {row_num}: expected {len(HEADER)} fields, got {len(row)}"
                )
            tweet_id, text, sarcasm_raw, sentiment_raw, dialect = row
            if tweet_id == "":
                raise DataError(f"row {row_num}: empty id")
            if tweet_id in seen_ids:
                raise DataError(f"row {row_num}: duplicate id {tweet_id!r}")
            seen_ids.add(tweet_id)
            sarcasm = _parse_label("sarcasm", sarcasm_raw, row_num)
            sentiment = _parse_label("sentiment", sentiment_raw, row_num)
            if sarcasm is None and sentiment is None:
                raise DataError(f"row {row_num}: example {tweet_id!r} carries no label")
            needed = sarcasm if task == "sarcasm" else sentiment
            if needed is None:
                raise DataError(
                    f"row {row_num}: example {tweet_id!r} has no {task} label"
                )
            examples.append(
                Tweet(
                    id=tweet_id,
                    text=text,
                    sarcasm=sarcasm,
                    sentiment=sentiment,
                    dialect=dialect or None,
                )
            )
    return Corpus(examples=tuple(examples), task=task)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back to the dataset file format (load round-trips)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(HEADER)
        for ex in corpus:
            writer.writerow(
                [
                    ex.id,
                    ex.text,
                    "" if ex.sarcasm is None else _SARCASM_TO_FILE[ex.sarcasm],
                    "" if ex.sentiment is None else _SENTIMENT_TO_FILE[ex.sentiment],
                    ex.dialect or "",
                ]
            )


def class_distribution(corpus: Corpus) -> dict:
    """Count examples per class for the corpus task."""
    return dict(Counter(corpus.labels()))


def _validation_counts(counts: dict, fraction: float, order: tuple) -> dict:
    """Per-class validation sizes via largest-remainder allocation.

    Targets a total of round(N * fraction); each class starts from
    floor(count * fraction) and leftover slots go to the classes with the
    largest fractional remainders, ties broken by class order. Keeps every
    per-class count within +/-1 of round(count * fraction).
    """
    total = sum(counts.values())
    target = int(np.floor(total * fraction + 0.5))
    base = {c: int(np.floor(counts[c] * fraction)) for c in order}
    remainders = {c: counts[c] * fraction - base[c] for c in order}
    deficit = target - sum(base.values())
    # Never let validation swallow a whole class.
    eligible = [c for c in order if base[c] + 1 < counts[c]]
    eligible.sort(key=lambda c: -remainders[c])
    for c in eligible[:deficit]:
        base[c] += 1
    return base


def stratified_split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus]:
    """Split into (train, validation) preserving class proportions.

    Per class, example indices are shuffled with a generator seeded from
    ``spec.seed`` and the first k go to validation. Outputs preserve the
    corpus' original relative order. Deterministic given the seed.
    """
    order = class_order(corpus.task)
    by_class: dict = {c: [] for c in order}
    for idx, ex in enumerate(corpus):
        by_class[ex.label(corpus.task)].append(idx)
    for c in order:
        if 0 < len(by_class[c]) < 2:
            raise DataError(
                f"class {label_name(c)!r} has {len(by_class[c])} example(s); "
                "need at least 2 per class to split"
            )

    counts = {c: len(by_class[c]) for c in order if by_class[c]}
    present = tuple(c for c in order if by_class[c])
    val_sizes = _validation_counts(counts, spec.validation_fraction, present)

    rng = np.random.default_rng(spec.seed)
    val_idx: set[int] = set()
    for c in present:
        indices = np.array(by_class[c])
        rng.shuffle(indices)
        val_idx.update(int(i) for i in indices[: val_sizes[c]])

    train_examples = tuple(ex for i, ex in enumerate(corpus) if i not in val_idx)
    val_examples = tuple(ex for i, ex in enumerate(corpus) if i in val_idx)
    return (
        Corpus(examples=train_examples, task=corpus.task),
        Corpus(examples=val_examples, task=corpus.task),
    )
