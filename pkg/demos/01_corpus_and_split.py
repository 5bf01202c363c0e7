"""
Loading a tweet corpus and splitting it by class
================================================

Walks through the labeled-TSV loader, the per-class label distribution,
and the seeded stratified validation split. Run from the repo root:

    python3 demos/01_corpus_and_split.py
"""

from collections import Counter

from arafuse.corpus import (
    SplitSpec,
    Tweet,
    Corpus,
    class_distribution,
    load_corpus,
    stratified_split,
)
from arafuse.demo import demo_dataset_path

# ---------------------------------------------------------------------
# The bundled demo corpus: 60 synthetic Arabic tweets, every one labeled
# for both tasks (sentiment: negative/neutral/positive, sarcasm: bool).
# ---------------------------------------------------------------------
corpus = load_corpus(demo_dataset_path(), task="sentiment")
print(f"loaded {len(corpus)} tweets for task {corpus.task!r}")
print("class distribution:", dict(class_distribution(corpus)))

example = corpus.examples[0]
print(f"\nfirst example  id={example.id}  sentiment={example.sentiment}"
      f"  sarcasm={example.sarcasm}")
print("text:", example.text)

# ---------------------------------------------------------------------
# Stratified split: each class is shuffled with the split seed and the
# per-class validation quota is chosen by largest remainder, so the
# overall fraction is honored as closely as integer counts allow.
# ---------------------------------------------------------------------
split = SplitSpec(validation_fraction=0.2, seed=0)
train, val = stratified_split(corpus, split)
print(f"\n80/20 split -> train {len(train)}, val {len(val)}")
print("train classes:", dict(class_distribution(train)))
print("val classes:  ", dict(class_distribution(val)))

# Same seed, same membership — the split is a pure function of the data
# and the SplitSpec settings, which is what makes experiments repeatable.
_, val_again = stratified_split(corpus, split)
assert [t.id for t in val_again] == [t.id for t in val]
print("re-splitting with the same seed gives the same validation ids")

# ---------------------------------------------------------------------
# The same arithmetic at realistic scale: a 12,549-tweet pool with
# imbalanced classes lands on stable per-class validation counts.
# ---------------------------------------------------------------------
big = Corpus(
    examples=tuple(
        Tweet(id=f"t{i}", text="x", sentiment=label)
        for i, label in enumerate(
            ["negative"] * 4622 + ["neutral"] * 5747 + ["positive"] * 2180
        )
    ),
    task="sentiment",
)
big_train, big_val = stratified_split(big, split)
print("\n12,549-tweet pool at fraction 0.2:")
print("  val:  ", dict(Counter(t.sentiment for t in big_val.examples)))
print("  train:", dict(Counter(t.sentiment for t in big_train.examples)))
