"""Regenerate the bundled demo dataset (deterministic, seed 7).

Produces three files under src/arafuse/data/:

* demo_tweets.tsv: 60 tweets, balanced sentiment (20/20/20), 24 sarcastic.
  Raw text carries the noise the cleaning pipeline removes (URLs,
  mentions, hashtags, emoji, diacritics, tatweel, hamza/ta-marbuta/alif-
  maqsura variants) so demos exercise the whole pipeline.
* toy_embeddings.vec: 8-dim static vectors covering the demo vocabulary.
  Vectors cluster by word role (positive/negative/neutral/ironic) so the
  sentence encoder can actually learn from this tiny corpus.
* toy_context_vectors.tsv: 12-dim sentence vectors per tweet id, with the
  label signal in dims 0-2 (sentiment) and 3-4 (irony) plus noise.

The demo corpus is synthetic. It exists so training, evaluation, and the
acceptance checks can run end to end in seconds without external data.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from arafuse.corpus import Corpus, Tweet, save_corpus
from arafuse.preprocess import PreprocessConfig, load_emoji_map, prepare_text

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "arafuse" / "data"
SEED = 7

POSITIVE = ["رائع", "جميل", "ممتاز", "سعيد", "احب", "مذهل", "لطيف", "افضل"]
NEGATIVE = ["سيء", "فظيع", "مزعج", "حزين", "اكره", "كارثه", "ممل", "اسوا"]
NEUTRAL = ["عادي", "تقرير", "خبر", "اجتماع", "مباراه", "طقس", "برنامج", "جدول"]
FILLER = ["اليوم", "جدا", "الان", "هنا", "الناس", "الوقت", "العمل", "الجو"]
IRONY_MARKERS = ["طبعا", "اكيد", "عبقري", "وااو"]

# Raw-text spellings that normalize back to the pool form.
RAW_VARIANTS = {
    "احب": ["أحب"],
    "اكره": ["أكره"],
    "اليوم": ["اليَوم"],
    "جميل": ["جـميل", "جمِيل"],
    "ممتاز": ["مُمتاز"],
    "سيء": ["سَيء"],
    "كارثه": ["كارثة"],
    "مباراه": ["مباراة"],
    "سعاده": ["سعادة"],
    "علي": ["على"],
    "اكيد": ["أكيد"],
    "افضل": ["أفضل"],
    "اسوا": ["أسوا"],
}

EMOJI_BY_SENTIMENT = {
    "positive": ["😍", "😊", "❤️", "👍"],
    "negative": ["😭", "😡", "💔"],
    "neutral": [],
}
IRONY_EMOJI = ["😂", "🙄"]

URLS = ["http://t.co/ab12Cd", "https://example.com/p?q=1", "www.news.net/x"]
MENTIONS = ["@sara_98", "@news_room", "@m7md"]
DIALECTS = ["egypt", "gulf", "levant", "maghreb", "msa"]

SENTIMENT_POOL = {"positive": POSITIVE, "negative": NEGATIVE, "neutral": NEUTRAL}


def rawify(word: str, rng: np.random.Generator) -> str:
    variants = RAW_VARIANTS.get(word)
    if variants and rng.random() < 0.5:
        return variants[int(rng.integers(len(variants)))]
    return word


def compose_tweet(sentiment: str, sarcastic: bool, rng: np.random.Generator) -> str:
    pool = SENTIMENT_POOL[sentiment]
    n_content = int(rng.integers(2, 5))
    words = [pool[int(i)] for i in rng.choice(len(pool), size=n_content, replace=False)]
    words += [FILLER[int(i)] for i in rng.choice(len(FILLER), size=2, replace=False)]
    if sarcastic:
        words.insert(0, IRONY_MARKERS[int(rng.integers(len(IRONY_MARKERS)))])
    rng.shuffle(words)
    parts = [rawify(w, rng) for w in words]

    if rng.random() < 0.4:
        idx = int(rng.integers(len(parts)))
        parts[idx] = "#" + parts[idx]
    if rng.random() < 0.35:
        parts.insert(0, MENTIONS[int(rng.integers(len(MENTIONS)))])
    if rng.random() < 0.35:
        parts.append(URLS[int(rng.integers(len(URLS)))])
    emoji_pool = list(EMOJI_BY_SENTIMENT[sentiment])
    if sarcastic:
        emoji_pool += IRONY_EMOJI
    if emoji_pool and rng.random() < 0.8:
        parts.append(emoji_pool[int(rng.integers(len(emoji_pool)))])
    if rng.random() < 0.4:
        parts.append("!!" if rng.random() < 0.5 else "؟؟")
    return " ".join(parts)


def build_corpus(rng: np.random.Generator) -> Corpus:
    examples = []
    idx = 0
    for sentiment in ("negative", "neutral", "positive"):
        for k in range(20):
            sarcastic = k < 8  # 8 sarcastic per sentiment class = 24 total
            examples.append(
                Tweet(
                    id=f"d{idx:03d}",
                    text=compose_tweet(sentiment, sarcastic, rng),
                    sarcasm=sarcastic,
                    sentiment=sentiment,
                    dialect=DIALECTS[idx % len(DIALECTS)],
                )
            )
            idx += 1
    order = rng.permutation(len(examples))
    shuffled = [examples[int(i)] for i in order]
    return Corpus(examples=tuple(shuffled), task="sentiment")


def role_of(word: str, emoji_map: dict[str, str]) -> str:
    phrase_roles = {
        "حب": "positive", "اعجاب": "positive", "سعاده": "positive", "موافقه": "positive",
        "بكاء": "negative", "غضب": "negative", "حزن": "negative",
        "ضحك": "irony", "ملل": "irony", "نعاس": "neutral", "حماس": "positive",
    }
    if word in POSITIVE:
        return "positive"
    if word in NEGATIVE:
        return "negative"
    if word in NEUTRAL:
        return "neutral"
    if word in IRONY_MARKERS:
        return "irony"
    return phrase_roles.get(word, "filler")


def write_embeddings(vocab: list[str], emoji_map: dict[str, str], rng: np.random.Generator) -> None:
    dim = 8
    centroids = {
        "positive": np.array([1.5, 0, 0, 0, 0.3, 0, 0, 0]),
        "negative": np.array([0, 1.5, 0, 0, 0, 0.3, 0, 0]),
        "neutral": np.array([0, 0, 1.5, 0, 0, 0, 0.3, 0]),
        "irony": np.array([0, 0, 0, 1.5, 0, 0, 0, 0.3]),
        "filler": np.zeros(8),
    }
    lines = [f"{len(vocab)} {dim}"]
    for word in vocab:
        vec = centroids[role_of(word, emoji_map)] + rng.normal(0.0, 0.1, size=dim)
        lines.append(word + " " + " ".join(f"{v:.6f}" for v in vec))
    (DATA_DIR / "toy_embeddings.vec").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_context_vectors(corpus: Corpus, rng: np.random.Generator) -> None:
    sentiment_slot = {"negative": 0, "neutral": 1, "positive": 2}
    lines = []
    for ex in corpus:
        vec = rng.normal(0.0, 0.3, size=12)
        vec[:5] *= 0.05
        vec[sentiment_slot[ex.sentiment]] += 2.0
        vec[3 + (1 if ex.sarcasm else 0)] += 2.0
        lines.append(ex.id + "\t" + ",".join(f"{v:.6f}" for v in vec))
    (DATA_DIR / "toy_context_vectors.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def main() -> None:
    rng = np.random.default_rng(SEED)
    emoji_map = load_emoji_map(DATA_DIR / "emoji_map.tsv")
    config = PreprocessConfig(emoji_map=emoji_map)

    corpus = build_corpus(rng)
    save_corpus(corpus, DATA_DIR / "demo_tweets.tsv")

    vocab_words: list[str] = []
    seen = set()
    for ex in corpus:
        for token in prepare_text(ex.text, config):
            if token not in seen:
                seen.add(token)
                vocab_words.append(token)
    write_embeddings(vocab_words, emoji_map, rng)
    write_context_vectors(corpus, rng)
    print(f"wrote demo corpus ({len(corpus)} tweets), embeddings ({len(vocab_words)} words)")


if __name__ == "__main__":
    main()
