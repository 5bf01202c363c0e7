"""Arabic tweet text preparation.

The pipeline is clean -> normalize -> tokenize/encode, with optional
stopword removal between normalize and encode:

* ``clean`` strips URLs, mentions, and hashtag markers, replaces emoji
  with Arabic phrases, removes diacritics, drops punctuation/symbols, and
  collapses whitespace. Idempotent.
* ``normalize`` folds common Arabic orthographic variants. Idempotent.
* ``tokenize_encode`` splits on whitespace and maps tokens to vocabulary
  ids, padding/truncating to a fixed length.

All steps are pure functions of their inputs; byte-identical inputs give
byte-identical outputs.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from arafuse.errors import DataError

# id 0 pads, id 1 marks out-of-vocabulary tokens; real words start at 2.
PAD_ID = 0
OOV_ID = 1
FIRST_WORD_ID = 2

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_MARK_RE = re.compile(r"#")
_HASHTAG_TOKEN_RE = re.compile(r"#\S+")
# Arabic tashkeel marks plus the dagger alif.
_DIACRITICS_RE = re.compile(r"[ً-ْٰ]")
_WHITESPACE_RE = re.compile(r"\s+")

_ALIF_VARIANTS_RE = re.compile(r"[أإآ]")  # hamza forms of alif
_TATWEEL = "ـ"

# Variation selectors ride along with emoji; they carry no text content.
_VARIATION_SELECTORS = frozenset(chr(c) for c in range(0xFE00, 0xFE10))


@dataclass(frozen=True)
class PreprocessConfig:
    """Switches for the cleaning pipeline.

    ``keep_hashtag_words`` keeps hashtag text with the marker removed;
    when false the whole hashtag token is dropped. ``emoji_map`` replaces
    each emoji key with an Arabic phrase, space-padded so it tokenizes as
    its own words. ``remove_stopwords`` applies the stopword list after
    normalization.
    """

    keep_hashtag_words: bool = True
    remove_stopwords: bool = False
    emoji_map: dict[str, str] = field(default_factory=dict)
    stopwords: frozenset[str] = frozenset()
    max_len: int = 100

    def __post_init__(self):
        if self.max_len < 1:
            raise DataError(f"max_len must be positive, got {self.max_len}")


@dataclass(frozen=True)
class TokenSequence:
    """An encoded example: fixed-length ids plus the surviving tokens."""

    ids: tuple[int, ...]
    tokens: tuple[str, ...]
    n_real: int


def _replace_emoji(text: str, emoji_map: dict[str, str]) -> str:
    if not emoji_map:
        return text
    # Longest keys first so multi-codepoint emoji win over their prefixes.
    for key in sorted(emoji_map, key=len, reverse=True):
        if key in text:
            text = text.replace(key, f" {emoji_map[key]} ")
    return text


def _scrub_chars(text: str) -> str:
    """Drop punctuation and symbols, keep letters/digits/whitespace."""
    out: list[str] = []
    for ch in text:
        if ch in _VARIATION_SELECTORS:
            continue
        cat = unicodedata.category(ch)
        if cat.startswith("P") or cat.startswith("S"):
            out.append(" ")
        elif cat == "Cf":
            continue
        else:
            out.append(ch)
    return "".join(out)


def clean(text: str, config: PreprocessConfig | None = None) -> str:
    """Remove tweet noise. Applying clean twice equals applying it once."""
    config = config or PreprocessConfig()
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    if config.keep_hashtag_words:
        text = _HASHTAG_MARK_RE.sub(" ", text)
    else:
        text = _HASHTAG_TOKEN_RE.sub(" ", text)
    text = _replace_emoji(text, config.emoji_map)
    text = _DIACRITICS_RE.sub("", text)
    text = _scrub_chars(text)
    return _WHITESPACE_RE.sub(" ", text).strip()


def normalize(text: str) -> str:
    """Fold Arabic orthographic variants. Idempotent.

    Hamza-carrying alif forms fold to bare alif, ta marbuta to ha, alif
    maqsura to ya, and the tatweel stretch character is removed.
    """
    text = _ALIF_VARIANTS_RE.sub("ا", text)
    text = text.replace("ة", "ه")
    text = text.replace("ى", "ي")
    return text.replace(_TATWEEL, "")


def remove_stopwords(tokens: list[str], stopwords: frozenset[str]) -> list[str]:
    """Drop exact-match stopwords; match after normalization for parity."""
    return [t for t in tokens if t not in stopwords]


def prepare_text(text: str, config: PreprocessConfig) -> list[str]:
    """Run clean + normalize (+ stopword removal) and return tokens."""
    prepared = normalize(clean(text, config))
    tokens = prepared.split()
    if config.remove_stopwords:
        tokens = remove_stopwords(tokens, config.stopwords)
    return tokens


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One stopword per line, in normalized form; blank lines ignored."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"stopword file not found: {path}")
    words = set()
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word:
                words.add(word)
    return frozenset(words)


def load_emoji_map(path: str | Path) -> dict[str, str]:
    """Parse ``emoji<TAB>phrase`` lines; both fields must be non-empty."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"emoji map file not found: {path}")
    mapping: dict[str, str] = {}
    with path.open(encoding="utf-8") as fh:
        for line_num, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise DataError(f"{path}: line {line_num}: expected emoji<TAB>phrase")
            emoji, _, phrase = line.partition("\t")
            if not emoji or not phrase:
                raise DataError(f"{path}: line {line_num}: empty field")
            if emoji in mapping:
                raise DataError(f"{path}: line {line_num}: duplicate emoji {emoji!r}")
            mapping[emoji] = phrase
    return mapping


def tokenize_encode(
    text: str, vocabulary: dict[str, int], config: PreprocessConfig
) -> TokenSequence:
    """Encode a raw tweet into fixed-length vocabulary ids.

    Unknown tokens map to ``OOV_ID``; sequences are post-padded with
    ``PAD_ID`` to ``config.max_len`` and longer ones keep their first
    ``max_len`` tokens.
    """
    tokens = prepare_text(text, config)[: config.max_len]
    ids = [vocabulary.get(t, OOV_ID) for t in tokens]
    for token, idx in zip(tokens, ids):
        if idx in (PAD_ID, OOV_ID) and vocabulary.get(token) is not None:
            raise DataError(
                f"vocabulary maps {token!r} to reserved id {idx}; "
                f"word ids must start at {FIRST_WORD_ID}"
            )
    n_real = len(ids)
    ids.extend([PAD_ID] * (config.max_len - n_real))
    return TokenSequence(ids=tuple(ids), tokens=tuple(tokens), n_real=n_real)
