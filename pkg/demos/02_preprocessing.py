"""
Cleaning, normalizing, and encoding Arabic tweets
=================================================

Shows each preprocessing stage on raw tweet text: noise removal (URLs,
mentions, hashtag marks, punctuation), emoji-to-phrase mapping,
diacritics stripping, orthographic normalization, optional stopword
removal, and finally encoding into padded id sequences for the model.

    python3 demos/02_preprocessing.py
"""

from arafuse.demo import demo_embeddings_path, emoji_map_path, stopwords_path
from arafuse.embeddings import load_static_embeddings
from arafuse.preprocess import (
    PreprocessConfig,
    clean,
    load_emoji_map,
    load_stopwords,
    normalize,
    prepare_text,
    tokenize_encode,
)

config = PreprocessConfig(emoji_map=load_emoji_map(emoji_map_path()))

# ---------------------------------------------------------------------
# Stage 1 — clean: remove web noise, map emoji to Arabic phrases, strip
# diacritics, turn punctuation into spaces, collapse whitespace.
# ---------------------------------------------------------------------
raw = "جميييل جداً #السعادة 😂 حياكم https://t.co/xyz @friend !!"
cleaned = clean(raw, config)
print("raw:      ", raw)
print("cleaned:  ", cleaned)

# Clean is idempotent: running it twice changes nothing.
assert clean(cleaned, config) == cleaned

# ---------------------------------------------------------------------
# Stage 2 — normalize: fold hamza-carrying alifs to bare alif, ta
# marbuta to ha, alif maqsura to ya, and drop tatweel stretching, so
# spelling variants of the same word share one vocabulary entry.
# ---------------------------------------------------------------------
variants = ["أحب إلى آخر", "مدرسة", "مشفى", "جمـــيل"]
for word in variants:
    print(f"normalize({word!r}) -> {normalize(word)!r}")

# ---------------------------------------------------------------------
# Hashtag handling: keep the words (default) or drop the whole token.
# ---------------------------------------------------------------------
tagged = "مبروك #فوز_المنتخب"
keep = PreprocessConfig(emoji_map=config.emoji_map, keep_hashtag_words=True)
drop = PreprocessConfig(emoji_map=config.emoji_map, keep_hashtag_words=False)
print("\nhashtag kept:   ", prepare_text(tagged, keep))
print("hashtag dropped:", prepare_text(tagged, drop))

# ---------------------------------------------------------------------
# Stopword removal is exact-match over normalized tokens.
# ---------------------------------------------------------------------
stop = PreprocessConfig(
    emoji_map=config.emoji_map,
    remove_stopwords=True,
    stopwords=load_stopwords(stopwords_path()),
)
sentence = "ذهبت إلى البيت مع صديقي"
print("\nwith stopwords:   ", prepare_text(sentence, config))
print("without stopwords:", prepare_text(sentence, stop))

# ---------------------------------------------------------------------
# Stage 3 — encode: tokens become embedding-table ids; id 0 pads, id 1
# marks out-of-vocabulary words. Sequences are truncated or padded to
# the configured fixed length.
# ---------------------------------------------------------------------
table = load_static_embeddings(demo_embeddings_path())
short = PreprocessConfig(emoji_map=config.emoji_map, max_len=8)
seq = tokenize_encode("جميل رائع كلمة_غريبة", table.vocabulary, short)
print("\ntokens:", seq.tokens)
print("ids:   ", seq.ids, f"({seq.n_real} real, rest padding)")
