"""Synthetic parallel corpora for tests, benchmarks and smoke runs.

Each toy language gets a fixed word list built from its own script's
syllables; a line in one language is a word-for-word image of the same
index sequence in the other.
"""

from __future__ import annotations

import unicodedata

import numpy as np

from .core import BilingualPair, LineCorpus, parse_language_tag

_EN_WORDS = (
    "the river flows past old stone houses near village market where farmers sell rice "
    "wheat milk and fresh green vegetables every morning before school children walk "
    "along narrow roads under tall trees while birds sing songs about rain clouds"
).split()

_CONSONANT_OFFSETS = (0x15, 0x17, 0x1A, 0x1C, 0x1F, 0x24, 0x26, 0x28, 0x2A, 0x2C, 0x2E, 0x2F,
                      0x30, 0x32, 0x35, 0x38, 0x39)
_MATRA_OFFSETS = (None, 0x3E, 0x3F, 0x40, 0x41, 0x42, 0x47, 0x4B)
_HALANT = 0x4D


def _syllables(base: int) -> list[str]:
    out = []
    for c in _CONSONANT_OFFSETS:
        for m in _MATRA_OFFSETS:
            out.append(chr(base + c) + ("" if m is None else chr(base + m)))
    out += [chr(base + c) + chr(base + _HALANT) + chr(base + 0x2F) for c in _CONSONANT_OFFSETS[:6]]
    # Tamil leaves several of these offsets unassigned
    return [s for s in out if all(unicodedata.name(ch, "") for ch in s)]


def toy_lexicon(lang, size: int = len(_EN_WORDS), seed: int = 0) -> list[str]:
    tag = parse_language_tag(lang)
    if tag.code == "EN":
        return list(_EN_WORDS[:size])
    rng = np.random.Generator(np.random.PCG64([seed, tag.block.start]))
    syl = _syllables(tag.block.start)
    words: list[str] = []
    seen = set()
    while len(words) < size:
        w = "".join(syl[i] for i in rng.integers(0, len(syl), size=int(rng.integers(1, 4))))
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


def toy_pair(src, tgt, n_lines: int, seed: int = 0, min_len: int = 4,
             max_len: int = 15) -> BilingualPair:
    """``n_lines`` aligned lines; Indic sides end with a danda, English with a period."""
    s, t = parse_language_tag(src), parse_language_tag(tgt)
    lex_s, lex_t = toy_lexicon(s, seed=seed), toy_lexicon(t, seed=seed)
    rng = np.random.Generator(np.random.PCG64(seed))
    src_lines, tgt_lines = [], []
    for _ in range(n_lines):
        idx = rng.integers(0, len(_EN_WORDS), size=int(rng.integers(min_len, max_len + 1)))
        comma = int(rng.integers(1, len(idx))) if rng.random() < 0.3 else None
        for lex, tag, out in ((lex_s, s, src_lines), (lex_t, t, tgt_lines)):
            words = [lex[i] for i in idx]
            if comma is not None:
                words[comma - 1] += ","
            if tag.code == "EN":
                words[0] = words[0].capitalize()
            end = "." if tag.code == "EN" else "।"
            out.append(" ".join(words) + end)
    return BilingualPair(LineCorpus(tuple(src_lines), s), LineCorpus(tuple(tgt_lines), t))


def bench_lines(n_lines: int, lang="HI", seed: int = 0, vocab_size: int = 50_000,
                mean_tokens: int = 15) -> list[str]:
    """Raw (untokenized) lines with Zipf-distributed words and attached punctuation.

    Roughly one word in ten is English, as in web-crawled Indic corpora.
    """
    tag = parse_language_tag(lang)
    rng = np.random.Generator(np.random.PCG64(seed))
    syl = _syllables(tag.block.start)
    indic = ["".join(syl[i] for i in rng.integers(0, len(syl), size=int(rng.integers(1, 5))))
             for _ in range(vocab_size)]
    latin = ["".join(chr(97 + int(c)) for c in rng.integers(0, 26, size=int(rng.integers(2, 9))))
             for _ in range(vocab_size // 10)]
    punct = [",", ";", ":", "?", "!", ")", "\u201d"]
    out = []
    for _ in range(n_lines):
        k = max(1, int(rng.poisson(mean_tokens - 1)))
        ranks = np.minimum(rng.zipf(1.2, size=k), vocab_size) - 1
        words = []
        for r in ranks:
            w = latin[r % len(latin)] if rng.random() < 0.1 else indic[r]
            if rng.random() < 0.08:
                w += punct[int(rng.integers(0, len(punct)))]
            words.append(w)
        out.append(" ".join(words) + "\u0964")
    return out


__all__ = ["bench_lines", "toy_lexicon", "toy_pair"]
