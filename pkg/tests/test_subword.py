import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from indic_mnmt.core import EmptyCorpus
from indic_mnmt.subword import (
    BIN_MAGIC, BinarizedCorpus, BinaryFormatError, BpeEncoder, BpeModel, SPECIALS, UNK,
    VocabMismatch, Vocabulary, binarize_lines, bpe_apply, bpe_decode, bpe_learn, build_dictionary,
    debinarize, segment_word,
)
from oracles import oracle_bpe_learn, oracle_segment

words = st.text("abcdक्", min_size=1, max_size=6)
small_corpus = st.lists(st.lists(words, min_size=1, max_size=6), min_size=1, max_size=5).filter(
    lambda ls: sum(map(len, ls)) <= 30).map(lambda ls: [" ".join(l) for l in ls])


def test_learn_simple():
    assert bpe_learn(["ab ab ab"], 1).merges == (("a", "b</w>"),)
    assert bpe_learn(["aa aa"], 5).merges == (("a", "a</w>"),)


def test_learn_stops_below_frequency_two():
    assert bpe_learn(["abc"], 10).merges == ()


def test_tie_break_is_lexicographic():
    # (a, b</w>) and (b, c</w>) both occur twice; the smaller pair wins
    merges = bpe_learn(["ab bc", "ab bc"], 1).merges
    assert merges == (("a", "b</w>"),)


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        bpe_learn(["", "  "], 3)


@given(small_corpus, st.integers(1, 10))
def test_learn_matches_oracle(lines, ops):
    assert list(bpe_learn(lines, ops).merges) == oracle_bpe_learn(lines, ops)


@given(small_corpus, st.integers(1, 10))
def test_apply_equals_replay_on_training_words(lines, ops):
    model = bpe_learn(lines, ops)
    for w in {w for l in lines for w in l.split()}:
        assert list(segment_word(w, model)) == oracle_segment(w, list(model.merges))


def test_apply_and_decode():
    model = bpe_learn(["low lower lowest low low"], 3)
    assert bpe_apply("low", model) == "low"
    assert bpe_apply("ab", BpeModel((), 0)) == "a@@ b"
    assert bpe_decode("a@@ b c@@ d@@ e") == "ab cde"


@given(st.lists(st.text("abcकखा्. ,", max_size=12), max_size=8), st.integers(0, 30))
def test_decode_inverts_apply(lines, ops):
    lines = [" ".join(l.split()) for l in lines]
    corpus = [l for l in lines if l.strip()] or ["a"]
    model = bpe_learn(corpus, max(ops, 1))
    enc = BpeEncoder(model)
    for line in lines:
        assert bpe_decode(enc(line)) == line


def test_merges_file_roundtrip(tmp_path):
    model = bpe_learn(["the cat the hat that"], 10)
    model.save(tmp_path / "m.bpe")
    assert BpeModel.load(tmp_path / "m.bpe") == model
    assert (tmp_path / "m.bpe").read_text().startswith("#bpe v1 ops=10\n")


def test_learning_is_independent_of_jobs():
    rng = random.Random(3)
    lines = [" ".join(rng.choice(["ab", "abc", "bcd", "dab", "कखा"]) for _ in range(8))
             for _ in range(12000)]
    assert bpe_learn(lines, 40, jobs=1).to_text() == bpe_learn(lines, 40, jobs=3).to_text()


# -- dictionary and binarization -----------------------------------------------


def test_dictionary_order_and_specials():
    vocab = build_dictionary(["b a", "a b", "c"])
    assert vocab.entries == (("a", 2), ("b", 2), ("c", 1))
    assert vocab.tokens()[:4] == list(SPECIALS)
    assert vocab.id("a") == 4 and vocab.id("zzz") == UNK
    assert vocab.to_bytes() == b"a 2\nb 2\nc 1\n"


def test_dictionary_file_roundtrip(tmp_path):
    vocab = build_dictionary(["x@@ y z", "z"])
    vocab.save(tmp_path / "dict.txt")
    assert Vocabulary.load(tmp_path / "dict.txt") == vocab


def test_binary_layout():
    vocab = build_dictionary(["a b"])
    data = binarize_lines(["a b", "", "b q"], vocab).to_bytes()
    assert data[:8] == BIN_MAGIC and data[8:40] == vocab.digest()
    assert data[40:44] == (3).to_bytes(4, "little")
    assert data[44:] == b"".join(int(x).to_bytes(4, "little") for x in [2, 4, 5, 0, 2, 5, UNK])


@given(st.lists(st.text("abc@ कख", max_size=15), max_size=10))
def test_binarize_roundtrip(lines):
    lines = [" ".join(l.split()) for l in lines]
    vocab = build_dictionary(lines)
    corpus = BinarizedCorpus.from_bytes(binarize_lines(lines, vocab).to_bytes())
    assert debinarize(corpus, vocab) == lines


def test_debinarize_checks_dictionary():
    corpus = binarize_lines(["a"], build_dictionary(["a"]))
    with pytest.raises(VocabMismatch):
        debinarize(corpus, build_dictionary(["b"]))
    assert debinarize(corpus, build_dictionary(["b"]), check_hash=False) == ["b"]


def test_corrupt_binary():
    good = binarize_lines(["a"], build_dictionary(["a"])).to_bytes()
    with pytest.raises(BinaryFormatError):
        BinarizedCorpus.from_bytes(b"XXXXXXXX" + good[8:])
    with pytest.raises(BinaryFormatError):
        BinarizedCorpus.from_bytes(good + b"\0")
    for cut in (20, 46, len(good) - 1):
        with pytest.raises(BinaryFormatError):
            BinarizedCorpus.from_bytes(good[:cut])


def test_ids_are_uint32():
    corpus = binarize_lines(["a a"], build_dictionary(["a"]))
    assert corpus.lines[0].dtype == np.uint32
