import math
import random

import pytest
from hypothesis import given, strategies as st

from indic_mnmt.core import BilingualPair, EmptyCorpus, LineCorpus, parse_language_tag
from indic_mnmt.metrics import (
    BleuStats, DegenerateInput, accumulate_bleu_stats, bleu_report, bleu_score, brevity_penalty,
    corpus_bleu, corpus_bleu_stats, cttr, evaluate_model,
)
from oracles import oracle_bleu, oracle_cttr


def random_corpus(rng: random.Random, vocab="abcdef"):
    n = rng.randint(1, 10)
    refs = [" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 12))) for _ in range(n)]
    hyps = []
    for r in refs:
        toks = r.split()
        mode = rng.random()
        if mode < 0.3:
            hyps.append(r)
        elif mode < 0.8:
            hyps.append(" ".join(t if rng.random() < 0.7 else rng.choice(vocab) for t in toks))
        else:
            hyps.append(" ".join(rng.choice(vocab) for _ in range(rng.randint(0, 12))))
    return hyps, refs


# -- CTTR -----------------------------------------------------------------------


def test_cttr_single_line():
    rep = cttr(["x y"], sample_lines=None)
    assert (rep.tau, rep.rho, rep.cttr) == (2, 2, 1.0)


def test_cttr_duplication_shrinks_by_root_two():
    lines = ["a b c", "a d", "e e f g"]
    once = cttr(lines, sample_lines=None).cttr
    twice = cttr(lines * 2, sample_lines=None).cttr
    assert abs(twice / once - 1 / math.sqrt(2)) <= 1e-12


@given(st.lists(st.text("abcd ", min_size=1), min_size=1, max_size=20).filter(
    lambda ls: any(l.split() for l in ls)))
def test_cttr_matches_oracle(lines):
    assert cttr(lines, sample_lines=None).cttr == pytest.approx(oracle_cttr(lines), abs=1e-12)


@given(st.lists(st.text("abcd ", min_size=1), min_size=1, max_size=20).filter(
    lambda ls: any(l.split() for l in ls)))
def test_cttr_duplication_property(lines):
    a = cttr(lines, sample_lines=None)
    b = cttr(lines + lines, sample_lines=None)
    assert b.tau == a.tau and b.rho == 2 * a.rho
    assert abs(b.cttr * math.sqrt(2) - a.cttr) <= 1e-12


def test_cttr_sampling_is_seeded():
    lines = [f"w{i} w{i % 7} shared" for i in range(200)]
    a = cttr(lines, sample_lines=500, seed=11)
    assert a == cttr(lines, sample_lines=500, seed=11)
    b = cttr(lines, sample_lines=500, seed=12)
    assert a.rho == b.rho == 1500 and a.sample_size == 500


def test_cttr_empty():
    with pytest.raises(EmptyCorpus):
        cttr([], sample_lines=None)


# -- BLEU -----------------------------------------------------------------------


def test_brevity_penalty_cases():
    assert brevity_penalty(10, 5) == 1.0
    assert brevity_penalty(7, 7) == 1.0
    assert abs(brevity_penalty(5, 10) - math.exp(-1)) <= 1e-12
    assert brevity_penalty(0, 3) == 0.0


@given(st.integers(1, 50), st.integers(1, 50))
def test_brevity_penalty_monotone(c, r):
    assert 0 < brevity_penalty(c, r) <= 1
    assert brevity_penalty(c, r) <= brevity_penalty(c + 1, r)


def test_clipped_counts():
    s = accumulate_bleu_stats("the the the", "the cat")
    assert s.matches[0] == 1 and s.totals[0] == 3
    p = accumulate_bleu_stats("the cat sat", "the cat sat")
    assert p.matches == p.totals == [3, 2, 1, 0]
    e = accumulate_bleu_stats("", "x y")
    assert e.totals == [0, 0, 0, 0] and (e.c, e.r) == (0, 2)


def test_perfect_and_zero():
    ref = ["the cat sat on the mat", "a b c d e"]
    assert corpus_bleu(ref, ref) == 100.0
    assert corpus_bleu(["x y z w"], ["a b c d"]) == 0.0
    with pytest.raises(DegenerateInput):
        corpus_bleu([""], ["a b"])


def test_fifty_random_corpora_against_oracle():
    rng = random.Random(2024)
    for _ in range(50):
        hyps, refs = random_corpus(rng)
        try:
            expected = oracle_bleu(hyps, refs)
        except ValueError:
            with pytest.raises(DegenerateInput):
                corpus_bleu(hyps, refs)
            continue
        assert abs(corpus_bleu(hyps, refs) - expected) <= 1e-9


@given(st.randoms(use_true_random=False))
def test_oracle_agreement_property(rnd):
    hyps, refs = random_corpus(rnd, vocab="ab")
    try:
        expected = oracle_bleu(hyps, refs)
    except ValueError:
        return
    assert abs(corpus_bleu(hyps, refs) - expected) <= 1e-9


@given(st.randoms(use_true_random=False))
def test_permutation_invariance(rnd):
    hyps, refs = random_corpus(rnd)
    order = list(range(len(hyps)))
    rnd.shuffle(order)
    a = corpus_bleu_stats(hyps, refs)
    b = corpus_bleu_stats([hyps[i] for i in order], [refs[i] for i in order])
    assert a == b


@given(st.randoms(use_true_random=False))
def test_stats_are_additive(rnd):
    hyps, refs = random_corpus(rnd)
    k = rnd.randint(0, len(hyps))
    whole = corpus_bleu_stats(hyps, refs)
    parts = corpus_bleu_stats(hyps[:k], refs[:k]) + corpus_bleu_stats(hyps[k:], refs[k:])
    assert whole == parts


@given(st.randoms(use_true_random=False))
def test_score_in_range(rnd):
    hyps, refs = random_corpus(rnd)
    stats = corpus_bleu_stats(hyps, refs)
    if any(stats.totals):
        assert 0.0 <= bleu_score(stats) <= 100.0


def test_smoothing_is_opt_in():
    stats = corpus_bleu_stats(["a b c x"], ["a b c d"])
    assert bleu_score(stats) == 0.0
    assert 0.0 < bleu_score(stats, smooth_eps=0.1) < 100.0


def test_report_block():
    stats = corpus_bleu_stats(["a b c d"], ["a b c d"])
    kv = dict(line.split("=", 1) for line in bleu_report(stats).splitlines())
    assert kv["bleu"] == "100.00" and kv["bp"] == "1.0" and kv["c"] == kv["r"] == "4"
    assert [kv[f"p{n}"] for n in range(1, 5)] == ["1.0"] * 4


def test_stats_defaults():
    assert BleuStats().matches == [0, 0, 0, 0]


class _Echo:
    def translate(self, lines, src, tgt):
        return list(lines)


def test_evaluate_model_identity(tmp_path):
    en = parse_language_tag("EN")
    lines = ("one two three four", "five six seven eight")
    pair = BilingualPair(LineCorpus(lines, en), LineCorpus(lines, en))
    assert evaluate_model(_Echo(), pair, tmp_path) == 100.0
    assert (tmp_path / "EN-EN.score.txt").read_text() == "100.00\n"
    other = BilingualPair(LineCorpus(lines, en), LineCorpus(("x y z w", "q r s t"), en))
    assert evaluate_model(_Echo(), other) == 0.0
