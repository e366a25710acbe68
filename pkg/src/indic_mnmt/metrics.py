"""Lexical diversity (corrected type/token ratio) and corpus BLEU."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import BilingualPair, EmptyCorpus, LineCorpus, MnmtError, write_lines

DEFAULT_CTTR_SAMPLE = 1_750_000
MAX_ORDER = 4


class DegenerateInput(MnmtError):
    pass


# -- CTTR --------------------------------------------------------------------


@dataclass(frozen=True)
class CttrReport:
    tau: int
    rho: int
    cttr: float
    sample_size: int
    seed: int | None

    def format(self) -> str:
        return (f"tau={self.tau}\nrho={self.rho}\ncttr={self.cttr!r}\n"
                f"sample_size={self.sample_size}\nseed={self.seed}\n")


def cttr(corpus: LineCorpus | Sequence[str], sample_lines: int | None = DEFAULT_CTTR_SAMPLE,
         seed: int | None = 0) -> CttrReport:
    """CTTR over ``sample_lines`` lines drawn uniformly with replacement.

    Sampling uses numpy's PCG64 generator seeded with ``seed``. Pass
    ``sample_lines=None`` to score the whole corpus once, without sampling.
    """
    lines = corpus.lines if isinstance(corpus, LineCorpus) else tuple(corpus)
    if not lines:
        raise EmptyCorpus("cttr needs at least one line")
    if sample_lines is None:
        chosen: Iterable[str] = lines
        n = len(lines)
    else:
        if sample_lines < 1:
            raise ValueError("sample_lines must be >= 1")
        rng = np.random.Generator(np.random.PCG64(seed))
        idx = rng.integers(0, len(lines), size=sample_lines)
        chosen = (lines[i] for i in idx)
        n = sample_lines
    counts = Counter()
    for line in chosen:
        counts.update(line.split())
    tau, rho = len(counts), sum(counts.values())
    value = tau / math.sqrt(2 * rho) if rho else 0.0
    return CttrReport(tau, rho, value, n, seed)


# -- BLEU --------------------------------------------------------------------


@dataclass
class BleuStats:
    """Additive sufficient statistics for corpus BLEU."""

    max_order: int = MAX_ORDER
    matches: list[int] = field(default_factory=list)
    totals: list[int] = field(default_factory=list)
    c: int = 0
    r: int = 0

    def __post_init__(self):
        if not self.matches:
            self.matches = [0] * self.max_order
        if not self.totals:
            self.totals = [0] * self.max_order

    def __add__(self, other: BleuStats) -> BleuStats:
        if other.max_order != self.max_order:
            raise ValueError("cannot add stats of different orders")
        return BleuStats(self.max_order,
                         [a + b for a, b in zip(self.matches, other.matches)],
                         [a + b for a, b in zip(self.totals, other.totals)],
                         self.c + other.c, self.r + other.r)

    def __iadd__(self, other: BleuStats) -> BleuStats:
        for n in range(self.max_order):
            self.matches[n] += other.matches[n]
            self.totals[n] += other.totals[n]
        self.c += other.c
        self.r += other.r
        return self


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def accumulate_bleu_stats(hyp_line: str, ref_line: str, max_order: int = MAX_ORDER,
                          stats: BleuStats | None = None) -> BleuStats:
    hyp = hyp_line.split()
    ref = ref_line.split()
    if stats is None:
        stats = BleuStats(max_order)
    for n in range(1, max_order + 1):
        h = _ngrams(hyp, n)
        if not h:
            continue
        r = _ngrams(ref, n)
        stats.matches[n - 1] += sum(min(k, r[g]) for g, k in h.items())
        stats.totals[n - 1] += max(len(hyp) - n + 1, 0)
    stats.c += len(hyp)
    stats.r += len(ref)
    return stats


def corpus_bleu_stats(hyps: Iterable[str], refs: Iterable[str], max_order: int = MAX_ORDER) -> BleuStats:
    hyps, refs = list(hyps), list(refs)
    if len(hyps) != len(refs):
        raise ValueError(f"{len(hyps)} hypotheses vs {len(refs)} references")
    stats = BleuStats(max_order)
    for h, r in zip(hyps, refs):
        accumulate_bleu_stats(h, r, max_order, stats)
    return stats


def brevity_penalty(c: int, r: int) -> float:
    if c > r:
        return 1.0
    if c == 0:
        return 0.0 if r > 0 else 1.0
    return math.exp(1 - r / c)


def precisions(stats: BleuStats, smooth_eps: float | None = None) -> list[float]:
    out = []
    for m, t in zip(stats.matches, stats.totals):
        if t == 0:
            out.append(0.0)
        elif m == 0 and smooth_eps:
            out.append(smooth_eps / t)
        else:
            out.append(m / t)
    return out


def bleu_score(stats: BleuStats, weights: Sequence[float] | None = None,
               smooth_eps: float | None = None) -> float:
    """Corpus BLEU on a 0-100 scale; any zero precision gives 0 unless smoothed."""
    if not any(stats.totals):
        raise DegenerateInput("no hypothesis n-grams")
    n = stats.max_order
    weights = [1.0 / n] * n if weights is None else list(weights)
    if len(weights) != n or abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError("weights must have one entry per order and sum to 1")
    ps = precisions(stats, smooth_eps)
    if min(ps) <= 0.0:
        return 0.0
    log_sum = sum(w * math.log(p) for w, p in zip(weights, ps))
    return 100.0 * brevity_penalty(stats.c, stats.r) * math.exp(log_sum)


def corpus_bleu(hyps: Iterable[str], refs: Iterable[str], max_order: int = MAX_ORDER,
                smooth_eps: float | None = None) -> float:
    return bleu_score(corpus_bleu_stats(hyps, refs, max_order), smooth_eps=smooth_eps)


def bleu_report(stats: BleuStats, smooth_eps: float | None = None) -> str:
    """key=value block with everything needed to compare against another BLEU tool."""
    ps = precisions(stats, smooth_eps)
    lines = [f"bleu={bleu_score(stats, smooth_eps=smooth_eps):.2f}"]
    lines += [f"p{i + 1}={p!r}" for i, p in enumerate(ps)]
    lines += [f"matches{i + 1}={m}" for i, m in enumerate(stats.matches)]
    lines += [f"totals{i + 1}={t}" for i, t in enumerate(stats.totals)]
    lines += [f"bp={brevity_penalty(stats.c, stats.r)!r}", f"c={stats.c}", f"r={stats.r}",
              f"max_order={stats.max_order}", f"smooth_eps={smooth_eps}"]
    return "\n".join(lines) + "\n"


def format_score(score: float) -> str:
    return f"{score:.2f}"


def evaluate_model(translator, pair: BilingualPair, out_dir=None) -> float:
    """Translate the source side and score it against the target side.

    ``translator`` needs ``translate(lines, src, tgt) -> list[str]``. When
    ``out_dir`` is given, hypotheses and the score are written there.
    """
    src, tgt = pair.langs
    hyps = translator.translate(list(pair.src.lines), src, tgt)
    score = corpus_bleu(hyps, pair.tgt.lines)
    if out_dir is not None:
        out = Path(out_dir)
        write_lines(out / f"{src.code}-{tgt.code}.hyp.txt", hyps)
        (out / f"{src.code}-{tgt.code}.score.txt").write_text(format_score(score) + "\n")
    return score


__all__ = [
    "BleuStats", "CttrReport", "DEFAULT_CTTR_SAMPLE", "DegenerateInput", "MAX_ORDER",
    "accumulate_bleu_stats", "bleu_report", "bleu_score", "brevity_penalty", "corpus_bleu",
    "corpus_bleu_stats", "cttr", "evaluate_model", "format_score", "precisions",
]
