"""Byte-pair encoding, dictionary building and binarization.

BPE follows the subword-nmt conventions: the last character of every word
carries an end-of-word sentinel ``</w>`` during learning, and at application
time every piece except the word-final one gets the ``@@`` continuation
marker.
"""

from __future__ import annotations

import hashlib
import heapq
import struct
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import EmptyCorpus, MnmtError

EOW = "</w>"
CONTINUATION = "@@"
MERGES_HEADER = "#bpe v1"

SPECIALS = ("<pad>", "<unk>", "<s>", "</s>")
PAD, UNK, BOS, EOS = range(4)

BIN_MAGIC = b"MNMTBIN1"


class VocabMismatch(MnmtError):
    pass


class BinaryFormatError(MnmtError):
    pass


# -- learning ----------------------------------------------------------------


def _count_words(lines: Sequence[str]) -> Counter:
    c = Counter()
    for line in lines:
        c.update(line.split())
    return c


def count_words(lines: Sequence[str], jobs: int = 1) -> Counter:
    """Word frequencies; shards are merged by addition so ``jobs`` cannot change the result."""
    lines = list(lines)
    if jobs <= 1 or len(lines) < 2:
        return _count_words(lines)
    size = -(-len(lines) // jobs)
    shards = [lines[i:i + size] for i in range(0, len(lines), size)]
    total = Counter()
    with ProcessPoolExecutor(jobs) as ex:
        for part in ex.map(_count_words, shards):
            total.update(part)
    return total


def word_symbols(word: str) -> tuple[str, ...]:
    return tuple(word[:-1]) + (word[-1] + EOW,)


def merge_symbols(symbols: tuple[str, ...], pair: tuple[str, str]) -> tuple[str, ...]:
    """Left-to-right, non-overlapping replacement of ``pair`` by its concatenation."""
    left, right = pair
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if i < n - 1 and symbols[i] == left and symbols[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


@dataclass(frozen=True)
class BpeModel:
    merges: tuple[tuple[str, str], ...]
    num_operations: int
    continuation_marker: str = CONTINUATION
    ranks: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "merges", tuple(tuple(m) for m in self.merges))
        object.__setattr__(self, "ranks", {m: i for i, m in enumerate(self.merges)})
        if len(self.ranks) != len(self.merges):
            raise ValueError("duplicate merge pair")
        if len(self.merges) > self.num_operations:
            raise ValueError("more merges than operations")

    def to_text(self) -> str:
        body = "".join(f"{a} {b}\n" for a, b in self.merges)
        return f"{MERGES_HEADER} ops={self.num_operations}\n{body}"

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_text().encode("utf-8"))

    @classmethod
    def from_text(cls, text: str) -> BpeModel:
        lines = text.split("\n")
        head = lines[0].split()
        if lines[0].split(" ops=")[0] != MERGES_HEADER or not head[-1].startswith("ops="):
            raise ValueError("not a merges file")
        ops = int(head[-1][4:])
        merges = [tuple(l.split(" ")) for l in lines[1:] if l]
        return cls(tuple(merges), ops)

    @classmethod
    def load(cls, path) -> BpeModel:
        return cls.from_text(Path(path).read_bytes().decode("utf-8"))


def bpe_learn(lines: Iterable[str], num_operations: int, jobs: int = 1,
              min_frequency: int = 2) -> BpeModel:
    """Learn merges greedily by pair frequency.

    Ties go to the lexicographically smallest (left, right). Learning stops
    early once the best pair occurs fewer than ``min_frequency`` times.
    """
    vocab = count_words(lines, jobs)
    if not vocab:
        raise EmptyCorpus("cannot learn BPE from an empty corpus")
    # deterministic word order: the merge loop itself never depends on it
    words = [list(word_symbols(w)) for w in sorted(vocab)]
    freqs = [vocab[w] for w in sorted(vocab)]

    stats: dict[tuple[str, str], int] = defaultdict(int)
    where: dict[tuple[str, str], set[int]] = defaultdict(set)
    for wi, syms in enumerate(words):
        f = freqs[wi]
        for p in zip(syms, syms[1:]):
            stats[p] += f
            where[p].add(wi)

    heap = [(-f, p) for p, f in stats.items()]
    heapq.heapify(heap)
    merges: list[tuple[str, str]] = []
    while len(merges) < num_operations and heap:
        negf, pair = heapq.heappop(heap)
        current = stats.get(pair, 0)
        if current != -negf:
            if current > 0:
                heapq.heappush(heap, (-current, pair))
            continue
        if current < min_frequency:
            break
        merges.append(pair)
        touched = set()
        for wi in sorted(where.pop(pair, ())):
            syms = words[wi]
            f = freqs[wi]
            for p in zip(syms, syms[1:]):
                stats[p] -= f
                touched.add(p)
            new = list(merge_symbols(tuple(syms), pair))
            words[wi] = new
            for p in zip(new, new[1:]):
                stats[p] += f
                where[p].add(wi)
                touched.add(p)
        stats.pop(pair, None)
        for p in touched:
            f = stats.get(p, 0)
            if f > 0 and p != pair:
                heapq.heappush(heap, (-f, p))
            elif f <= 0:
                stats.pop(p, None)
    return BpeModel(tuple(merges), num_operations)


# -- application -------------------------------------------------------------


def segment_word(word: str, model: BpeModel) -> tuple[str, ...]:
    """Apply merges by rank: repeatedly merge the lowest-ranked adjacent pair."""
    syms = word_symbols(word)
    ranks = model.ranks
    while len(syms) > 1:
        best = None
        best_rank = None
        for p in zip(syms, syms[1:]):
            r = ranks.get(p)
            if r is not None and (best_rank is None or r < best_rank):
                best, best_rank = p, r
        if best is None:
            break
        syms = merge_symbols(syms, best)
    return syms


class BpeEncoder:
    """Cached word-level BPE application for one model."""

    def __init__(self, model: BpeModel):
        self.model = model
        self._cache: dict[str, str] = {}

    def encode_word(self, word: str) -> str:
        hit = self._cache.get(word)
        if hit is None:
            pieces = list(segment_word(word, self.model))
            pieces[-1] = pieces[-1][: -len(EOW)]
            if not pieces[-1]:
                pieces.pop()
            marker = self.model.continuation_marker
            hit = " ".join([p + marker for p in pieces[:-1]] + pieces[-1:])
            if len(self._cache) < 1 << 20:
                self._cache[word] = hit
        return hit

    def __call__(self, line: str) -> str:
        return " ".join(self.encode_word(w) for w in line.split())


def bpe_apply(line: str, model: BpeModel) -> str:
    return BpeEncoder(model)(line)


def bpe_decode(line: str) -> str:
    """Undo ``bpe_apply``: join every piece that ends with the continuation marker."""
    if CONTINUATION not in line:
        return line
    out = []
    buf = ""
    for piece in line.split(" "):
        if piece.endswith(CONTINUATION):
            buf += piece[: -len(CONTINUATION)]
        else:
            out.append(buf + piece)
            buf = ""
    if buf:
        out.append(buf)
    return " ".join(out)


# -- dictionary --------------------------------------------------------------


@dataclass(frozen=True)
class Vocabulary:
    """Corpus tokens with counts, ordered by count then token; ids start after the 4 specials."""

    entries: tuple[tuple[str, int], ...]
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((t, int(c)) for t, c in self.entries))
        idx = {t: i for i, t in enumerate(SPECIALS)}
        for i, (tok, _) in enumerate(self.entries, len(SPECIALS)):
            if tok in idx:
                raise ValueError(f"duplicate or reserved token {tok!r}")
            idx[tok] = i
        object.__setattr__(self, "index", idx)

    def __len__(self) -> int:
        return len(SPECIALS) + len(self.entries)

    def tokens(self) -> list[str]:
        return list(SPECIALS) + [t for t, _ in self.entries]

    def id(self, token: str) -> int:
        return self.index.get(token, UNK)

    def to_bytes(self) -> bytes:
        return "".join(f"{t} {c}\n" for t, c in self.entries).encode("utf-8")

    def digest(self) -> bytes:
        return hashlib.sha256(self.to_bytes()).digest()

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path) -> Vocabulary:
        entries = []
        for line in Path(path).read_bytes().decode("utf-8").split("\n"):
            if line:
                tok, count = line.rsplit(" ", 1)
                entries.append((tok, int(count)))
        return cls(tuple(entries))


def build_dictionary(lines: Iterable[str]) -> Vocabulary:
    counts = Counter()
    for line in lines:
        counts.update(line.split())
    return Vocabulary(tuple(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))))


# -- binarization ------------------------------------------------------------


@dataclass(frozen=True)
class BinarizedCorpus:
    vocab_hash: bytes
    lines: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.lines)

    def to_bytes(self) -> bytes:
        parts = [BIN_MAGIC, self.vocab_hash, struct.pack("<I", len(self.lines))]
        for ids in self.lines:
            parts.append(struct.pack("<I", len(ids)))
            parts.append(np.asarray(ids, dtype="<u4").tobytes())
        return b"".join(parts)

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def from_bytes(cls, data: bytes) -> BinarizedCorpus:
        if data[:8] != BIN_MAGIC:
            raise BinaryFormatError("bad magic")
        if len(data) < 44:
            raise BinaryFormatError("truncated header")
        vocab_hash = data[8:40]
        (n,) = struct.unpack_from("<I", data, 40)
        pos = 44
        lines = []
        for _ in range(n):
            if pos + 4 > len(data):
                raise BinaryFormatError("truncated corpus")
            (k,) = struct.unpack_from("<I", data, pos)
            pos += 4
            if pos + 4 * k > len(data):
                raise BinaryFormatError("truncated corpus")
            lines.append(np.frombuffer(data, dtype="<u4", count=k, offset=pos).astype(np.uint32))
            pos += 4 * k
        if pos != len(data):
            raise BinaryFormatError("trailing bytes after last line")
        return cls(vocab_hash, tuple(lines))

    @classmethod
    def load(cls, path) -> BinarizedCorpus:
        return cls.from_bytes(Path(path).read_bytes())


def binarize_lines(lines: Iterable[str], vocab: Vocabulary) -> BinarizedCorpus:
    index = vocab.index
    out = tuple(np.fromiter((index.get(t, UNK) for t in line.split()), dtype=np.uint32)
                for line in lines)
    return BinarizedCorpus(vocab.digest(), out)


def binarize(pair, vocab: Vocabulary) -> tuple[BinarizedCorpus, BinarizedCorpus]:
    """Binarize both sides of a BPE-applied bilingual pair."""
    return binarize_lines(pair.src.lines, vocab), binarize_lines(pair.tgt.lines, vocab)


def debinarize(corpus: BinarizedCorpus, vocab: Vocabulary, check_hash: bool = True) -> list[str]:
    if check_hash and corpus.vocab_hash != vocab.digest():
        raise VocabMismatch("binarized corpus was built with a different dictionary")
    toks = vocab.tokens()
    return [" ".join(toks[i] for i in ids) for ids in corpus.lines]


__all__ = [
    "BIN_MAGIC", "BinarizedCorpus", "BinaryFormatError", "BpeEncoder", "BpeModel", "CONTINUATION",
    "EOW", "SPECIALS", "UNK", "VocabMismatch", "Vocabulary", "binarize", "binarize_lines",
    "bpe_apply", "bpe_decode", "bpe_learn", "build_dictionary", "count_words", "debinarize",
    "merge_symbols", "segment_word", "word_symbols",
]
