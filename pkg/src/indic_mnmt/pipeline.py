"""Corpus preparation, direct evaluation and pivot evaluation.

``prepare`` turns raw bilingual corpora into BPE-encoded, binarized training
data plus a manifest recording every stage's content hash. ``evaluate`` and
``pivot_evaluate`` replay the recorded stages on a test pair, send it through
translator adapters and score the result.
"""

from __future__ import annotations

import enum
import hashlib
import os
from dataclasses import dataclass, field
from functools import lru_cache
from multiprocessing import Pool
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .adapters import AdapterError, LookupAdapter, TranslatorAdapter
from .core import (
    AlignmentError, BilingualPair, ConfigError, Group, LanguageTag, LineCorpus, MnmtError,
    parse_language_tag, sha256_file, sha256_lines, write_lines,
)
from .metrics import evaluate_model, format_score
from .normalize import lowercase_english, minimize_whitespace, normalize_line, rules_for, tokenize
from .subword import (
    SPECIALS, BinarizedCorpus, BpeEncoder, BpeModel, Vocabulary, binarize_lines, bpe_decode,
    bpe_learn, build_dictionary,
)
from .translit import MAP_DIR_ENV, load_map, transliterate_line

TOOL_NAME = "indic-mnmt"
DEFAULT_BPE_OPERATIONS = 48_000
LINE_STAGES = ("tokenize", "lowercase", "normalize", "minimize_whitespace", "transliterate")
STAGE_ORDER = LINE_STAGES + ("concatenate", "bpe_learn", "bpe_apply", "build_dictionary", "binarize")

_GROUPS = {
    Group.EI: ("AS", "BN", "OR"),
    Group.DR: ("KN", "ML", "TA", "TE"),
    Group.WI: ("GU", "HI", "MR", "PA"),
}


class Order(enum.IntEnum):
    FROM_COMMON = 0
    TO_COMMON = 1


def group_members(group: Group | str) -> list[LanguageTag]:
    g = group if isinstance(group, Group) else Group(str(group).upper())
    if g not in _GROUPS:
        raise ConfigError(f"{g.value} is not a language group")
    return [parse_language_tag(c) for c in _GROUPS[g]]


@dataclass(frozen=True)
class PipelineConfig:
    common_lang: LanguageTag
    lang_set: tuple[LanguageTag, ...]
    order: Order = Order.FROM_COMMON
    is_translit: bool = False
    bpe_operations: int = DEFAULT_BPE_OPERATIONS
    group_filter: Group | None = None

    def __post_init__(self):
        object.__setattr__(self, "common_lang", parse_language_tag(self.common_lang))
        object.__setattr__(self, "lang_set", tuple(parse_language_tag(l) for l in self.lang_set))
        object.__setattr__(self, "order", Order(int(self.order)))
        if isinstance(self.group_filter, str):
            object.__setattr__(self, "group_filter", Group(self.group_filter.upper()))
        codes = [l.code for l in self.lang_set]
        if not codes:
            raise ConfigError("lang_set is empty")
        if len(set(codes)) != len(codes):
            raise ConfigError("lang_set has duplicates")
        if self.common_lang.code in codes:
            raise ConfigError(f"common language {self.common_lang} is also in lang_set")
        if self.group_filter is not None:
            members = {l.code for l in group_members(self.group_filter)}
            outside = [c for c in codes if c not in members]
            if outside:
                raise ConfigError(f"{','.join(outside)} not in group {self.group_filter.value}")
        if self.bpe_operations < 1:
            raise ConfigError("bpe_operations must be positive")

    @property
    def lang_pairs(self) -> list[tuple[LanguageTag, LanguageTag]]:
        com = self.common_lang
        if self.order is Order.FROM_COMMON:
            return [(com, l) for l in self.lang_set]
        return [(l, com) for l in self.lang_set]

    def echo(self) -> dict[str, str]:
        return {
            "config.common_lang": self.common_lang.code,
            "config.lang_set": ",".join(l.code for l in self.lang_set),
            "config.order": str(int(self.order)),
            "config.is_translit": str(int(self.is_translit)),
            "config.bpe_operations": str(self.bpe_operations),
            "config.group_filter": self.group_filter.value if self.group_filter else "",
        }

    @classmethod
    def from_echo(cls, kv: Mapping[str, str]) -> PipelineConfig:
        return cls(kv["config.common_lang"], tuple(kv["config.lang_set"].split(",")),
                   Order(int(kv["config.order"])), kv["config.is_translit"] == "1",
                   int(kv["config.bpe_operations"]), kv["config.group_filter"] or None)


def pair_key(src, tgt) -> str:
    return f"{parse_language_tag(src).code}-{parse_language_tag(tgt).code}"


# -- line stages ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _map_for(code: str, directory: str | None):
    return load_map(code, directory)


def _map_directory() -> str | None:
    return os.environ.get(MAP_DIR_ENV) or None


def line_stages(line: str, code: str, is_translit: bool, directory: str | None = None) -> tuple[str, ...]:
    """Every line-stage output for one line, in stage order."""
    t = tokenize(line, code)
    lo = lowercase_english(t) if code == "EN" else t
    n = normalize_line(lo, rules_for(code))
    w = minimize_whitespace(n)
    tr = transliterate_line(w, _map_for(code, directory)) if is_translit else w
    return t, lo, n, w, tr


def preprocess_line(line: str, lang, is_translit: bool) -> str:
    return line_stages(line, parse_language_tag(lang).code, is_translit, _map_directory())[-1]


def _stages_worker(args):
    lines, code, is_translit, directory = args
    return [line_stages(l, code, is_translit, directory) for l in lines]


def _run_line_stages(lines: Sequence[str], code: str, is_translit: bool, jobs: int) -> list[tuple[str, ...]]:
    directory = _map_directory()
    if jobs <= 1 or len(lines) < 2:
        return _stages_worker((lines, code, is_translit, directory))
    size = -(-len(lines) // (jobs * 4))
    chunks = [(lines[i:i + size], code, is_translit, directory) for i in range(0, len(lines), size)]
    # pool.map keeps chunk order, so output order never depends on jobs
    with Pool(jobs) as pool:
        parts = pool.map(_stages_worker, chunks)
    return [row for part in parts for row in part]


def preprocess_lines(lines: Sequence[str], lang, is_translit: bool, jobs: int = 1) -> list[str]:
    code = parse_language_tag(lang).code
    return [row[-1] for row in _run_line_stages(list(lines), code, is_translit, jobs)]


def _annotate(err: MnmtError, stage: str, where: str) -> MnmtError:
    err.stage, err.pair = stage, where
    if type(err).__str__ is Exception.__str__:
        err.args = (f"[{stage} {where}] " + (str(err.args[0]) if err.args else type(err).__name__),)
    return err


# -- prepared sets ---------------------------------------------------------------


def _manifest_text(kv: Mapping[str, str]) -> str:
    return "".join(f"{k}={v}\n" for k, v in kv.items())


def _parse_manifest(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line and not line.startswith("#"):
            k, _, v = line.partition("=")
            out[k] = v
    return out


@dataclass
class PreparedSet:
    run_dir: Path
    config: PipelineConfig
    model: BpeModel
    vocab: Vocabulary
    manifest: dict[str, str]
    _encoder: BpeEncoder | None = field(default=None, repr=False)

    @property
    def lang_pairs(self) -> list[tuple[LanguageTag, LanguageTag]]:
        return self.config.lang_pairs

    @property
    def merges_path(self) -> Path:
        return self.run_dir / "merges.bpe"

    @property
    def dict_path(self) -> Path:
        return self.run_dir / "dict.txt"

    def bin_paths(self, src, tgt) -> tuple[Path, Path]:
        key = pair_key(src, tgt)
        return self.run_dir / "bin" / f"{key}.src.bin", self.run_dir / "bin" / f"{key}.tgt.bin"

    def binarized(self, src, tgt) -> tuple[BinarizedCorpus, BinarizedCorpus]:
        s, t = self.bin_paths(src, tgt)
        return BinarizedCorpus.load(s), BinarizedCorpus.load(t)

    @property
    def encoder(self) -> BpeEncoder:
        if self._encoder is None:
            self._encoder = BpeEncoder(self.model)
        return self._encoder

    def artifacts(self) -> list[Path]:
        paths = [self.merges_path, self.dict_path]
        for s, t in self.lang_pairs:
            paths.extend(self.bin_paths(s, t))
        return paths

    def verify(self) -> bool:
        """True when every artifact on disk matches its manifest hash."""
        for p in self.artifacts():
            rel = p.relative_to(self.run_dir).as_posix()
            if not p.exists() or self.manifest.get(f"artifact.{rel}") != sha256_file(p):
                return False
        return True

    def check_maps(self) -> None:
        """Refuse to replay transliteration with maps other than the recorded ones."""
        if not self.config.is_translit:
            return
        directory = _map_directory()
        for code in [self.config.common_lang.code] + [l.code for l in self.config.lang_set]:
            recorded = self.manifest.get(f"map.{code}.sha256")
            if recorded is not None and _map_for(code, directory).digest != recorded:
                raise ConfigError(f"transliteration map for {code} differs from the prepared one")

    def preprocess(self, lines: Sequence[str], lang, jobs: int = 1) -> list[str]:
        """Replay the recorded line stages (no BPE)."""
        return preprocess_lines(lines, lang, self.config.is_translit, jobs)

    def encode(self, lines: Sequence[str], lang, jobs: int = 1) -> list[str]:
        enc = self.encoder
        return [enc(l) for l in self.preprocess(lines, lang, jobs)]

    @classmethod
    def load(cls, run_dir) -> PreparedSet:
        run_dir = Path(run_dir)
        mf = run_dir / "manifest.txt"
        if not mf.exists():
            raise ConfigError(f"no manifest in {run_dir}")
        kv = _parse_manifest(mf.read_text("utf-8"))
        config = PipelineConfig.from_echo(kv)
        return cls(run_dir, config, BpeModel.load(run_dir / "merges.bpe"),
                   Vocabulary.load(run_dir / "dict.txt"), kv)


def _orient(config: PipelineConfig, corpora: Sequence[BilingualPair]) -> list[BilingualPair]:
    """Match each input pair to its LangPairs slot, swapping sides if needed."""
    by_key = {}
    for pair in corpora:
        s, t = (l.code for l in pair.langs)
        if len(pair.src) != len(pair.tgt):
            raise AlignmentError(len(pair.src), len(pair.tgt))
        by_key[(s, t)] = pair
        by_key.setdefault((t, s), pair.swapped())
    out = []
    for s, t in config.lang_pairs:
        pair = by_key.get((s.code, t.code))
        if pair is None:
            raise ConfigError(f"no corpus pairs {s} with {t}")
        out.append(pair)
    if len(corpora) != len(out):
        raise ConfigError(f"expected {len(out)} bilingual pairs, got {len(corpora)}")
    return out


def run_hash(config: PipelineConfig, pairs: Sequence[BilingualPair]) -> str:
    h = hashlib.sha256()
    h.update(f"{TOOL_NAME} {__version__}\n".encode())
    h.update(_manifest_text(config.echo()).encode())
    for pair in pairs:
        for side in (pair.src, pair.tgt):
            h.update(f"{side.lang.code} {side.digest()}\n".encode())
    if config.is_translit:
        directory = _map_directory()
        for code in sorted({c for p in pairs for c in (p.src.lang.code, p.tgt.lang.code)}):
            h.update(f"map {code} {_map_for(code, directory).digest}\n".encode())
    return h.hexdigest()[:16]


def prepare(config: PipelineConfig, corpora: Sequence[BilingualPair], run_root="run",
            jobs: int = 1, force: bool = False) -> PreparedSet:
    """Preprocess, learn BPE, encode, build the dictionary and binarize.

    The result lives in ``<run_root>/<config-hash>/``. An existing directory
    whose artifacts match its manifest is reused unless ``force`` is set.
    """
    pairs = _orient(config, corpora)
    run_dir = Path(run_root) / run_hash(config, pairs)
    if not force and (run_dir / "manifest.txt").exists():
        prep = PreparedSet.load(run_dir)
        if prep.verify():
            return prep

    kv: dict[str, str] = {"tool": TOOL_NAME, "tool_version": __version__}
    kv.update(config.echo())
    kv["stage_order"] = ",".join(STAGE_ORDER)
    kv["lowercase_scope"] = "EN"
    kv["bleu_space"] = "itrans" if config.is_translit else "text"
    kv["specials"] = ",".join(SPECIALS)
    kv["lang_pairs"] = ",".join(pair_key(s, t) for s, t in config.lang_pairs)
    if config.is_translit:
        directory = _map_directory()
        codes = [config.common_lang.code] + [l.code for l in config.lang_set]
        for code in codes:
            m = _map_for(code, directory)
            kv[f"map.{code}.version"] = m.version
            kv[f"map.{code}.sha256"] = m.digest

    processed: list[BilingualPair] = []
    for pair in pairs:
        key = pair_key(*pair.langs)
        sides = []
        for role, side in (("src", pair.src), ("tgt", pair.tgt)):
            code = side.lang.code
            where = f"{key}.{role}"
            kv[f"input.{where}.sha256"] = side.digest()
            try:
                rows = _run_line_stages(list(side.lines), code, config.is_translit, jobs)
            except MnmtError as e:
                raise _annotate(e, "line_stages", where)
            columns = list(zip(*rows)) if rows else [()] * len(LINE_STAGES)
            for name, col in zip(LINE_STAGES, columns):
                skipped = (name == "lowercase" and code != "EN") or (
                    name == "transliterate" and not config.is_translit)
                kv[f"stage.{where}.{name}"] = "skip" if skipped else sha256_lines(col)
            sides.append(LineCorpus(columns[-1], side.lang))
        processed.append(BilingualPair(*sides))

    full = [l for p in processed for side in (p.src, p.tgt) for l in side.lines]
    kv["stage.concatenate"] = sha256_lines(full)
    try:
        model = bpe_learn(full, config.bpe_operations, jobs)
    except MnmtError as e:
        raise _annotate(e, "bpe_learn", "all")
    kv["stage.bpe_learn.merges"] = str(len(model.merges))

    # BPE is per line, so the encoded concatenation is the concatenation of the encoded pairs
    enc = BpeEncoder(model)
    encoded = [BilingualPair(p.src.map(enc), p.tgt.map(enc)) for p in processed]
    full_bpe = [l for p in encoded for side in (p.src, p.tgt) for l in side.lines]
    kv["stage.bpe_apply"] = sha256_lines(full_bpe)
    vocab = build_dictionary(full_bpe)
    kv["stage.build_dictionary.size"] = str(len(vocab))

    (run_dir / "bin").mkdir(parents=True, exist_ok=True)
    model.save(run_dir / "merges.bpe")
    vocab.save(run_dir / "dict.txt")
    prep = PreparedSet(run_dir, config, model, vocab, kv)
    for pair in encoded:
        s_path, t_path = prep.bin_paths(*pair.langs)
        binarize_lines(pair.src.lines, vocab).save(s_path)
        binarize_lines(pair.tgt.lines, vocab).save(t_path)
    for p in prep.artifacts():
        kv[f"artifact.{p.relative_to(run_dir).as_posix()}"] = sha256_file(p)
    (run_dir / "manifest.txt").write_text(_manifest_text(kv), encoding="utf-8")
    return prep


def build_pivot(common, src_set, tgt_set, src_corpora, tgt_corpora, is_translit: bool = False,
                run_root="run", bpe_operations: int = DEFAULT_BPE_OPERATIONS,
                jobs: int = 1) -> tuple[PreparedSet, PreparedSet]:
    """Source side trained into the pivot, target side trained out of it."""
    if not src_set or not tgt_set:
        raise ConfigError("pivot needs non-empty source and target language sets")
    src_cfg = PipelineConfig(common, tuple(src_set), Order.TO_COMMON, is_translit, bpe_operations)
    tgt_cfg = PipelineConfig(common, tuple(tgt_set), Order.FROM_COMMON, is_translit, bpe_operations)
    return (prepare(src_cfg, src_corpora, run_root, jobs),
            prepare(tgt_cfg, tgt_corpora, run_root, jobs))


# -- evaluation --------------------------------------------------------------------


class _EncodedTranslator:
    """Wraps an adapter so it sees BPE-encoded input and returns decoded text."""

    def __init__(self, adapter: TranslatorAdapter, prep: PreparedSet | None, hop: int | None = None):
        self.adapter, self.prep, self.hop = adapter, prep, hop

    def translate(self, lines, src, tgt):
        enc = self.prep.encoder if self.prep is not None else None
        sent = [enc(l) for l in lines] if enc else list(lines)
        try:
            out = self.adapter.translate(sent, src, tgt)
        except AdapterError as e:
            e.hop = self.hop
            raise
        if len(out) != len(sent):
            raise AdapterError("line_count", f"sent {len(sent)} lines, got {len(out)}", self.hop)
        return [bpe_decode(l) for l in out] if enc else list(out)


def _preprocess_pair(pair: BilingualPair, prep: PreparedSet | None, jobs: int = 1) -> BilingualPair:
    if prep is None:
        return pair
    prep.check_maps()
    return BilingualPair(LineCorpus(prep.preprocess(pair.src.lines, pair.src.lang, jobs), pair.src.lang),
                         LineCorpus(prep.preprocess(pair.tgt.lines, pair.tgt.lang, jobs), pair.tgt.lang))


def _record_score(out_dir: Path, key: str, score: float) -> None:
    path = out_dir / "scores.txt"
    rows = {}
    if path.exists():
        for line in path.read_text("utf-8").splitlines():
            k, _, v = line.partition("\t")
            rows[k] = v
    rows[key] = format_score(score)
    path.write_text("".join(f"{k}\t{v}\n" for k, v in rows.items()), encoding="utf-8")


def evaluate(adapter: TranslatorAdapter, pair: BilingualPair, prep: PreparedSet | None,
             out_dir=None, jobs: int = 1) -> float:
    """Replay preprocessing, translate through ``adapter``, BPE-decode and score.

    Hypotheses go to ``<out_dir>/hyp/<SRC>-<TGT>.txt`` and the score is
    upserted into ``<out_dir>/scores.txt``; ``out_dir`` defaults to the
    prepared set's run directory.
    """
    if len(pair.src) != len(pair.tgt):
        raise AlignmentError(len(pair.src), len(pair.tgt))
    test = _preprocess_pair(pair, prep, jobs)
    translator = _RecordingTranslator(_EncodedTranslator(adapter, prep))
    score = evaluate_model(translator, test)
    out = Path(out_dir) if out_dir is not None else (prep.run_dir if prep is not None else None)
    if out is not None:
        key = pair_key(*pair.langs)
        write_lines(_mkparent(out / "hyp" / f"{key}.txt"), translator.last)
        _record_score(out, key, score)
    return score


class _RecordingTranslator:
    def __init__(self, inner):
        self.inner = inner
        self.last: list[str] = []

    def translate(self, lines, src, tgt):
        self.last = self.inner.translate(lines, src, tgt)
        return self.last


def _mkparent(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def pivot_evaluate(src_adapter: TranslatorAdapter, tgt_adapter: TranslatorAdapter,
                   pair: BilingualPair, pivot_lang, src_prep: PreparedSet | None = None,
                   tgt_prep: PreparedSet | None = None, out_dir=None, jobs: int = 1) -> float:
    """Two-hop translation source -> pivot -> target, scored on the target side.

    The source is preprocessed with ``src_prep`` and the reference with
    ``tgt_prep``. Pivot text leaves hop 1 already preprocessed, so hop 2 only
    re-encodes it with ``tgt_prep``'s merges.
    """
    pivot = parse_language_tag(pivot_lang)
    src_lang, tgt_lang = pair.langs
    if len(pair.src) != len(pair.tgt):
        raise AlignmentError(len(pair.src), len(pair.tgt))
    src_lines = src_prep.preprocess(pair.src.lines, src_lang, jobs) if src_prep else list(pair.src.lines)
    if src_prep is not None:
        src_prep.check_maps()
    ref = tgt_prep.preprocess(pair.tgt.lines, tgt_lang, jobs) if tgt_prep else list(pair.tgt.lines)

    pivot_text = _EncodedTranslator(src_adapter, src_prep, hop=1).translate(src_lines, src_lang, pivot)
    hop2 = _RecordingTranslator(_EncodedTranslator(tgt_adapter, tgt_prep, hop=2))
    score = evaluate_model(_Chained(pivot_text, hop2, pivot),
                           BilingualPair(LineCorpus(src_lines, src_lang), LineCorpus(ref, tgt_lang)))
    out = out_dir if out_dir is not None else (tgt_prep.run_dir if tgt_prep is not None else None)
    if out is not None:
        out = Path(out)
        trio = f"{src_lang.code}-{pivot.code}-{tgt_lang.code}"
        write_lines(_mkparent(out / "pivot" / f"{trio}.pvt.txt"), pivot_text)
        write_lines(_mkparent(out / "hyp" / f"{trio}.txt"), hop2.last)
        _record_score(out, pair_key(src_lang, tgt_lang), score)
    return score


class _Chained:
    """Feeds precomputed pivot text into the second hop, ignoring the source lines."""

    def __init__(self, pivot_text, hop2, pivot):
        self.pivot_text, self.hop2, self.pivot = pivot_text, hop2, pivot

    def translate(self, lines, src, tgt):
        return self.hop2.translate(self.pivot_text, self.pivot, tgt)


def reference_lookup(pair: BilingualPair, prep: PreparedSet | None = None) -> LookupAdapter:
    """A Lookup adapter that answers every test source line with its reference."""
    if prep is None:
        return LookupAdapter.from_lines(pair.src.lines, pair.tgt.lines)
    return LookupAdapter.from_lines(prep.encode(pair.src.lines, pair.src.lang),
                                    prep.encode(pair.tgt.lines, pair.tgt.lang))


__all__ = [
    "DEFAULT_BPE_OPERATIONS", "LINE_STAGES", "Order", "PipelineConfig", "PreparedSet", "STAGE_ORDER",
    "build_pivot", "evaluate", "group_members", "line_stages", "pair_key", "pivot_evaluate",
    "prepare", "preprocess_line", "preprocess_lines", "reference_lookup", "run_hash",
]
