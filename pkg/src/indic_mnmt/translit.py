"""English-letter masking and per-codepoint ITRANS transliteration.

English letters are shifted by ``MASK_OFFSET`` into the Thai block so they
survive transliteration as a visibly foreign script; Indic codepoints are
replaced from a per-language map. Consonants carry the inherent vowel "a"
unless a vowel sign or halant follows (nuktas in between are skipped over).
"""

from __future__ import annotations

import hashlib
import os
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .core import BilingualPair, LanguageTag, LineCorpus, MnmtError, parse_language_tag

MASK_OFFSET = 0x0DC0
MAP_DIR_ENV = "MNMT_MAP_DIR"
MAP_CLASSES = frozenset({"IND_VOWEL", "MATRA", "CONSONANT", "HALANT", "DIGIT", "SIGN"})
INHERENT_VOWEL = "a"


class MissingMap(MnmtError):
    def __init__(self, lang):
        self.lang = lang
        super().__init__(f"no transliteration map for {lang}")


class MapFormatError(MnmtError):
    pass


_MASK = {c: chr(c + MASK_OFFSET) for c in range(ord("A"), ord("Z") + 1)}
_MASK.update({c: chr(c + MASK_OFFSET) for c in range(ord("a"), ord("z") + 1)})
_UNMASK = {ord(v): chr(k) for k, v in _MASK.items()}


def mask_english(line: str) -> str:
    return line.translate(_MASK)


def unmask_english(line: str) -> str:
    return line.translate(_UNMASK)


@dataclass(frozen=True)
class TransliterationMap:
    lang: LanguageTag
    entries: Mapping[str, str]
    classes: Mapping[str, str]
    version: str = "v1"
    digest: str = ""
    consonants: frozenset = field(init=False, repr=False)
    vowel_killers: frozenset = field(init=False, repr=False)
    nuktas: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        cls = self.classes
        object.__setattr__(self, "consonants", frozenset(c for c, k in cls.items() if k == "CONSONANT"))
        object.__setattr__(self, "vowel_killers",
                           frozenset(c for c, k in cls.items() if k in ("MATRA", "HALANT")))
        object.__setattr__(self, "nuktas", frozenset(c for c, v in self.entries.items()
                                                     if v == "." and cls[c] == "SIGN"))

    def __contains__(self, ch: str) -> bool:
        return ch in self.entries

    @classmethod
    def identity(cls, lang: LanguageTag | str) -> TransliterationMap:
        """Mask-only map (used for English sides)."""
        return cls(parse_language_tag(lang), {}, {}, "identity", "")


def parse_map(text: str, source="<map>") -> TransliterationMap:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#itrans-map "):
        raise MapFormatError(f"{source}: missing '#itrans-map' header")
    header = dict(kv.split("=", 1) for kv in lines[0].split()[2:] if "=" in kv)
    version = lines[0].split()[1]
    lang = parse_language_tag(header.get("lang", ""))
    entries, classes = {}, {}
    for n, raw in enumerate(lines[1:], 2):
        if not raw or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 3:
            raise MapFormatError(f"{source}:{n}: expected 3 tab-separated fields")
        hex_cp, itrans, cls = parts
        if cls not in MAP_CLASSES:
            raise MapFormatError(f"{source}:{n}: unknown class {cls!r}")
        if not itrans.isascii() or (not itrans and cls != "HALANT") or len(itrans) > 4:
            raise MapFormatError(f"{source}:{n}: bad ITRANS value {itrans!r}")
        ch = chr(int(hex_cp, 16))
        entries[ch] = itrans
        classes[ch] = cls
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return TransliterationMap(lang, entries, classes, version, digest)


def map_dir() -> Path | None:
    env = os.environ.get(MAP_DIR_ENV)
    return Path(env) if env else None


def load_map(lang: LanguageTag | str, directory=None) -> TransliterationMap:
    lang = parse_language_tag(lang)
    if lang.code == "EN":
        return TransliterationMap.identity(lang)
    name = f"{lang.code.lower()}.map"
    directory = directory if directory is not None else map_dir()
    if directory is not None:
        path = Path(directory) / name
        if not path.exists():
            raise MissingMap(lang.code)
        return parse_map(path.read_text("utf-8"), path)
    res = resources.files("indic_mnmt").joinpath(f"data/maps/{name}")
    if not res.is_file():
        raise MissingMap(lang.code)
    return parse_map(res.read_text("utf-8"), name)


def load_maps(langs: Sequence[LanguageTag | str], directory=None) -> dict[str, TransliterationMap]:
    return {m.lang.code: m for m in (load_map(lang, directory) for lang in langs)}


class UnmappedReport(Counter):
    """Counts of non-ASCII codepoints that had no map entry."""

    def format(self) -> str:
        rows = sorted(self.items(), key=lambda kv: (-kv[1], kv[0]))
        return "".join(f"{ord(ch):04X}\t{n}\n" for ch, n in rows)


def transliterate_line(line: str, tmap: TransliterationMap,
                       report: UnmappedReport | None = None) -> str:
    entries = tmap.entries
    consonants = tmap.consonants
    killers = tmap.vowel_killers
    nuktas = tmap.nuktas
    out = []
    pending = False  # inherent vowel owed by the last consonant
    for ch in line:
        if pending and ch not in nuktas:
            if ch not in killers:
                out.append(INHERENT_VOWEL)
            pending = False
        if ch.isascii():
            out.append(_MASK.get(ord(ch), ch))
            continue
        s = entries.get(ch)
        if s is None:
            out.append(ch)
            if report is not None:
                report[ch] += 1
            continue
        out.append(s)
        if ch in consonants:
            pending = True
    if pending:
        out.append(INHERENT_VOWEL)
    return "".join(out)


def transliterate_corpus(corpus: LineCorpus, tmap: TransliterationMap,
                         report: UnmappedReport | None = None) -> LineCorpus:
    return LineCorpus(tuple(transliterate_line(l, tmap, report) for l in corpus.lines), corpus.lang)


def transliterate_pair_set(pairs: Sequence[BilingualPair],
                           map_by_lang: Mapping[str, TransliterationMap],
                           report: UnmappedReport | None = None) -> list[BilingualPair]:
    out = []
    for pair in pairs:
        sides = []
        for side in (pair.src, pair.tgt):
            tmap = map_by_lang.get(side.lang.code)
            if tmap is None:
                raise MissingMap(side.lang.code)
            sides.append(transliterate_corpus(side, tmap, report))
        out.append(BilingualPair(*sides))
    return out


__all__ = [
    "MASK_OFFSET", "MAP_DIR_ENV", "MapFormatError", "MissingMap", "TransliterationMap",
    "UnmappedReport", "load_map", "load_maps", "mask_english", "parse_map",
    "transliterate_corpus", "transliterate_line", "transliterate_pair_set", "unmask_english",
]
