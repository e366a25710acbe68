"""Language metadata, script identification and line-oriented corpus I/O."""

from __future__ import annotations

import enum
import hashlib
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class MnmtError(Exception):
    """Base class for all toolkit errors."""


class UnknownLanguage(MnmtError):
    pass


class EncodingError(MnmtError):
    def __init__(self, path, offset: int, line_no: int):
        self.path = path
        self.offset = offset
        self.line_no = line_no
        super().__init__(f"{path}: invalid UTF-8 at byte offset {offset} (line {line_no})")


class AlignmentError(MnmtError):
    def __init__(self, src_count: int, tgt_count: int):
        self.src_count = src_count
        self.tgt_count = tgt_count
        super().__init__(f"line counts differ: src={src_count} tgt={tgt_count}")


class EmptyCorpus(MnmtError):
    pass


class ConfigError(MnmtError):
    pass


class Script(enum.Enum):
    BENGALI = "Bengali"
    ROMAN = "Roman"
    GUJARATI = "Gujarati"
    DEVANAGARI = "Devanagari"
    KANNADA = "Kannada"
    MALAYALAM = "Malayalam"
    ODIA = "Odia"
    GURMUKHI = "Gurmukhi"
    TAMIL = "Tamil"
    TELUGU = "Telugu"
    THAI = "Thai"


class Group(enum.Enum):
    EI = "EI"
    DR = "DR"
    WI = "WI"
    EN = "EN"


# first codepoint of each script's 128-codepoint Unicode block
SCRIPT_BLOCK_START = {
    Script.DEVANAGARI: 0x0900,
    Script.BENGALI: 0x0980,
    Script.GURMUKHI: 0x0A00,
    Script.GUJARATI: 0x0A80,
    Script.ODIA: 0x0B00,
    Script.TAMIL: 0x0B80,
    Script.TELUGU: 0x0C00,
    Script.KANNADA: 0x0C80,
    Script.MALAYALAM: 0x0D00,
    Script.THAI: 0x0E00,
}

INDIC_SCRIPTS = tuple(s for s in SCRIPT_BLOCK_START if s is not Script.THAI)

_LANGS = {
    "AS": (Script.BENGALI, Group.EI),
    "BN": (Script.BENGALI, Group.EI),
    "EN": (Script.ROMAN, Group.EN),
    "GU": (Script.GUJARATI, Group.WI),
    "HI": (Script.DEVANAGARI, Group.WI),
    "KN": (Script.KANNADA, Group.DR),
    "ML": (Script.MALAYALAM, Group.DR),
    "MR": (Script.DEVANAGARI, Group.WI),
    "OR": (Script.ODIA, Group.EI),
    "PA": (Script.GURMUKHI, Group.WI),
    "TA": (Script.TAMIL, Group.DR),
    "TE": (Script.TELUGU, Group.DR),
    "TH": (Script.THAI, None),
}

LANGUAGE_CODES = tuple(_LANGS)


@dataclass(frozen=True)
class LanguageTag:
    code: str
    script: Script
    group: Group | None

    def __str__(self) -> str:
        return self.code

    @property
    def block(self) -> range | None:
        """Codepoint range of the language's script block (None for Roman)."""
        start = SCRIPT_BLOCK_START.get(self.script)
        return None if start is None else range(start, start + 0x80)


def parse_language_tag(code: str | LanguageTag) -> LanguageTag:
    if isinstance(code, LanguageTag):
        return code
    key = code.strip().upper()
    try:
        script, group = _LANGS[key]
    except KeyError:
        raise UnknownLanguage(code) from None
    return LanguageTag(key, script, group)


def script_of(ch: str) -> Script | None:
    """Script whose block contains ``ch``; Roman for ASCII letters."""
    cp = ord(ch)
    if cp < 0x80:
        return Script.ROMAN if ch.isalpha() else None
    for script, start in SCRIPT_BLOCK_START.items():
        if start <= cp < start + 0x80:
            return script
    return None


@dataclass(frozen=True)
class LineCorpus:
    lines: tuple[str, ...]
    lang: LanguageTag

    def __post_init__(self):
        if not isinstance(self.lines, tuple):
            object.__setattr__(self, "lines", tuple(self.lines))

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def map(self, fn) -> LineCorpus:
        return LineCorpus(tuple(fn(line) for line in self.lines), self.lang)

    def to_bytes(self) -> bytes:
        return serialize_lines(self.lines)

    def digest(self) -> str:
        return hashlib.sha256(self.to_bytes()).hexdigest()


@dataclass(frozen=True)
class BilingualPair:
    src: LineCorpus
    tgt: LineCorpus

    def __len__(self) -> int:
        return len(self.src)

    @property
    def langs(self) -> tuple[LanguageTag, LanguageTag]:
        return self.src.lang, self.tgt.lang

    def side(self, lang: LanguageTag | str) -> LineCorpus:
        code = parse_language_tag(lang).code
        if self.src.lang.code == code:
            return self.src
        if self.tgt.lang.code == code:
            return self.tgt
        raise KeyError(code)

    def swapped(self) -> BilingualPair:
        return BilingualPair(self.tgt, self.src)


def pair_corpora(src: LineCorpus, tgt: LineCorpus) -> BilingualPair:
    if len(src) != len(tgt):
        raise AlignmentError(len(src), len(tgt))
    return BilingualPair(src, tgt)


def decode_lines(data: bytes, path="<bytes>") -> list[str]:
    """Split UTF-8 bytes into lines; BOM stripped, CRLF accepted."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_no = data.count(b"\n", 0, e.start) + 1
        raise EncodingError(path, e.start, line_no) from None
    if text.startswith("\ufeff"):
        text = text[1:]
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return [line[:-1] if line.endswith("\r") else line for line in lines]


def serialize_lines(lines: Iterable[str]) -> bytes:
    return "".join(line + "\n" for line in lines).encode("utf-8")


def read_lines(path) -> list[str]:
    if str(path) == "-":
        return decode_lines(sys.stdin.buffer.read(), "<stdin>")
    with open(path, "rb") as f:
        return decode_lines(f.read(), path)


def write_lines(path, lines: Iterable[str]) -> None:
    data = serialize_lines(lines)
    if str(path) == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(data)


def read_line_corpus(path, lang: LanguageTag | str) -> LineCorpus:
    return LineCorpus(tuple(read_lines(path)), parse_language_tag(lang))


def write_line_corpus(path, corpus: LineCorpus) -> None:
    write_lines(path, corpus.lines)


def sha256_lines(lines: Sequence[str]) -> str:
    return hashlib.sha256(serialize_lines(lines)).hexdigest()


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


__all__ = [
    "AlignmentError", "BilingualPair", "ConfigError", "EmptyCorpus", "EncodingError",
    "Group", "INDIC_SCRIPTS", "LANGUAGE_CODES", "LanguageTag", "LineCorpus", "MnmtError",
    "SCRIPT_BLOCK_START", "Script", "UnknownLanguage", "decode_lines", "pair_corpora",
    "parse_language_tag", "read_line_corpus", "read_lines", "script_of", "serialize_lines",
    "sha256_file", "sha256_lines", "write_line_corpus", "write_lines",
]
