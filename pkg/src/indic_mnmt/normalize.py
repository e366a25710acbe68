"""Tokenization, rule-based normalization, English lowercasing and whitespace cleanup.

Normalization rules live in ``data/norm_rules.tsv``; see that file's header for
the row format. Rule applicability per language comes from the file's language
lists, not from code.
"""

from __future__ import annotations

import enum
import functools
import re as _re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import regex

from .core import LanguageTag, parse_language_tag


class Rule(enum.Enum):
    QUOTES = "quotes"
    ELLIPSIS = "ellipsis"
    FORMAT = "format"
    PURNA_VIRAMA = "purna_virama"
    VISARGA = "visarga"
    VOWEL_COMBINE = "vowel_combine"
    NUKTA_DECOMPOSE = "nukta_decompose"
    LETTER_FORMS = "letter_forms"
    CHILLU = "chillu"


RULE_ORDER = tuple(Rule)

ZWJ = "\u200d"
DANDA = "\u0964"
DOUBLE_DANDA = "\u0965"

HALANTS = frozenset("\u094d\u09cd\u0a4d\u0acd\u0b4d\u0bcd\u0c4d\u0ccd\u0d4d")
NUKTAS = frozenset("\u093c\u09bc\u0a3c\u0abc\u0b3c\u0cbc")


@dataclass(frozen=True)
class RuleRow:
    src: str
    dst: str
    rule: Rule
    langs: frozenset[str]


_ESCAPE = _re.compile(r"\\u([0-9a-fA-F]{4})")


def _unescape(s: str) -> str:
    return _ESCAPE.sub(lambda m: chr(int(m.group(1), 16)), s)


def load_rule_table(path=None) -> tuple[RuleRow, ...]:
    if path is None:
        text = resources.files("indic_mnmt").joinpath("data/norm_rules.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    rows = []
    for n, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.startswith("#"):
            continue
        fields = raw.split("\t")
        if len(fields) != 4:
            raise ValueError(f"rule file line {n}: expected 4 tab-separated fields")
        src_hex, dst, rule_id, langs = fields
        src = "".join(chr(int(h, 16)) for h in src_hex.split())
        rows.append(RuleRow(src, _unescape(dst), Rule(rule_id),
                            frozenset(c.strip().upper() for c in langs.split(","))))
    return tuple(rows)


@functools.lru_cache(maxsize=None)
def _default_table() -> tuple[RuleRow, ...]:
    return load_rule_table()


@dataclass(frozen=True)
class NormalizationRuleSet:
    rules: tuple[Rule, ...]
    lang: LanguageTag

    def __contains__(self, rule: Rule) -> bool:
        return rule in self.rules


def rules_for(lang: LanguageTag | str, table=None) -> NormalizationRuleSet:
    """Every rule whose table rows name ``lang``, in canonical order."""
    lang = parse_language_tag(lang)
    table = _default_table() if table is None else table
    present = {row.rule for row in table if lang.code in row.langs}
    return NormalizationRuleSet(tuple(r for r in RULE_ORDER if r in present), lang)


def applicability_matrix(table=None) -> dict[Rule, frozenset[str]]:
    table = _default_table() if table is None else table
    out: dict[Rule, set[str]] = {r: set() for r in RULE_ORDER}
    for row in table:
        out[row.rule] |= row.langs
    return {r: frozenset(v) for r, v in out.items()}


# -- compiled pipeline -------------------------------------------------------
#
# A rule set compiles to a list of callables. Consecutive single-codepoint
# mappings are fused into one character-class substitution; fusing composes
# the mappings so the result equals applying them one after another.


def _compose(first: dict[int, str], second: dict[int, str]) -> dict[int, str]:
    out = {cp: "".join(second.get(ord(c), c) for c in dst) for cp, dst in first.items()}
    for cp, dst in second.items():
        out.setdefault(cp, dst)
    return out


def _block_class(lang: LanguageTag) -> str:
    block = lang.block
    return f"\\u{block.start:04x}-\\u{block.stop - 1:04x}"


def _compile(ruleset: NormalizationRuleSet, table) -> list:
    lang = ruleset.lang
    steps: list = []
    pending: dict[int, str] | None = None

    def flush():
        nonlocal pending
        if pending:
            table = {chr(cp): dst for cp, dst in pending.items()}
            pat = _re.compile("[" + "".join(_re.escape(c) for c in sorted(table)) + "]")
            steps.append(lambda s, p=pat, t=table: p.sub(lambda m: t[m.group()], s))
        pending = None

    chillu_bases = ""
    if Rule.CHILLU in ruleset:
        chillu_bases = "".join(row.src[0] for row in table
                               if row.rule is Rule.CHILLU and lang.code in row.langs)

    for rule in ruleset.rules:
        rows = [row for row in table if row.rule is rule and lang.code in row.langs]
        if rule is Rule.VISARGA:
            flush()
            for row in rows:
                # colons directly after a script codepoint (a chillu-protected ZWJ is skipped)
                pat = regex.compile(f"(?<=[{_block_class(lang)}]{ZWJ}?){regex.escape(row.src)}+")
                steps.append(lambda s, p=pat, v=row.dst: p.sub(lambda m: v * len(m.group()), s)
                             if ":" in s else s)
            continue
        singles = {}
        for row in rows:
            if len(row.src) == 1 and not (rule is Rule.FORMAT and row.src == ZWJ and chillu_bases):
                singles[ord(row.src)] = row.dst
            else:
                if singles:
                    pending = singles if pending is None else _compose(pending, singles)
                    singles = {}
                flush()
                if rule is Rule.FORMAT and row.src == ZWJ:
                    pat = regex.compile(f"(?<![{chillu_bases}]\u0d4d){ZWJ}")
                    steps.append(lambda s, p=pat: p.sub("", s) if ZWJ in s else s)
                else:
                    steps.append(lambda s, a=row.src, b=row.dst: s.replace(a, b))
        if singles:
            pending = singles if pending is None else _compose(pending, singles)
    flush()
    return steps


@functools.lru_cache(maxsize=256)
def _compiled(ruleset: NormalizationRuleSet) -> tuple:
    return tuple(_compile(ruleset, _default_table()))


def normalize_line(line: str, rules: NormalizationRuleSet | LanguageTag | str) -> str:
    if not isinstance(rules, NormalizationRuleSet):
        rules = rules_for(rules)
    for step in _compiled(rules):
        line = step(line)
    return line


def lowercase_english(line: str) -> str:
    """Fold ASCII A-Z only; every other codepoint is left alone."""
    return line.translate(_ASCII_LOWER)


_ASCII_LOWER = str.maketrans("ABCDEFGHIJKLMNOPQRSTUVWXYZ", "abcdefghijklmnopqrstuvwxyz")


def minimize_whitespace(line: str) -> str:
    return " ".join(line.split())


# -- tokenizer ---------------------------------------------------------------

_W = r"\p{L}\p{M}\p{N}\u200c\u200d"
_TOKEN = regex.compile(
    r"\.{2,}"
    # word; internal hyphens, apostrophes and periods stay, commas only between digits
    rf"|[{_W}]+(?:(?:[-'.]|(?<=\p{{N}}),(?=\p{{N}}))[{_W}]+)*(?:\.(?!\.))?"
    # any other character keeps its trailing combining marks
    r"|\S\p{M}*"
)
_MARK_AFTER_SPACE = regex.compile(r" (?=\p{M})")

NONBREAKING_PREFIXES = frozenset("""
mr mrs ms dr prof sr jr st vs etc no nos art fig figs vol vols pp ed eds
rev gen col lt sgt capt hon inc ltd co corp dept est govt jan feb mar apr
jun jul aug sep sept oct nov dec i.e e.g viz approx
""".split())


def _keeps_final_period(stem: str) -> bool:
    return stem.lower() in NONBREAKING_PREFIXES or "." in stem or (len(stem) == 1 and stem.isalpha())


def _tokenize_chunk(chunk: str, is_last: bool) -> str:
    toks = _TOKEN.findall(chunk)
    if "." in chunk:
        out = []
        last = len(toks) - 1
        for i, t in enumerate(toks):
            if (len(t) > 1 and t[-1] == "." and t[0] != "."
                    and ((is_last and i == last) or not _keeps_final_period(t[:-1]))):
                out.append(t[:-1])
                out.append(".")
            else:
                out.append(t)
        toks = out
    return _MARK_AFTER_SPACE.sub("", " ".join(toks))


_CHUNK_CACHE: dict[tuple[str, bool], str] = {}
_CHUNK_CACHE_MAX = 1 << 18


def tokenize(line: str, lang: LanguageTag | str | None = None) -> str:
    """Moses-style punctuation splitting that never detaches combining marks.

    Halants, nuktas and vowel signs count as word characters, so Indic
    clusters survive intact. A whitespace chunk that starts with a combining
    mark is glued back onto the chunk before it. A word-final period splits off unless
    the word is a known abbreviation or dotted form; on the last token it
    always splits.

    Tokens never span whitespace, so each whitespace chunk is tokenized on its
    own and memoized.
    """
    chunks = []
    for c in line.split():
        if chunks and _starts_with_mark(c):
            chunks[-1] += c
        else:
            chunks.append(c)
    cache = _CHUNK_CACHE
    if len(cache) > _CHUNK_CACHE_MAX:
        cache.clear()
    last = len(chunks) - 1
    out = []
    for i, c in enumerate(chunks):
        key = (c, i == last)
        r = cache.get(key)
        if r is None:
            r = cache[key] = _tokenize_chunk(c, i == last)
        out.append(r)
    return " ".join(out)


_MARK_START = regex.compile(r"\p{M}")


def _starts_with_mark(s: str) -> bool:
    return s[:1] > "\u02ff" and _MARK_START.match(s) is not None


__all__ = [
    "HALANTS", "NUKTAS", "NormalizationRuleSet", "Rule", "RULE_ORDER", "RuleRow",
    "applicability_matrix", "load_rule_table", "lowercase_english", "minimize_whitespace",
    "normalize_line", "rules_for", "tokenize",
]
