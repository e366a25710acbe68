import regex
import pytest
from hypothesis import given, strategies as st

from indic_mnmt.core import parse_language_tag
from indic_mnmt.normalize import (
    Rule, applicability_matrix, lowercase_english, minimize_whitespace, normalize_line, rules_for,
    tokenize,
)
from oracles import ALL12, RULE_LANGS

HIGHWAYS_IN = ("Highways, airways, railways and waterways, all these have been integrated "
               "as per the requirement of each other.")
HIGHWAYS_OUT = ("Highways , airways , railways and waterways , all these have been integrated "
                "as per the requirement of each other .")


def block(lang: str) -> int:
    return parse_language_tag(lang).block.start


def letter(lang: str) -> str:
    return "a" if lang == "EN" else chr(block(lang) + 0x15)


# -- rule table ---------------------------------------------------------------

VOWEL_COMBINE_ON = {
    "AS": ("\u09c7\u09be", "\u09cb"), "BN": ("\u09c7\u09d7", "\u09cc"),
    "KN": ("\u0cc6\u0cc2", "\u0cca"), "OR": ("\u0b47\u0b3e", "\u0b4b"),
    "PA": ("\u0a05\u0a3e", "\u0a06"), "TA": ("\u0bc6\u0bbe", "\u0bca"),
    "TE": ("\u0c46\u0c56", "\u0c48"),
}
NUKTA_ON = {
    "HI": ("\u0958", "\u0915\u093c"), "MR": ("\u095b", "\u091c\u093c"),
    "AS": ("\u09dc", "\u09a1\u09bc"), "BN": ("\u09df", "\u09af\u09bc"),
    "OR": ("\u0b5d", "\u0b22\u0b3c"),
}
LETTER_FORM_ON = {"HI": ("\u0972", "\u090f"), "MR": ("\u0972", "\u090f"),
                  "OR": ("\u0b09\u0b57", "\u0b0a")}


def probe(rule: str, lang: str) -> tuple[str, str, str]:
    """(input, expected when the rule applies, expected when it does not)."""
    if rule == "quotes":
        return "“x” ‘y’ a–b", "\"x\" 'y' a-b", "“x” ‘y’ a–b"
    if rule == "ellipsis":
        return "x…", "x...", "x…"
    if rule == "format":
        return "x\u00ady\u2060z\ufeff", "xyz", "x\u00ady\u2060z\ufeff"
    if rule == "purna_virama":
        return letter(lang) + "|", letter(lang) + "।", letter(lang) + "|"
    if rule == "visarga":
        vis = "" if lang == "EN" else chr(block(lang) + 0x03)
        return letter(lang) + ":", letter(lang) + vis, letter(lang) + ":"
    if lang == "EN":
        return "plain", "plain", "plain"
    b = block(lang)
    if rule == "vowel_combine":
        src, dst = VOWEL_COMBINE_ON.get(lang, (chr(b + 0x47) + chr(b + 0x3E), None))
        return src, dst, src
    if rule == "nukta_decompose":
        src, dst = NUKTA_ON.get(lang, (chr(b + 0x59), None))
        return src, dst, src
    if rule == "letter_forms":
        src, dst = LETTER_FORM_ON.get(lang, (chr(b + 0x72), None))
        return src, dst, src
    if rule == "chillu":
        src = chr(b + 0x23) + chr(b + 0x4D) + "\u200d"
        return src, "\u0d7a", src[:-1]
    raise AssertionError(rule)


def test_rule_order_follows_table():
    assert [r.value for r in Rule] == list(RULE_LANGS)


@pytest.mark.parametrize("rule", list(RULE_LANGS))
def test_applicability_matrix_rows(rule):
    assert applicability_matrix()[Rule(rule)] == frozenset(RULE_LANGS[rule])


@pytest.mark.parametrize("lang", ALL12)
@pytest.mark.parametrize("rule", list(RULE_LANGS))
def test_rule_cell_behaviour(rule, lang):
    src, on, off = probe(rule, lang)
    expected = on if lang in RULE_LANGS[rule] else off
    assert normalize_line(src, lang) == expected


def test_ruleset_per_language():
    assert Rule.CHILLU in rules_for("ML") and Rule.CHILLU not in rules_for("TA")
    assert Rule.VISARGA not in rules_for("PA")
    assert [r for r in rules_for("EN").rules] == [Rule.QUOTES, Rule.ELLIPSIS, Rule.FORMAT]


def test_colon_only_after_script_letter():
    assert normalize_line("राम: सीता", "HI") == "रामः सीता"
    assert normalize_line("राम : सीता", "HI") == "राम : सीता"
    assert normalize_line("time: 5", "HI") == "time: 5"
    # a Bengali letter is not "in the script" for Hindi
    assert normalize_line("ক:", "HI") == "ক:"


def test_bengali_currency_four_is_a_danda():
    assert normalize_line("শেষ৷", "BN") == "শেষ।"


def test_script_dandas_map_to_shared_danda():
    assert normalize_line("ਖਤਮ੤", "PA") == "ਖਤਮ।"


def test_nukta_decomposition_precedes_chillu():
    # old chillu encoding survives format-character removal and is recomposed
    assert normalize_line("\u0d05\u0d35\u0d28\u0d4d\u200d", "ML") == "\u0d05\u0d35\u0d7b"
    # a ZWJ elsewhere is still removed
    assert normalize_line("\u0d15\u200d\u0d15", "ML") == "കക"


def test_lowercase_is_ascii_only():
    assert lowercase_english("ÀB Ç dE") == "Àb Ç de"
    assert lowercase_english("भारत INDIA") == "भारत india"


def test_minimize_whitespace():
    assert minimize_whitespace("  a \t b  c  ") == "a b c"


# -- tokenizer ----------------------------------------------------------------


def test_highways_sentence():
    assert tokenize(HIGHWAYS_IN, "EN") == HIGHWAYS_OUT


@pytest.mark.parametrize("line,expected", [
    ("क्या?", "क्या ?"),
    ("Mr. Smith paid $3.50, i.e. 1,000 rs...wow!", "Mr. Smith paid $ 3.50 , i.e. 1,000 rs ... wow !"),
    ("U.S.A.", "U.S.A ."),
    ("(हाँ)", "( हाँ )"),
    ("\"quoted\"", "\" quoted \""),
    ("well-known", "well-known"),
    ("भारत।", "भारत ।"),
    ("ক্ষ্য়,", "ক্ষ্য় ,"),
    ("?्क", "?् क"),
    ("क ्ख", "क्ख"),
])
def test_tokenize_examples(line, expected):
    assert tokenize(line) == expected


_PUNCT = ",!?;:()\""


def naive_tokens(words: list[tuple[str, str, str]]) -> str:
    """Reference splitter for word+punctuation lines: peel punctuation off both ends."""
    out = []
    for pre, w, post in words:
        out += list(pre) + [w] + list(post)
    return " ".join(out)


@given(st.lists(st.tuples(st.text(_PUNCT, max_size=2),
                          st.text("abcdefghijklmnopqrstuvwxyzकखगमनािीुे्", min_size=1, max_size=8)
                          .filter(lambda w: regex.match(r"\p{L}", w)),
                          st.text(_PUNCT, max_size=2)), min_size=1, max_size=8))
def test_tokenize_matches_naive_splitter(words):
    line = " ".join(p + w + q for p, w, q in words)
    assert tokenize(line) == naive_tokens(words)


MIXED = ("abcXYZ019.,;:!?'\"-()[]…“”‘’|/ \t"
         "कखगज़ड़नमयरलवसहअआइउएािीुूेैोौंः़्।॥०१"
         "কখগড়য়াি্ো।৷"
         "கதநமிீு்ொ"
         "കനണരല്\u200dൺൻ"
         "ਕਖਗਾਿੰ੍"
         "\u200c\u200d\u00ad\ufeff\u2060")


@given(st.text(MIXED, max_size=60))
def test_tokenize_idempotent(line):
    once = tokenize(line)
    assert tokenize(once) == once


@given(st.text(MIXED, max_size=60))
def test_tokenize_keeps_characters(line):
    assert "".join(tokenize(line).split()) == "".join(line.split())


@given(st.text(MIXED, max_size=60))
def test_tokenize_never_isolates_marks(line):
    toks = tokenize(line).split()
    for t in toks[1:]:
        assert not regex.match(r"\p{M}", t)


@given(st.text(MIXED, max_size=60), st.sampled_from(ALL12))
def test_normalize_idempotent(line, lang):
    once = normalize_line(line, lang)
    assert normalize_line(once, lang) == once
