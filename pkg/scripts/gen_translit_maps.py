"""Regenerate the shipped ITRANS map files under src/indic_mnmt/data/maps/.

The Brahmi-derived Unicode blocks share one layout, so a single table of
block offsets covers every script; per-language overrides handle the
Dravidian long vowels and script-specific letters.

    python scripts/gen_translit_maps.py
"""

import unicodedata
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "indic_mnmt" / "data" / "maps"
VERSION = "v1"

BLOCKS = {
    "AS": 0x0980, "BN": 0x0980, "GU": 0x0A80, "HI": 0x0900, "MR": 0x0900,
    "KN": 0x0C80, "ML": 0x0D00, "OR": 0x0B00, "PA": 0x0A00, "TA": 0x0B80, "TE": 0x0C00,
}
DRAVIDIAN = {"KN", "ML", "TA", "TE"}

# offset -> (itrans, class), Devanagari-relative
COMMON = {
    0x01: (".N", "SIGN"), 0x02: ("M", "SIGN"), 0x03: ("H", "SIGN"),
    0x05: ("a", "IND_VOWEL"), 0x06: ("A", "IND_VOWEL"), 0x07: ("i", "IND_VOWEL"),
    0x08: ("I", "IND_VOWEL"), 0x09: ("u", "IND_VOWEL"), 0x0A: ("U", "IND_VOWEL"),
    0x0B: ("RRi", "IND_VOWEL"), 0x0C: ("LLi", "IND_VOWEL"), 0x10: ("ai", "IND_VOWEL"),
    0x14: ("au", "IND_VOWEL"), 0x60: ("RRI", "IND_VOWEL"), 0x61: ("LLI", "IND_VOWEL"),
    0x15: ("k", "CONSONANT"), 0x16: ("kh", "CONSONANT"), 0x17: ("g", "CONSONANT"),
    0x18: ("gh", "CONSONANT"), 0x19: ("~N", "CONSONANT"), 0x1A: ("ch", "CONSONANT"),
    0x1B: ("Ch", "CONSONANT"), 0x1C: ("j", "CONSONANT"), 0x1D: ("jh", "CONSONANT"),
    0x1E: ("~n", "CONSONANT"), 0x1F: ("T", "CONSONANT"), 0x20: ("Th", "CONSONANT"),
    0x21: ("D", "CONSONANT"), 0x22: ("Dh", "CONSONANT"), 0x23: ("N", "CONSONANT"),
    0x24: ("t", "CONSONANT"), 0x25: ("th", "CONSONANT"), 0x26: ("d", "CONSONANT"),
    0x27: ("dh", "CONSONANT"), 0x28: ("n", "CONSONANT"), 0x29: ("n2", "CONSONANT"),
    0x2A: ("p", "CONSONANT"), 0x2B: ("ph", "CONSONANT"), 0x2C: ("b", "CONSONANT"),
    0x2D: ("bh", "CONSONANT"), 0x2E: ("m", "CONSONANT"), 0x2F: ("y", "CONSONANT"),
    0x30: ("r", "CONSONANT"), 0x31: ("R", "CONSONANT"), 0x32: ("l", "CONSONANT"),
    0x33: ("L", "CONSONANT"), 0x34: ("zh", "CONSONANT"), 0x35: ("v", "CONSONANT"),
    0x36: ("sh", "CONSONANT"), 0x37: ("Sh", "CONSONANT"), 0x38: ("s", "CONSONANT"),
    0x39: ("h", "CONSONANT"),
    0x58: ("q", "CONSONANT"), 0x59: ("K", "CONSONANT"), 0x5A: ("G", "CONSONANT"),
    0x5B: ("z", "CONSONANT"), 0x5C: (".D", "CONSONANT"), 0x5D: (".Dh", "CONSONANT"),
    0x5E: ("f", "CONSONANT"), 0x5F: ("Y", "CONSONANT"),
    0x3C: (".", "SIGN"), 0x3D: (".a", "SIGN"), 0x50: ("OM", "SIGN"),
    0x3E: ("A", "MATRA"), 0x3F: ("i", "MATRA"), 0x40: ("I", "MATRA"),
    0x41: ("u", "MATRA"), 0x42: ("U", "MATRA"), 0x43: ("RRi", "MATRA"),
    0x44: ("RRI", "MATRA"), 0x48: ("ai", "MATRA"), 0x4C: ("au", "MATRA"),
    0x62: ("LLi", "MATRA"), 0x63: ("LLI", "MATRA"),
    0x4D: ("", "HALANT"),
}
for d in range(10):
    COMMON[0x66 + d] = (str(d), "DIGIT")

NON_DRAVIDIAN_EO = {
    0x0F: ("e", "IND_VOWEL"), 0x13: ("o", "IND_VOWEL"),
    0x47: ("e", "MATRA"), 0x4B: ("o", "MATRA"),
}
DRAVIDIAN_EO = {
    0x0E: ("e", "IND_VOWEL"), 0x0F: ("E", "IND_VOWEL"),
    0x12: ("o", "IND_VOWEL"), 0x13: ("O", "IND_VOWEL"),
    0x46: ("e", "MATRA"), 0x47: ("E", "MATRA"),
    0x4A: ("o", "MATRA"), 0x4B: ("O", "MATRA"),
}

# absolute codepoint overrides
EXTRA = {
    "AS": {0x09F0: ("r", "CONSONANT"), 0x09F1: ("w", "CONSONANT"), 0x09CE: ("t", "SIGN")},
    "BN": {0x09CE: ("t", "SIGN")},
    "OR": {0x0B71: ("w", "CONSONANT")},
    "PA": {0x0A70: ("M", "SIGN")},
    "ML": {0x0D7A: ("N", "SIGN"), 0x0D7B: ("n", "SIGN"), 0x0D7C: ("r", "SIGN"),
           0x0D7D: ("l", "SIGN"), 0x0D7E: ("L", "SIGN"), 0x0D7F: ("k", "SIGN"),
           0x0D54: ("m", "SIGN"), 0x0D55: ("y", "SIGN"), 0x0D56: ("zh", "SIGN")},
}
# the shared danda pair closes sentences in every script after normalization
DANDAS = {0x0964: ("|", "SIGN"), 0x0965: ("||", "SIGN")}


# the nukta row and the precomposed-nukta rows are only taken where the block
# really holds those letters (Malayalam and Telugu reuse the offsets)
NAME_CHECK = {
    0x3C: ("NUKTA",), 0x58: ("QA",), 0x59: ("KHHA",), 0x5A: ("GHHA",), 0x5B: ("ZA",),
    0x5C: ("DDDHA", "RRA"), 0x5D: ("RHA",), 0x5E: ("FA",), 0x5F: ("YYA",),
}


def assigned(cp: int, offset: int) -> bool:
    name = unicodedata.name(chr(cp), "")
    if not name:
        return False
    expect = NAME_CHECK.get(offset)
    return expect is None or any(name.endswith(e) for e in expect)


def build(lang: str) -> dict[int, tuple[str, str]]:
    base = BLOCKS[lang]
    table = dict(COMMON)
    table.update(DRAVIDIAN_EO if lang in DRAVIDIAN else NON_DRAVIDIAN_EO)
    entries = {base + off: v for off, v in table.items() if assigned(base + off, off)}
    entries.update(EXTRA.get(lang, {}))
    entries.update(DANDAS)
    return entries


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for lang in BLOCKS:
        entries = build(lang)
        lines = [f"#itrans-map {VERSION} lang={lang}"]
        for cp in sorted(entries):
            itrans, cls = entries[cp]
            lines.append(f"{cp:04X}\t{itrans}\t{cls}")
        (OUT / f"{lang.lower()}.map").write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"{lang}: {len(entries)} entries")


if __name__ == "__main__":
    main()
