"""End-to-end toy run: prepare two sets around EN, then score GU->KN through the pivot.

Both hops are Lookup adapters fed with references, so the result is 100.00; swap in
a SubprocessAdapter to drive a real model.
"""

import sys
import tempfile
from pathlib import Path

from indic_mnmt.adapters import LookupAdapter
from indic_mnmt.core import BilingualPair
from indic_mnmt.pipeline import build_pivot, pivot_evaluate
from indic_mnmt.toy import toy_pair


def main(root: Path):
    gu_en, en_kn = toy_pair("GU", "EN", 300, seed=1), toy_pair("EN", "KN", 300, seed=1)
    src, tgt = build_pivot("EN", ["GU"], ["KN"], [gu_en], [en_kn], run_root=root / "run",
                           bpe_operations=400)
    print("src set:", src.run_dir)
    print("tgt set:", tgt.run_dir)

    # equal seeds give index-aligned GU/EN/KN test lines
    gu_test, kn_test = toy_pair("GU", "EN", 40, seed=9), toy_pair("EN", "KN", 40, seed=9)
    hop1 = LookupAdapter.from_lines(src.encode(gu_test.src.lines, "GU"), src.encode(gu_test.tgt.lines, "EN"))
    pivot = src.preprocess(gu_test.tgt.lines, "EN")
    hop2 = LookupAdapter.from_lines([tgt.encoder(l) for l in pivot], tgt.encode(kn_test.tgt.lines, "KN"))
    score = pivot_evaluate(hop1, hop2, BilingualPair(gu_test.src, kn_test.tgt), "EN", src, tgt, root / "eval")
    print(f"GU-EN-KN BLEU {score:.2f}")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        main(Path(sys.argv[1]))
    else:
        with tempfile.TemporaryDirectory() as d:
            main(Path(d))
