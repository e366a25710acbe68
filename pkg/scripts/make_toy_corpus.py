"""Write a synthetic parallel corpus in the layout `indic-mnmt prepare --data-dir` expects.

    python3 scripts/make_toy_corpus.py data --langs HI TA --lines 200
    indic-mnmt prepare --data-dir data --langs HI,TA --ops 300
"""

import argparse
from pathlib import Path

from indic_mnmt.core import write_lines
from indic_mnmt.toy import toy_pair


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out", type=Path)
    ap.add_argument("--common", default="EN")
    ap.add_argument("--langs", nargs="+", default=["HI", "TA"])
    ap.add_argument("--lines", type=int, default=200)
    ap.add_argument("--test-lines", type=int, default=50, help="held-out lines written as test.*")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    com = args.common.lower()
    for i, lang in enumerate(args.langs):
        pair = toy_pair(args.common, lang, args.lines + args.test_lines, seed=args.seed + i)
        d = args.out / f"{com}-{lang.lower()}"
        n = args.lines
        write_lines(d / f"train.{com}", pair.src.lines[:n])
        write_lines(d / f"train.{lang.lower()}", pair.tgt.lines[:n])
        write_lines(d / f"test.{com}", pair.src.lines[n:])
        write_lines(d / f"test.{lang.lower()}", pair.tgt.lines[n:])
        print(d)


if __name__ == "__main__":
    main()
