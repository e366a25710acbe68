"""``indic-mnmt`` command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 adapter error.
A ``-`` input or output path means stdin or stdout.
"""

from __future__ import annotations

import argparse
import sys
from functools import partial
from multiprocessing import Pool
from pathlib import Path

from . import __version__
from .adapters import AdapterError, DEFAULT_TIMEOUT, DirectoryAdapter, IdentityAdapter, SubprocessAdapter
from .core import (
    BilingualPair, Group, LineCorpus, MnmtError, parse_language_tag, read_line_corpus, read_lines,
    write_lines,
)
from .metrics import DEFAULT_CTTR_SAMPLE, bleu_report, bleu_score, corpus_bleu_stats, cttr, format_score
from .normalize import lowercase_english, minimize_whitespace, normalize_line, rules_for, tokenize
from .pipeline import (
    DEFAULT_BPE_OPERATIONS, Order, PipelineConfig, PreparedSet, evaluate, group_members,
    pivot_evaluate, prepare,
)
from .subword import (
    BinarizedCorpus, BpeEncoder, BpeModel, Vocabulary, binarize_lines, bpe_decode, bpe_learn,
    build_dictionary, debinarize,
)
from .translit import UnmappedReport, load_map, mask_english, transliterate_line, unmask_english

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ADAPTER = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- helpers -------------------------------------------------------------------


def _lang(value: str):
    try:
        return parse_language_tag(value)
    except MnmtError:
        raise argparse.ArgumentTypeError(f"unknown language {value!r}") from None


def _positive(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _write_stdout_bytes(data: bytes) -> None:
    sys.stdout.flush()
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


def _map_lines(fn, lines, jobs: int):
    if jobs <= 1 or len(lines) < 2:
        return [fn(l) for l in lines]
    with Pool(jobs) as pool:
        return pool.map(fn, lines, chunksize=max(1, len(lines) // (jobs * 4)))


def _tokenize(code, line):
    return tokenize(line, code)


def _normalize(code, squeeze, line):
    out = normalize_line(line, rules_for(code))
    return minimize_whitespace(out) if squeeze else out


def _translit(code, line):
    return transliterate_line(line, load_map(code))


def _adapter(args, cmd_attr="adapter_cmd"):
    cmd = getattr(args, cmd_attr, None)
    if cmd:
        return SubprocessAdapter(cmd, args.timeout)
    if getattr(args, "hyp_dir", None):
        return DirectoryAdapter(args.hyp_dir)
    return IdentityAdapter()


# -- subcommands -----------------------------------------------------------------


def cmd_tokenize(args):
    lines = read_lines(args.input)
    write_lines(args.output, _map_lines(partial(_tokenize, args.lang.code), lines, args.jobs))


def cmd_normalize(args):
    lines = read_lines(args.input)
    fn = partial(_normalize, args.lang.code, not args.keep_spaces)
    write_lines(args.output, _map_lines(fn, lines, args.jobs))


def cmd_lowercase(args):
    write_lines(args.output, [lowercase_english(l) for l in read_lines(args.input)])


def cmd_translit(args):
    tmap = load_map(args.lang)
    lines = read_lines(args.input)
    if args.report:
        report = UnmappedReport()
        out = [transliterate_line(l, tmap, report) for l in lines]
        Path(args.report).write_text(report.format(), encoding="utf-8")
    else:
        out = _map_lines(partial(_translit, args.lang.code), lines, args.jobs)
    write_lines(args.output, out)


def cmd_mask(args):
    write_lines(args.output, [mask_english(l) for l in read_lines(args.input)])


def cmd_unmask(args):
    write_lines(args.output, [unmask_english(l) for l in read_lines(args.input)])


def cmd_bpe_learn(args):
    lines = [l for path in args.input for l in read_lines(path)]
    model = bpe_learn(lines, args.ops, args.jobs)
    write_lines(args.output, model.to_text().splitlines())


def cmd_bpe_apply(args):
    enc = BpeEncoder(BpeModel.load(args.merges))
    write_lines(args.output, [enc(l) for l in read_lines(args.input)])


def cmd_bpe_decode(args):
    write_lines(args.output, [bpe_decode(l) for l in read_lines(args.input)])


def cmd_dict(args):
    lines = [l for path in args.input for l in read_lines(path)]
    write_lines(args.output, build_dictionary(lines).to_bytes().decode("utf-8").splitlines())


def cmd_binarize(args):
    vocab = Vocabulary.load(args.dict)
    data = binarize_lines(read_lines(args.input), vocab).to_bytes()
    if args.output == "-":
        _write_stdout_bytes(data)
    else:
        Path(args.output).write_bytes(data)


def cmd_debinarize(args):
    vocab = Vocabulary.load(args.dict)
    raw = sys.stdin.buffer.read() if args.input == "-" else Path(args.input).read_bytes()
    write_lines(args.output, debinarize(BinarizedCorpus.from_bytes(raw), vocab, not args.no_check))


def cmd_cttr(args):
    if not args.full and args.seed is None:
        raise UsageError("--seed is required unless --full is given")
    report = cttr(read_lines(args.input), None if args.full else args.sample, args.seed)
    sys.stdout.write(report.format())


def cmd_bleu(args):
    stats = corpus_bleu_stats(read_lines(args.hyp), read_lines(args.ref))
    if args.report:
        sys.stdout.write(bleu_report(stats, args.smooth))
    else:
        print(format_score(bleu_score(stats, smooth_eps=args.smooth)))


def _group_langs(args):
    if args.langs:
        return tuple(parse_language_tag(c) for c in args.langs.split(","))
    if args.group:
        return tuple(group_members(args.group))
    raise UsageError("give --langs or --group")


def cmd_prepare(args):
    langs = _group_langs(args)
    com = args.common
    pairs = []
    for lang in langs:
        d = Path(args.data_dir) / f"{com.code.lower()}-{lang.code.lower()}"
        pairs.append(BilingualPair(read_line_corpus(d / f"train.{com.code.lower()}", com),
                                   read_line_corpus(d / f"train.{lang.code.lower()}", lang)))
    config = PipelineConfig(com, langs, Order(args.order), args.translit, args.ops,
                            Group(args.group) if args.group else None)
    prep = prepare(config, pairs, args.run_dir, args.jobs, args.force)
    print(prep.run_dir)


def _test_pair(args):
    return BilingualPair(read_line_corpus(args.src_file, args.src),
                         read_line_corpus(args.ref_file, args.tgt))


def cmd_evaluate(args):
    prep = PreparedSet.load(args.run_dir)
    score = evaluate(_adapter(args), _test_pair(args), prep, args.out_dir, args.jobs)
    print(format_score(score))


def cmd_pivot_eval(args):
    src_prep = PreparedSet.load(args.src_run_dir) if args.src_run_dir else None
    tgt_prep = PreparedSet.load(args.tgt_run_dir) if args.tgt_run_dir else None
    hop1 = _adapter(args)
    hop2 = _adapter(args, "adapter_cmd2") if args.adapter_cmd2 else hop1
    score = pivot_evaluate(hop1, hop2, _test_pair(args), args.pivot, src_prep, tgt_prep,
                           args.out_dir, args.jobs)
    print(format_score(score))


def cmd_groups(args):
    print(" ".join(l.code for l in group_members(args.group)))


# -- parser ------------------------------------------------------------------------


def _io(p, multi_input=False):
    if multi_input:
        p.add_argument("input", nargs="*", default=["-"], help="input files ('-' = stdin, the default)")
    else:
        p.add_argument("input", nargs="?", default="-", help="input file ('-' = stdin, the default)")
    p.add_argument("-o", "--output", default="-", help="output file ('-' = stdout, the default)")


def _jobs(p):
    p.add_argument("--jobs", type=_positive, default=1, help="worker processes for line-parallel work")


def _lang_flag(p, required=True):
    p.add_argument("--lang", type=_lang, required=required, help="language code, e.g. HI or EN")


def _adapter_flags(p, second=False):
    p.add_argument("--adapter-cmd", help="translator command; receives --src/--tgt, lines on stdin")
    if second:
        p.add_argument("--adapter-cmd2", help="command for the second hop (default: --adapter-cmd)")
    p.add_argument("--hyp-dir", help="directory of precomputed hypotheses named SRC-TGT.txt")
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT,
                   help="seconds allowed per adapter call (default 600)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="indic-mnmt", description="Indic multilingual NMT corpus toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tokenize", help="split punctuation from words")
    _lang_flag(p); _io(p); _jobs(p)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("normalize", help="apply the script normalization rules")
    _lang_flag(p); _io(p); _jobs(p)
    p.add_argument("--keep-spaces", action="store_true",
                   help="do not collapse whitespace runs left behind by deleted characters")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("lowercase", help="lowercase ASCII letters")
    _io(p)
    p.set_defaults(func=cmd_lowercase)

    p = sub.add_parser("translit", help="transliterate to ITRANS with English masking")
    _lang_flag(p); _io(p); _jobs(p)
    p.add_argument("--report", help="write unmapped codepoint counts (HEX<TAB>COUNT) here")
    p.set_defaults(func=cmd_translit)

    p = sub.add_parser("mask", help="shift English letters into the Thai block")
    _io(p)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("unmask", help="undo mask")
    _io(p)
    p.set_defaults(func=cmd_unmask)

    p = sub.add_parser("bpe-learn", help="learn BPE merges from one or more files")
    _io(p, multi_input=True); _jobs(p)
    p.add_argument("--ops", type=_positive, default=DEFAULT_BPE_OPERATIONS,
                   help="number of merge operations (default 48000)")
    p.set_defaults(func=cmd_bpe_learn)

    p = sub.add_parser("bpe-apply", help="segment text with learned merges")
    _io(p)
    p.add_argument("--merges", required=True, help="merges file from bpe-learn")
    p.set_defaults(func=cmd_bpe_apply)

    p = sub.add_parser("bpe-decode", help="join @@-marked subwords")
    _io(p)
    p.set_defaults(func=cmd_bpe_decode)

    p = sub.add_parser("dict", help="build a token dictionary from BPE text")
    _io(p, multi_input=True)
    p.set_defaults(func=cmd_dict)

    p = sub.add_parser("binarize", help="encode BPE text as token ids")
    _io(p)
    p.add_argument("--dict", required=True, help="dictionary file from dict")
    p.set_defaults(func=cmd_binarize)

    p = sub.add_parser("debinarize", help="decode a binarized corpus back to text")
    _io(p)
    p.add_argument("--dict", required=True, help="dictionary file the corpus was built with")
    p.add_argument("--no-check", action="store_true", help="skip the dictionary hash check")
    p.set_defaults(func=cmd_debinarize)

    p = sub.add_parser("cttr", help="corrected type/token ratio")
    p.add_argument("input", nargs="?", default="-", help="input file ('-' = stdin, the default)")
    p.add_argument("--seed", type=int, help="sampling seed (required unless --full)")
    p.add_argument("--sample", type=_positive, default=DEFAULT_CTTR_SAMPLE,
                   help="lines drawn with replacement (default 1750000)")
    p.add_argument("--full", action="store_true", help="score every line once instead of sampling")
    p.set_defaults(func=cmd_cttr)

    p = sub.add_parser("bleu", help="corpus BLEU of hypotheses against references")
    p.add_argument("--ref", required=True, help="reference file")
    p.add_argument("--hyp", required=True, help="hypothesis file")
    p.add_argument("--report", action="store_true", help="print the key=value statistics block")
    p.add_argument("--smooth", type=float, default=None,
                   help="epsilon used in place of zero n-gram matches (default off)")
    p.set_defaults(func=cmd_bleu)

    p = sub.add_parser("prepare", help="run the full preparation pipeline")
    p.add_argument("--data-dir", required=True,
                   help="directory holding <com>-<lang>/train.<com> and train.<lang>")
    p.add_argument("--common", type=_lang, default=parse_language_tag("EN"),
                   help="common language (default EN)")
    p.add_argument("--langs", help="comma-separated language set, e.g. GU,HI,MR,PA")
    p.add_argument("--group", choices=["EI", "DR", "WI"], help="use or restrict to a language group")
    p.add_argument("--order", type=int, choices=[0, 1], default=0,
                   help="0: common -> set, 1: set -> common")
    p.add_argument("--translit", action="store_true", help="transliterate to ITRANS")
    p.add_argument("--ops", type=_positive, default=DEFAULT_BPE_OPERATIONS,
                   help="number of BPE merge operations (default 48000)")
    p.add_argument("--run-dir", default="run", help="root under which <config-hash>/ is created")
    p.add_argument("--force", action="store_true", help="rebuild even if a valid run exists")
    _jobs(p)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("evaluate", help="translate a test pair and score it")
    p.add_argument("--run-dir", required=True, help="prepared run directory")
    p.add_argument("--src", type=_lang, required=True, help="source language")
    p.add_argument("--tgt", type=_lang, required=True, help="target language")
    p.add_argument("--src-file", required=True, help="raw test source")
    p.add_argument("--ref-file", required=True, help="raw test reference")
    p.add_argument("--out-dir", help="where hyp/ and scores.txt go (default: the run directory)")
    _adapter_flags(p); _jobs(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pivot-eval", help="two-hop evaluation through a pivot language")
    p.add_argument("--src", type=_lang, required=True, help="source language")
    p.add_argument("--pivot", type=_lang, default=parse_language_tag("EN"),
                   help="pivot language (default EN)")
    p.add_argument("--tgt", type=_lang, required=True, help="target language")
    p.add_argument("--src-file", required=True, help="raw test source")
    p.add_argument("--ref-file", required=True, help="raw test reference")
    p.add_argument("--src-run-dir", help="prepared set of the first hop")
    p.add_argument("--tgt-run-dir", help="prepared set of the second hop")
    p.add_argument("--out-dir", help="where pivot/, hyp/ and scores.txt go")
    _adapter_flags(p, second=True); _jobs(p)
    p.set_defaults(func=cmd_pivot_eval)

    p = sub.add_parser("groups", help="list the members of a language group")
    p.add_argument("group", choices=["EI", "DR", "WI"], help="group name")
    p.set_defaults(func=cmd_groups)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as e:
        print(f"indic-mnmt {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AdapterError as e:
        print(f"indic-mnmt {args.command}: {e}", file=sys.stderr)
        return EXIT_ADAPTER
    except (MnmtError, OSError, ValueError) as e:
        print(f"indic-mnmt {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
