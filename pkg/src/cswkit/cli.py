"""Command-line entry point: synthesize / stats / score / report / validate.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O or parse
error. Diagnostics go to stderr, data to stdout; output files are written
atomically (temp file + rename), so no partial file survives a failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import corpus_io, harness, metrics, mt_eval, synthesis
from .corpus_io import ParseError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cswkit",
        description="Synthesize intonation-unit code-switched corpora and "
                    "evaluate MT systems on them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="generate a code-switched dataset")
    p.add_argument("--parallel", required=True, help="parallel TSV (id, en, xx)")
    p.add_argument("--align", required=True, help="Pharaoh alignment file")
    p.add_argument("--iu", required=True, help="IU-marked transcript file")
    p.add_argument("--lang", required=True, choices=sorted(corpus_io.LANGUAGES),
                   help="ISO 639-1 code of the non-English side")
    p.add_argument("--seed", required=True, type=int, help="RNG seed")
    p.add_argument("--out", required=True, help="output dataset TSV")
    p.add_argument("--jobs", type=int, default=1, help="worker process cap")

    p = sub.add_parser("stats", help="corpus-level CMI/SPF statistics")
    p.add_argument("--dataset", required=True, help="dataset TSV")
    p.add_argument("--mode", choices=["macro", "micro", "both"], default="both")

    p = sub.add_parser("score", help="score hypotheses against references")
    p.add_argument("--hyp", required=True, help="hypothesis file, one line per segment")
    p.add_argument("--ref", help="reference file (bleu/chrfpp)")
    p.add_argument("--metric", required=True,
                   choices=["bleu", "chrfpp", "copy", "replace"])
    p.add_argument("--csw-dataset", help="dataset TSV (copy/replace)")
    p.add_argument("--target", choices=["l1", "l2"], default="l1",
                   help="translation target side (copy/replace)")
    p.add_argument("--tokenization",
                   choices=["whitespace", "char", "pretokenized"],
                   default="whitespace")

    p = sub.add_parser("report", help="run the full evaluation harness")
    p.add_argument("--config", required=True, help="flat key=value config file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=["tsv", "markdown"], default="tsv")

    p = sub.add_parser("validate", help="check input or dataset file invariants")
    p.add_argument("--dataset", help="dataset TSV to validate")
    p.add_argument("--parallel", help="parallel TSV to validate")
    p.add_argument("--align", help="alignment file (requires --parallel)")
    p.add_argument("--iu", help="IU transcript file (requires --parallel)")
    return parser


def _atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _cmd_synthesize(args) -> int:
    records, record_errors = corpus_io.parse_parallel_tsv(
        _read(args.parallel).splitlines(keepends=True)
    )
    for err in record_errors:
        print(f"{args.parallel}: {err}", file=sys.stderr)
    if record_errors:
        # keep line-parallelism with the other inputs
        print("error: parallel TSV has skipped records; inputs would be "
              "misaligned", file=sys.stderr)
        return EXIT_VALIDATION
    align_lines = _read(args.align).splitlines()
    iu_lines = _read(args.iu).splitlines()
    pairs, load = synthesis.assemble_pairs(records, align_lines, iu_lines, args.lang)
    sentences, summary = synthesis.synthesize_corpus(pairs, args.seed, jobs=args.jobs)
    _atomic_write(args.out, corpus_io.serialize_dataset(sentences))
    print(json.dumps({"stage": "load", **load.__dict__}))
    print(json.dumps({
        "stage": "synthesis",
        "attempts": summary.attempts,
        "accepted": summary.accepted,
        "rejected": summary.rejected,
    }))
    return EXIT_OK


def _stats_rows(records) -> list[str]:
    by_lang: dict[str, list] = {}
    for rec in records:
        by_lang.setdefault(rec.lang, []).append(rec)
    rows = []
    for lang in sorted(by_lang):
        st = metrics.corpus_stats(by_lang[lang])
        for mode in ("macro", "micro"):
            cmi = st.cmi_macro if mode == "macro" else st.cmi_micro
            spf = st.spf_macro if mode == "macro" else st.spf_micro
            rows.append((mode, lang, st.count, st.pct_l1, st.pct_l2, cmi, spf))
    return rows


def _cmd_stats(args) -> int:
    records = corpus_io.parse_dataset(_read(args.dataset))
    if not records:
        print("error: empty dataset", file=sys.stderr)
        return EXIT_VALIDATION
    print("mode\tiso\tcount\tpct_l1\tpct_l2\tcmi\tspf")
    for mode, lang, count, pct_l1, pct_l2, cmi, spf in _stats_rows(records):
        if args.mode != "both" and mode != args.mode:
            continue
        print(f"{mode}\t{lang}\t{count}\t{pct_l1:.2f}\t{pct_l2:.2f}"
              f"\t{cmi:.2f}\t{spf:.4f}")
    return EXIT_OK


def _cmd_score(args) -> int:
    hyps = _read(args.hyp).splitlines()
    if args.metric in ("bleu", "chrfpp"):
        if not args.ref:
            print("error: --ref is required for bleu/chrfpp", file=sys.stderr)
            return EXIT_USAGE
        refs = _read(args.ref).splitlines()
        if len(hyps) != len(refs):
            print(f"error: {len(hyps)} hypothesis lines vs {len(refs)} "
                  f"reference lines", file=sys.stderr)
            return EXIT_VALIDATION
        if args.metric == "bleu":
            tok = lambda lines: [
                mt_eval.tokenize_for_bleu(x, args.tokenization) for x in lines
            ]
            value = mt_eval.bleu(tok(hyps), tok(refs))
        else:
            value = mt_eval.chrf_pp(hyps, refs)
    else:
        if not args.csw_dataset:
            print("error: --csw-dataset is required for copy/replace",
                  file=sys.stderr)
            return EXIT_USAGE
        records = corpus_io.parse_dataset(_read(args.csw_dataset))
        if len(hyps) != len(records):
            print(f"error: {len(hyps)} hypothesis lines vs {len(records)} "
                  f"dataset records", file=sys.stderr)
            return EXIT_VALIDATION
        fn = mt_eval.copy_rate if args.metric == "copy" else mt_eval.replacement_rate
        value = fn(records, hyps, target=args.target)
    print(f"{value:.4f}")
    return EXIT_OK


def _cmd_report(args) -> int:
    config = harness.EvalConfig.from_file(args.config)
    report = harness.run_evaluation(config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "md" if args.format == "markdown" else "tsv"
    _atomic_write(out_dir / f"report.{ext}",
                  harness.render_report(report, args.format))
    return EXIT_OK


def _cmd_validate(args) -> int:
    problems: list[str] = []
    if args.dataset:
        try:
            records = corpus_io.parse_dataset(_read(args.dataset))
        except ParseError as err:
            problems.append(f"{args.dataset}: {err}")
        else:
            for i, rec in enumerate(records, start=2):
                counts = metrics.language_counts(rec)
                if counts.eta < 2:
                    problems.append(
                        f"{args.dataset}: line {i}: fewer than 2 countable tokens"
                    )
    if args.parallel:
        try:
            records, record_errors = corpus_io.parse_parallel_tsv(
                _read(args.parallel).splitlines(keepends=True)
            )
            problems.extend(f"{args.parallel}: {e}" for e in record_errors)
        except ParseError as err:
            problems.append(f"{args.parallel}: {err}")
            records = []
        if args.iu:
            for line_no, line in enumerate(_read(args.iu).splitlines(), start=1):
                try:
                    corpus_io.parse_iu_transcript(line)
                except ParseError as err:
                    problems.append(f"{args.iu}: line {line_no}: {err}")
        if args.align and records:
            align_lines = _read(args.align).splitlines()
            if len(align_lines) != len(records):
                problems.append(
                    f"{args.align}: {len(align_lines)} lines for "
                    f"{len(records)} records"
                )
            else:
                for line_no, (line, (_, en, xx)) in enumerate(
                    zip(align_lines, records), start=1
                ):
                    try:
                        corpus_io.parse_pharaoh(line, len(en.split()), len(xx.split()))
                    except ParseError as err:
                        problems.append(f"{args.align}: line {line_no}: {err}")
    if not (args.dataset or args.parallel):
        print("error: nothing to validate (need --dataset or --parallel)",
              file=sys.stderr)
        return EXIT_USAGE
    for p in problems:
        print(p, file=sys.stderr)
    if problems:
        return EXIT_VALIDATION
    print("ok")
    return EXIT_OK


_COMMANDS = {
    "synthesize": _cmd_synthesize,
    "stats": _cmd_stats,
    "score": _cmd_score,
    "report": _cmd_report,
    "validate": _cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
