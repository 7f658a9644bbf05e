"""Command-line entry point for the model adapters.

Usage: ``adapters <kind> --in FILE --out FILE [--model ID] [--batch N] ...``

Exit codes: 0 success, 1 validation or model failure, 2 usage error,
3 I/O error. A failed job never leaves a partial output file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .backends import ModelUnavailableError
from .jobs import DEFAULT_MODELS, AdapterJob, JobKind

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adapters",
        description="File-in/file-out bridges to external neural models.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)

    def common(p):
        p.add_argument("--in", dest="input", required=True, help="input file")
        p.add_argument("--out", required=True, help="output file")
        p.add_argument("--model", help="model identifier (default: built-in)")
        p.add_argument("--batch", type=int, default=32, help="batch size")

    p = sub.add_parser(
        JobKind.DETECT_IU.value,
        help="manifest TSV (id, audio path, reference) -> IU transcript file",
    )
    common(p)

    p = sub.add_parser(
        JobKind.ALIGN.value,
        help="parallel TSV -> Pharaoh word alignment file",
    )
    common(p)

    p = sub.add_parser(
        JobKind.TRANSLATE.value,
        help="one sentence per line -> one hypothesis per line",
    )
    common(p)
    p.add_argument("--src-lang", required=True, help="source language code")
    p.add_argument("--tgt-lang", required=True, help="target language code")

    p = sub.add_parser(
        JobKind.SUBWORD_TOKENIZE.value,
        help="text file -> space-joined subword units (or back)",
    )
    common(p)
    p.add_argument("--detokenize", action="store_true",
                   help="invert the tokenization")

    p = sub.add_parser(
        JobKind.COMET.value,
        help="hypothesis file -> one quality score per line",
    )
    common(p)
    p.add_argument("--src", required=True, help="source sentences file")
    p.add_argument("--ref", required=True, help="reference sentences file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    kind = JobKind(args.kind)
    inputs = {"in": Path(args.input)}
    if kind is JobKind.COMET:
        inputs["src"] = Path(args.src)
        inputs["ref"] = Path(args.ref)
    job = AdapterJob(
        kind=kind,
        inputs=inputs,
        output=Path(args.out),
        model=args.model or DEFAULT_MODELS[kind],
        batch_size=args.batch,
        src_lang=getattr(args, "src_lang", "en"),
        tgt_lang=getattr(args, "tgt_lang", "en"),
        detokenize=getattr(args, "detokenize", False),
    )
    try:
        job.run()
    except ModelUnavailableError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
