"""Adapter job description and execution.

All jobs obey the line-parallel contract: the output file has exactly one
line per input record, in input order, and is written atomically so a failed
job never leaves a partial file behind.
"""

from __future__ import annotations

import os
import sys
import tempfile
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from . import backends


class JobKind(str, Enum):
    DETECT_IU = "detect_ius"
    ALIGN = "align"
    TRANSLATE = "translate"
    SUBWORD_TOKENIZE = "subword"
    COMET = "comet"


DEFAULT_MODELS = {
    JobKind.DETECT_IU: "heuristic",
    JobKind.ALIGN: "diagonal",
    JobKind.TRANSLATE: "dummy",
    JobKind.SUBWORD_TOKENIZE: "builtin",
    JobKind.COMET: "overlap",
}


def atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _read_lines(path: str | Path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _parse_manifest(path: str | Path) -> list[tuple[str, str, str]]:
    """Manifest TSV: id, audio path, reference transcript."""
    rows = []
    for line_no, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError(
                f"{path}: line {line_no}: expected 3 tab-separated fields, "
                f"got {len(fields)}"
            )
        rows.append((fields[0], fields[1], fields[2]))
    return rows


def _parse_parallel(path: str | Path) -> list[tuple[str, str, str]]:
    """Parallel TSV: id, English text, non-English text (optional header)."""
    rows = []
    for line_no, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split("\t")]
        if line_no == 1 and fields == ["id", "en", "xx"]:
            continue
        if len(fields) != 3:
            raise ValueError(
                f"{path}: line {line_no}: expected 3 tab-separated fields"
            )
        if not all(fields):
            raise ValueError(f"{path}: line {line_no}: empty field")
        rows.append((fields[0], fields[1], fields[2]))
    return rows


@dataclass
class AdapterJob:
    kind: JobKind
    inputs: dict[str, Path]
    output: Path
    model: str
    batch_size: int = 32
    src_lang: str = "en"
    tgt_lang: str = "en"
    detokenize: bool = False
    log: object = field(default_factory=lambda: sys.stderr)

    def run(self) -> None:
        lines = getattr(self, f"_run_{self.kind.name.lower()}")()
        atomic_write(self.output, "".join(line + "\n" for line in lines))

    def _batches(self, lines):
        for start in range(0, len(lines), self.batch_size):
            yield lines[start:start + self.batch_size]

    def _run_detect_iu(self) -> list[str]:
        rows = _parse_manifest(self.inputs["in"])
        out, skipped = backends.detect_ius(rows, self.model)
        for reason in skipped:
            print(f"skipped: {reason}", file=self.log)
        return out

    def _run_align(self) -> list[str]:
        rows = _parse_parallel(self.inputs["in"])
        return [backends.align_pair(en, xx, self.model) for _, en, xx in rows]

    def _run_translate(self) -> list[str]:
        fn = backends.translator(self.model, self.src_lang, self.tgt_lang)
        out: list[str] = []
        for batch in self._batches(_read_lines(self.inputs["in"])):
            out.extend(fn(line) for line in batch)
        return out

    def _run_subword_tokenize(self) -> list[str]:
        fn = backends.subword_detokenize if self.detokenize else backends.subword_tokenize
        return [fn(line, self.model) for line in _read_lines(self.inputs["in"])]

    def _run_comet(self) -> list[str]:
        srcs = _read_lines(self.inputs["src"])
        hyps = _read_lines(self.inputs["in"])
        refs = _read_lines(self.inputs["ref"])
        if not (len(srcs) == len(hyps) == len(refs)):
            raise ValueError(
                f"line counts differ: {len(srcs)} src, {len(hyps)} hyp, "
                f"{len(refs)} ref"
            )
        scores = backends.comet_scores(srcs, hyps, refs, self.model)
        return [f"{s:.4f}" for s in scores]
