"""Parsing and serialization of every on-disk artifact.

File formats:
  * parallel corpus: TSV with columns ``id, en, xx``, optional header line
  * word alignments: one Pharaoh ``i-j`` line per corpus record, same order
  * IU transcripts: one line per record, boundaries marked by a standalone
    ``|`` token
  * synthesized dataset: TSV with columns
    ``id, lang, csw_text, tags, replaced_ius, cmi, spf``

All files are UTF-8 with LF line endings and no BOM.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import metrics
from .metrics import TAG_EMPTY, TAG_L1, TAG_L2


class ParseError(ValueError):
    """A malformed input file. Carries a 1-based line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class AlignmentBoundsError(ParseError):
    """An alignment link pointing outside its token sequences."""


@dataclass(frozen=True)
class Utterance:
    id: str
    text: str
    tokens: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        toks = tuple(self.text.split())
        if not toks:
            raise ValueError(f"utterance {self.id!r}: empty token sequence")
        object.__setattr__(self, "tokens", toks)


@dataclass(frozen=True)
class IntonationSegmentation:
    """Ordered, contiguous, exhaustive partition of a token sequence."""

    spans: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.spans:
            raise ValueError("segmentation must have at least one span")
        if self.spans[0][0] != 0:
            raise ValueError("first span must start at 0")
        for (s0, e0), (s1, _) in zip(self.spans, self.spans[1:]):
            if e0 != s1:
                raise ValueError("spans must be contiguous")
        for s, e in self.spans:
            if e <= s:
                raise ValueError("spans must be non-empty")

    @property
    def token_count(self) -> int:
        return self.spans[-1][1]

    def __len__(self) -> int:
        return len(self.spans)


@dataclass(frozen=True)
class WordAlignment:
    links: frozenset[tuple[int, int]]

    def targets_for_range(self, start: int, end: int) -> list[int]:
        """Ascending target indices linked from source positions [start, end)."""
        return sorted({j for i, j in self.links if start <= i < end})

    def source_is_linked(self, i: int) -> bool:
        return any(src == i for src, _ in self.links)


@dataclass(frozen=True)
class ParallelPair:
    id: str
    en: Utterance
    xx: Utterance
    lang: str
    alignment: WordAlignment
    segmentation: IntonationSegmentation

    def __post_init__(self):
        if self.segmentation.token_count != len(self.en.tokens):
            raise ValueError(
                f"pair {self.id!r}: segmentation covers "
                f"{self.segmentation.token_count} tokens, "
                f"utterance has {len(self.en.tokens)}"
            )
        for i, j in self.alignment.links:
            if not (0 <= i < len(self.en.tokens) and 0 <= j < len(self.xx.tokens)):
                raise ValueError(f"pair {self.id!r}: alignment link ({i},{j}) out of range")


@dataclass(frozen=True)
class LanguageMeta:
    iso: str
    name: str
    family: str
    script: str
    resource_level: str  # "High" or "Low"


LANGUAGES: dict[str, LanguageMeta] = {
    m.iso: m
    for m in [
        LanguageMeta("ar", "Arabic", "Afro-Asiatic", "Arabic", "High"),
        LanguageMeta("ca", "Catalan", "Indo-European", "Latin", "High"),
        LanguageMeta("cy", "Welsh", "Indo-European", "Latin", "Low"),
        LanguageMeta("de", "German", "Indo-European", "Latin", "High"),
        LanguageMeta("et", "Estonian", "Uralic", "Latin", "High"),
        LanguageMeta("fa", "Persian", "Indo-European", "Arabic", "High"),
        LanguageMeta("id", "Indonesian", "Austronesian", "Latin", "High"),
        LanguageMeta("lv", "Latvian", "Indo-European", "Latin", "High"),
        LanguageMeta("mn", "Mongolian", "Mongolic-Khitan", "Cyrillic", "Low"),
        LanguageMeta("sl", "Slovenian", "Indo-European", "Latin", "High"),
        LanguageMeta("sv", "Swedish", "Indo-European", "Latin", "High"),
        LanguageMeta("ta", "Tamil", "Dravidian", "Tamil", "Low"),
        LanguageMeta("tr", "Turkish", "Turkic", "Latin", "High"),
    ]
}


@dataclass(frozen=True)
class CodeSwitchedSentence:
    """A synthesized mixed-language sentence with per-token provenance.

    ``tokens`` may contain empty strings (placeholders for unaligned source
    tokens); their tag is ``Empty`` and they are dropped when rendering text.
    """

    id: str
    lang: str
    tokens: tuple[str, ...]
    tags: tuple[str, ...]
    replaced_ius: tuple[int, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.tags):
            raise ValueError(f"{self.id!r}: tokens/tags length mismatch")
        if TAG_L1 not in self.tags or TAG_L2 not in self.tags:
            raise ValueError(f"{self.id!r}: both languages must be present")
        if tuple(sorted(set(self.replaced_ius))) != self.replaced_ius or not self.replaced_ius:
            raise ValueError(f"{self.id!r}: replaced_ius must be sorted, unique, non-empty")
        for tok, tag in zip(self.tokens, self.tags):
            if (tag == TAG_EMPTY) != (tok == ""):
                raise ValueError(f"{self.id!r}: Empty tag must pair with empty token")

    @property
    def r(self) -> int:
        return len(self.replaced_ius)

    @property
    def text(self) -> str:
        return " ".join(t for t, g in zip(self.tokens, self.tags) if g != TAG_EMPTY)


PARALLEL_HEADER = "id\ten\txx"


def parse_parallel_tsv(stream: Iterable[str]) -> tuple[list[tuple[str, str, str]], list[ParseError]]:
    """Parse an ``id, en, xx`` TSV.

    Returns the well-formed records in file order plus the collected
    record-level errors (records with an empty text field are skipped and
    reported). A line with the wrong field count raises immediately.
    """
    records: list[tuple[str, str, str]] = []
    errors: list[ParseError] = []
    for line_no, line in enumerate(_iter_lines(stream), start=1):
        if not line.strip():
            continue
        if line_no == 1 and line.rstrip("\n") == PARALLEL_HEADER:
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 3:
            raise ParseError(f"expected 3 tab-separated fields, got {len(fields)}", line_no)
        rid, en, xx = (f.strip() for f in fields)
        if not en or not xx:
            errors.append(ParseError(f"record {rid!r} has an empty text field", line_no))
            continue
        records.append((rid, en, xx))
    return records, errors


def parse_pharaoh(line: str, src_len: int, tgt_len: int) -> WordAlignment:
    """Parse one whitespace-separated ``i-j`` alignment line."""
    links = set()
    for pair in line.split():
        i_str, sep, j_str = pair.partition("-")
        if not sep or not i_str.isdigit() or not j_str.isdigit():
            raise ParseError(f"malformed alignment pair {pair!r}")
        i, j = int(i_str), int(j_str)
        if i >= src_len or j >= tgt_len:
            raise AlignmentBoundsError(
                f"alignment pair ({i},{j}) out of range for lengths ({src_len},{tgt_len})"
            )
        links.add((i, j))
    return WordAlignment(frozenset(links))


IU_MARKER = "|"


def parse_iu_transcript(line: str) -> tuple[list[str], IntonationSegmentation]:
    """Split a ``|``-marked transcript into tokens and IU spans."""
    raw = line.split()
    if not raw:
        raise ParseError("transcript line has no tokens")
    tokens: list[str] = []
    boundaries: list[int] = [0]
    for tok in raw:
        if tok == IU_MARKER:
            if not tokens or boundaries[-1] == len(tokens):
                raise ParseError("empty intonation unit at marker")
            boundaries.append(len(tokens))
        else:
            tokens.append(tok)
    if boundaries[-1] == len(tokens):
        raise ParseError("empty intonation unit at end of line")
    boundaries.append(len(tokens))
    spans = tuple(zip(boundaries, boundaries[1:]))
    return tokens, IntonationSegmentation(spans)


def normalize_text(text: str) -> str:
    """Lowercase, strip all Unicode punctuation, collapse whitespace."""
    stripped = "".join(
        ch for ch in text if not unicodedata.category(ch).startswith("P")
    )
    return " ".join(stripped.lower().split())


def validate_transcript(transcript_tokens: Sequence[str], reference_text: str) -> bool:
    """Accept iff transcript and reference are equal after normalization."""
    return normalize_text(" ".join(transcript_tokens)) == normalize_text(reference_text)


DATASET_HEADER = "id\tlang\tcsw_text\ttags\treplaced_ius\tcmi\tspf"

_TAG_TO_WIRE = {TAG_L1: "en", TAG_EMPTY: "-"}


def serialize_dataset(records: Sequence[CodeSwitchedSentence]) -> str:
    """Render the dataset TSV; inverse of :func:`parse_dataset`."""
    lines = [DATASET_HEADER]
    for rec in records:
        tags_wire = ",".join(
            rec.lang if t == TAG_L2 else _TAG_TO_WIRE[t] for t in rec.tags
        )
        replaced = ",".join(str(k) for k in rec.replaced_ius)
        fields = [
            rec.id,
            rec.lang,
            rec.text,
            tags_wire,
            replaced,
            f"{metrics.cmi(rec):.2f}",
            f"{metrics.spf(rec):.4f}",
        ]
        for f in fields:
            if "\t" in f or "\n" in f:
                raise ValueError(f"record {rec.id!r}: field contains tab or newline")
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def parse_dataset(text: str | Iterable[str]) -> list[CodeSwitchedSentence]:
    """Parse a dataset TSV produced by :func:`serialize_dataset`."""
    lines = list(_iter_lines(text))
    if not lines or lines[0].rstrip("\n") != DATASET_HEADER:
        raise ParseError("missing or malformed dataset header", 1)
    records = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 7:
            raise ParseError(f"expected 7 tab-separated fields, got {len(fields)}", line_no)
        rid, lang, csw_text, tags_wire, replaced, _cmi, _spf = fields
        wire_tags = tags_wire.split(",")
        words = iter(csw_text.split())
        tokens: list[str] = []
        tags: list[str] = []
        try:
            for w in wire_tags:
                if w == "-":
                    tokens.append("")
                    tags.append(TAG_EMPTY)
                elif w == "en":
                    tokens.append(next(words))
                    tags.append(TAG_L1)
                elif w == lang:
                    tokens.append(next(words))
                    tags.append(TAG_L2)
                else:
                    raise ParseError(f"unknown language tag {w!r}", line_no)
        except StopIteration:
            raise ParseError("fewer text tokens than non-empty tags", line_no) from None
        if next(words, None) is not None:
            raise ParseError("more text tokens than non-empty tags", line_no)
        try:
            replaced_ius = tuple(int(k) for k in replaced.split(","))
            rec = CodeSwitchedSentence(
                id=rid, lang=lang, tokens=tuple(tokens), tags=tuple(tags),
                replaced_ius=replaced_ius,
            )
        except ValueError as exc:
            raise ParseError(str(exc), line_no) from None
        records.append(rec)
    return records


def _iter_lines(stream: str | Iterable[str]) -> Iterator[str]:
    if isinstance(stream, str):
        return iter(stream.splitlines(keepends=True))
    return iter(stream)
