"""Model backends for each adapter kind.

Every kind ships one built-in deterministic backend that needs no ML runtime
(used in tests and smoke runs) plus a loader for the real neural model, which
is imported lazily so the package installs and tests without torch.
"""

from __future__ import annotations

import codecs
import string
import wave
from typing import Callable, Sequence

SUPPORTED_LANGS = (
    "en", "ar", "ca", "cy", "de", "et", "fa", "id",
    "lv", "mn", "sl", "sv", "ta", "tr",
)

WORD_MARK = "▁"  # SentencePiece-style word-boundary marker


class ModelUnavailableError(RuntimeError):
    """The requested neural model (or its runtime) cannot be loaded."""


def _require_ml(model: str, package: str):
    try:
        return __import__(package)
    except ImportError as err:
        raise ModelUnavailableError(
            f"model {model!r} needs the optional ML runtime "
            f"({package} is not installed); install the 'ml' extra or use "
            "a built-in backend"
        ) from err


# --- DetectIU --------------------------------------------------------------

IU_MAX_SPAN = 5


def _audio_readable(path: str) -> bool:
    try:
        with wave.open(path, "rb") as fh:
            return fh.getnframes() >= 0
    except (OSError, EOFError, wave.Error):
        return False


def _heuristic_ius(reference: str) -> str:
    """Segment a reference transcript into IUs: break after punctuation-final
    tokens, and force a break after IU_MAX_SPAN tokens."""
    tokens = reference.split()
    spans: list[list[str]] = [[]]
    for token in tokens:
        spans[-1].append(token)
        if token[-1] in ",.;:?!" or len(spans[-1]) >= IU_MAX_SPAN:
            spans.append([])
    parts = [" ".join(span) for span in spans if span]
    return " | ".join(parts)


def detect_ius(
    rows: Sequence[tuple[str, str, str]], model: str
) -> tuple[list[str], list[str]]:
    """One `|`-marked transcript line per (id, audio_path, reference) row.

    Unreadable audio yields a blank placeholder line so downstream files
    stay line-parallel; the skip reasons are returned alongside.
    """
    if model != "heuristic":
        _require_ml(model, "torch")
        raise ModelUnavailableError(
            f"speech model {model!r} cannot be downloaded in this environment"
        )
    lines: list[str] = []
    skipped: list[str] = []
    for rid, audio_path, reference in rows:
        if not _audio_readable(audio_path):
            lines.append("")
            skipped.append(f"{rid}: unreadable audio {audio_path}")
            continue
        lines.append(_heuristic_ius(reference))
    return lines, skipped


# --- Align -----------------------------------------------------------------

def align_pair(en: str, xx: str, model: str) -> str:
    """One Pharaoh line over the whitespace tokens of both sides."""
    if model != "diagonal":
        _require_ml(model, "torch")
        raise ModelUnavailableError(
            f"alignment model {model!r} cannot be downloaded in this environment"
        )
    n = min(len(en.split()), len(xx.split()))
    return " ".join(f"{i}-{i}" for i in range(n))


# --- Translate -------------------------------------------------------------

def translator(model: str, src_lang: str, tgt_lang: str) -> Callable[[str], str]:
    for code in (src_lang, tgt_lang):
        if code not in SUPPORTED_LANGS:
            raise ValueError(
                f"unsupported language code {code!r}; supported: "
                + ", ".join(SUPPORTED_LANGS)
            )
    if model != "dummy":
        _require_ml(model, "torch")
        raise ModelUnavailableError(
            f"translation model {model!r} cannot be downloaded in this "
            "environment"
        )
    if src_lang == tgt_lang:
        return lambda line: line

    def _translate(line: str) -> str:
        # deterministic word-level cipher: stands in for real inference in
        # offline runs, is involutive, and never equals its input for
        # alphabetic text
        return " ".join(codecs.encode(w, "rot13") for w in line.split())

    return _translate


# --- SubwordTokenize -------------------------------------------------------

_CHUNK = 3


def subword_tokenize(line: str, model: str) -> str:
    """Space-joined subword units; reversible by subword_detokenize."""
    if model != "builtin":
        _require_ml(model, "sentencepiece")
        raise ModelUnavailableError(
            f"subword model {model!r} is not available in this environment"
        )
    units: list[str] = []
    for word in line.split():
        marked = WORD_MARK + word
        units.extend(marked[i:i + _CHUNK] for i in range(0, len(marked), _CHUNK))
    return " ".join(units)


def subword_detokenize(line: str, model: str) -> str:
    if model != "builtin":
        _require_ml(model, "sentencepiece")
        raise ModelUnavailableError(
            f"subword model {model!r} is not available in this environment"
        )
    return "".join(line.split()).replace(WORD_MARK, " ").strip()


# --- Comet -----------------------------------------------------------------

def comet_scores(
    srcs: Sequence[str], hyps: Sequence[str], refs: Sequence[str], model: str
) -> list[float]:
    """Per-segment quality scores in [0, 1]."""
    if model != "overlap":
        _require_ml(model, "torch")
        raise ModelUnavailableError(
            f"quality-estimation model {model!r} cannot be downloaded in "
            "this environment"
        )
    table = str.maketrans("", "", string.punctuation)

    def norm(text: str) -> set[str]:
        return {w.lower().translate(table) for w in text.split()} - {""}

    scores = []
    for hyp, ref in zip(hyps, refs):
        h, r = norm(hyp), norm(ref)
        scores.append(len(h & r) / len(h | r) if h | r else 1.0)
    return scores
