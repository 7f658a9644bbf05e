"""String-based MT scoring and code-switching diagnostics.

BLEU operates on pre-tokenized token lists (tokenization is the caller's
choice: whitespace, character, or an external subword tokenizer). chrF++
operates on raw strings. The diagnostics (copy rate, replacement rate,
hallucination tokens) compare normalized surface tokens only.
"""

from __future__ import annotations

import math
import string
import unicodedata
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .metrics import TAG_L1, TAG_L2, MetricUndefinedError


class Setting(str, Enum):
    CSW_TO_EN = "csw_to_en"
    CSW_TO_X = "csw_to_x"
    X_TO_EN = "x_to_en"
    EN_TO_X = "en_to_x"

    @property
    def target_is_english(self) -> bool:
        return self in (Setting.CSW_TO_EN, Setting.X_TO_EN)

    @property
    def is_csw(self) -> bool:
        return self in (Setting.CSW_TO_EN, Setting.CSW_TO_X)


class BaselineKind(str, Enum):
    MONOLINGUAL = "monolingual"
    RAW_CSW_INPUT = "raw_csw_input"


@dataclass(frozen=True)
class ScoredSystem:
    setting: Setting
    lang: str
    model: str
    bleu: float
    chrfpp: float
    copy_rate: float | None = None
    replacement_rate: float | None = None
    comet: float | None = None

    def metric(self, name: str) -> float | None:
        return getattr(self, name)


@dataclass(frozen=True)
class DeltaEntry:
    lang: str
    metric: str
    model: str
    setting: Setting
    baseline: BaselineKind
    delta: float


_METRIC_FIELDS = ("bleu", "chrfpp", "copy_rate", "replacement_rate", "comet")


def score_deltas(
    csw: ScoredSystem, baseline: ScoredSystem, kind: BaselineKind
) -> list[DeltaEntry]:
    """Entrywise csw - baseline over the metrics present on both sides."""
    if csw.lang != baseline.lang:
        raise ValueError(f"language mismatch: {csw.lang} vs {baseline.lang}")
    entries = []
    for name in _METRIC_FIELDS:
        a, b = csw.metric(name), baseline.metric(name)
        if a is None and b is None:
            continue
        if (a is None) != (b is None):
            raise ValueError(f"metric {name!r} present on only one side")
        entries.append(DeltaEntry(
            lang=csw.lang, metric=name, model=csw.model,
            setting=csw.setting, baseline=kind, delta=a - b,
        ))
    return entries


BLEU_ORDER = 4


def bleu(
    hypotheses: Sequence[Sequence[str]], references: Sequence[Sequence[str]]
) -> float:
    """Corpus BLEU: 4-gram, uniform weights, clipped counts, no smoothing,
    exponential brevity penalty. Returns a percentage in [0, 100]."""
    if len(hypotheses) != len(references):
        raise ValueError(
            f"{len(hypotheses)} hypotheses vs {len(references)} references"
        )
    if not hypotheses:
        raise ValueError("need at least one segment")
    correct = [0] * BLEU_ORDER
    total = [0] * BLEU_ORDER
    sys_len = ref_len = 0
    for seg, (hyp, ref) in enumerate(zip(hypotheses, references)):
        if not ref:
            raise ValueError(f"segment {seg}: empty reference token list")
        sys_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, BLEU_ORDER + 1):
            hyp_ngrams = _ngrams(hyp, n)
            ref_ngrams = _ngrams(ref, n)
            total[n - 1] += sum(hyp_ngrams.values())
            correct[n - 1] += sum((hyp_ngrams & ref_ngrams).values())
    if sys_len == 0 or any(c == 0 for c in correct):
        return 0.0
    log_precision = sum(
        math.log(c / t) for c, t in zip(correct, total)
    ) / BLEU_ORDER
    bp = 1.0 if sys_len >= ref_len else math.exp(1 - ref_len / sys_len)
    return 100.0 * bp * math.exp(log_precision)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


CHRF_CHAR_ORDER = 6
CHRF_WORD_ORDER = 2
CHRF_BETA = 2.0
_CHRF_EPS = 1e-16
_ASCII_PUNCT = set(string.punctuation)


def chrf_pp(hypotheses: Sequence[str], references: Sequence[str]) -> float:
    """chrF++: character n-grams 1..6 plus word n-grams 1..2, beta=2,
    whitespace removed for character n-grams, corpus-level aggregation by
    pooled per-order statistics. Returns a percentage in [0, 100]."""
    if len(hypotheses) != len(references):
        raise ValueError(
            f"{len(hypotheses)} hypotheses vs {len(references)} references"
        )
    if not hypotheses:
        raise ValueError("need at least one segment")
    n_orders = CHRF_CHAR_ORDER + CHRF_WORD_ORDER
    match = [0] * n_orders
    hyp_total = [0] * n_orders
    ref_total = [0] * n_orders
    for hyp, ref in zip(hypotheses, references):
        for k, (h_counts, r_counts) in enumerate(
            zip(_chrf_ngram_stats(hyp), _chrf_ngram_stats(ref))
        ):
            match[k] += sum((h_counts & r_counts).values())
            hyp_total[k] += sum(h_counts.values())
            ref_total[k] += sum(r_counts.values())
    f_sum = 0.0
    effective_orders = 0
    for k in range(n_orders):
        if hyp_total[k] == 0 and ref_total[k] == 0:
            # order longer than every segment on both sides; skip it
            continue
        effective_orders += 1
        precision = match[k] / hyp_total[k] if hyp_total[k] else 0.0
        recall = match[k] / ref_total[k] if ref_total[k] else 0.0
        denom = max(CHRF_BETA**2 * precision + recall, _CHRF_EPS)
        f_sum += (1 + CHRF_BETA**2) * precision * recall / denom
    if effective_orders == 0:
        return 0.0
    return 100.0 * f_sum / effective_orders


def _chrf_ngram_stats(sentence: str) -> list[Counter]:
    """Per-order n-gram counts: char orders 1..6 then word orders 1..2."""
    chars = list(sentence.strip().replace(" ", ""))
    words = []
    for word in sentence.strip().split():
        words.extend(_split_punctuation(word))
    stats = [_ngrams(chars, n) for n in range(1, CHRF_CHAR_ORDER + 1)]
    stats.extend(_ngrams(words, n) for n in range(1, CHRF_WORD_ORDER + 1))
    return stats


def _split_punctuation(word: str) -> list[str]:
    # chrF++ convention: detach a single leading or trailing punctuation mark
    if len(word) == 1:
        return [word]
    if word[-1] in _ASCII_PUNCT:
        return [word[:-1], word[-1]]
    if word[0] in _ASCII_PUNCT:
        return [word[0], word[1:]]
    return [word]


def normalize_token(token: str) -> str:
    """Lowercase and strip all Unicode punctuation from a token."""
    return "".join(
        ch for ch in token.lower() if not unicodedata.category(ch).startswith("P")
    )


def _normalized_counter(tokens: Iterable[str]) -> Counter:
    counts = Counter(normalize_token(t) for t in tokens)
    counts.pop("", None)
    return counts


def _tagged_tokens(x) -> tuple[Sequence[str], Sequence[str]]:
    if hasattr(x, "tokens") and hasattr(x, "tags"):
        return x.tokens, x.tags
    tokens, tags = x
    return tokens, tags


def _select_tokens(x, wanted_tag: str) -> list[str]:
    tokens, tags = _tagged_tokens(x)
    return [t for t, g in zip(tokens, tags) if g == wanted_tag]


def copy_rate(
    csw_inputs: Sequence, outputs: Sequence[str], target: str
) -> float:
    """Share of the input's target-language tokens that reappear in the
    output (clipped multiset counts, case- and punctuation-insensitive).

    ``target`` is ``"l1"`` or ``"l2"``: the language whose tokens should be
    carried over unchanged by the translation.
    """
    wanted = TAG_L1 if target == "l1" else TAG_L2
    if len(csw_inputs) != len(outputs):
        raise ValueError(f"{len(csw_inputs)} inputs vs {len(outputs)} outputs")
    num = den = 0
    for inp, out in zip(csw_inputs, outputs):
        cin = _normalized_counter(_select_tokens(inp, wanted))
        if not cin:
            continue
        cout = _normalized_counter(out.split())
        num += sum((cin & cout).values())
        den += sum(cin.values())
    if den == 0:
        raise MetricUndefinedError("no segment has any target-language token")
    return 100.0 * num / den


def replacement_rate(
    inputs: Sequence, outputs: Sequence[str], target: str
) -> float:
    """Share of non-target input tokens that no longer appear in the output
    (multiset difference; a proxy for "was translated").

    ``target`` names the translation target side (``"l1"`` or ``"l2"``);
    the rate is computed over the tokens of the other language.
    """
    non_target = TAG_L2 if target == "l1" else TAG_L1
    if len(inputs) != len(outputs):
        raise ValueError(f"{len(inputs)} inputs vs {len(outputs)} outputs")
    replaced = total = 0
    for inp, out in zip(inputs, outputs):
        cin = _normalized_counter(_select_tokens(inp, non_target))
        if not cin:
            continue
        cout = _normalized_counter(out.split())
        replaced += sum((cin - cout).values())
        total += sum(cin.values())
    if total == 0:
        raise MetricUndefinedError("no segment has any non-target token")
    return 100.0 * replaced / total


def monolingual_tagged(text: str, tag: str = TAG_L1):
    """Wrap plain text as a tagged token list, for monolingual baselines."""
    tokens = text.split()
    return tokens, [tag] * len(tokens)


def hallucination_tokens(output: str, en_src: str, xx_src: str) -> set[str]:
    """Normalized output tokens absent from both source sentences."""
    sources = _normalized_counter(en_src.split() + xx_src.split())
    out = _normalized_counter(output.split())
    return {t for t in out if t not in sources}


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation with average-rank tie handling."""
    if len(xs) != len(ys):
        raise ValueError(f"{len(xs)} xs vs {len(ys)} ys")
    if len(xs) < 2:
        raise ValueError("need at least 2 observations")
    rx = _average_ranks(xs)
    ry = _average_ranks(ys)
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        raise MetricUndefinedError("correlation undefined for a constant sequence")
    return cov / math.sqrt(vx * vy)


def _average_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def tokenize_for_bleu(line: str, mode: str) -> list[str]:
    """Tokenize one segment for BLEU: whitespace, char, or pretokenized
    (already space-separated subword units)."""
    if mode in ("whitespace", "pretokenized"):
        return line.split()
    if mode == "char":
        return list(line.strip().replace(" ", ""))
    raise ValueError(f"unknown tokenization mode {mode!r}")
