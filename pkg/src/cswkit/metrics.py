"""Code-switching intensity metrics: CMI, SPF, and corpus-level token shares.

All functions read per-token language tags produced by the synthesizer;
language is never re-inferred from surface forms. Empty-string placeholder
tokens (tag ``-``) are excluded from every count, so alignment gaps do not
distort the metrics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

# Per-token language tags. L1 is the matrix language (English), L2 the
# embedded language, EMPTY marks a placeholder for an unaligned source token.
TAG_L1 = "L1"
TAG_L2 = "L2"
TAG_EMPTY = "Empty"


class MetricUndefinedError(ValueError):
    """Raised when a metric is requested on input it is not defined for."""


def _tags_of(x) -> Sequence[str]:
    return x.tags if hasattr(x, "tags") else x


def counted_tags(x) -> list[str]:
    """Tag sequence with Empty placeholders removed."""
    return [t for t in _tags_of(x) if t != TAG_EMPTY]


@dataclass(frozen=True)
class LanguageCounts:
    eta: int
    eta1: int
    eta2: int


def language_counts(x) -> LanguageCounts:
    tags = counted_tags(x)
    eta1 = sum(1 for t in tags if t == TAG_L1)
    eta2 = sum(1 for t in tags if t == TAG_L2)
    return LanguageCounts(eta=eta1 + eta2, eta1=eta1, eta2=eta2)


def cmi(x) -> float:
    """Code Mixing Index: 100 * (1 - max(eta1, eta2) / eta), in [0, 50]."""
    c = language_counts(x)
    if c.eta < 1:
        raise MetricUndefinedError("CMI undefined for zero countable tokens")
    return 100.0 * (1.0 - max(c.eta1, c.eta2) / c.eta)


def switch_points(x) -> int:
    """Number of adjacent counted-token pairs with differing language tags."""
    tags = counted_tags(x)
    return sum(1 for a, b in zip(tags, tags[1:]) if a != b)


def spf(x) -> float:
    """Switch Point Fraction: switch points / (eta - 1), in [0, 1]."""
    tags = counted_tags(x)
    if len(tags) < 2:
        raise MetricUndefinedError("SPF undefined for fewer than 2 countable tokens")
    return switch_points(tags) / (len(tags) - 1)


@dataclass(frozen=True)
class CorpusStats:
    count: int
    pct_l1: float
    pct_l2: float
    cmi_macro: float
    cmi_micro: float
    spf_macro: float
    spf_micro: float

    # headline values: unweighted mean over sentences
    @property
    def cmi(self) -> float:
        return self.cmi_macro

    @property
    def spf(self) -> float:
        return self.spf_macro


def corpus_stats(sentences: Iterable) -> CorpusStats:
    """Aggregate CMI/SPF and token shares over a corpus.

    Both aggregation modes are computed: macro (unweighted mean of
    per-sentence values) and micro (formulas applied to pooled counts).
    Sentences with fewer than 2 countable tokens are excluded from SPF
    aggregation.
    """
    count = 0
    eta1 = eta2 = 0
    cmi_sum = 0.0
    spf_sum = 0.0
    spf_count = 0
    switches = 0
    adjacencies = 0
    for s in sentences:
        c = language_counts(s)
        if c.eta < 1:
            raise MetricUndefinedError("sentence with zero countable tokens")
        count += 1
        eta1 += c.eta1
        eta2 += c.eta2
        cmi_sum += 100.0 * (1.0 - max(c.eta1, c.eta2) / c.eta)
        if c.eta >= 2:
            spf_sum += spf(s)
            spf_count += 1
            switches += switch_points(s)
            adjacencies += c.eta - 1
    if count == 0:
        raise MetricUndefinedError("empty corpus")
    eta = eta1 + eta2
    return CorpusStats(
        count=count,
        pct_l1=100.0 * eta1 / eta,
        pct_l2=100.0 * eta2 / eta,
        cmi_macro=cmi_sum / count,
        cmi_micro=100.0 * (1.0 - max(eta1, eta2) / eta),
        spf_macro=spf_sum / spf_count if spf_count else 0.0,
        spf_micro=switches / adjacencies if adjacencies else 0.0,
    )
