"""Intonation-unit replacement: turn parallel pairs into code-switched text.

For each pair with n IUs, every replacement count r in 1..n-1 gets exactly
one attempt: a combination of r IU indices is drawn (nonconsecutive
combinations prioritized), the selected English IUs are substituted with
their aligned non-English tokens in ascending target order, and the result
is kept only if it passes the validity checks (both languages present,
text differs from the English source).
"""

from __future__ import annotations

import hashlib
import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus_io import (
    CodeSwitchedSentence,
    IntonationSegmentation,
    ParallelPair,
    Utterance,
    WordAlignment,
    parse_iu_transcript,
    parse_pharaoh,
    validate_transcript,
)
from .metrics import TAG_EMPTY, TAG_L1, TAG_L2

REJECT_NO_L2 = "no_l2"
REJECT_EQUALS_SOURCE = "equals_source"


@dataclass(frozen=True)
class Rejection:
    reason: str


@dataclass
class SynthesisSummary:
    attempts: int = 0
    accepted: int = 0
    rejected: dict[str, int] = field(default_factory=dict)

    def add_rejection(self, reason: str) -> None:
        self.rejected[reason] = self.rejected.get(reason, 0) + 1

    def merge(self, other: "SynthesisSummary") -> None:
        self.attempts += other.attempts
        self.accepted += other.accepted
        for reason, n in other.rejected.items():
            self.rejected[reason] = self.rejected.get(reason, 0) + n


def replacement_counts(n_ius: int) -> list[int]:
    """Replacement counts attempted for a sentence with ``n_ius`` IUs."""
    if n_ius < 1:
        raise ValueError("a sentence has at least one intonation unit")
    return list(range(1, n_ius))

# Combination spaces up to this size are enumerated exactly; larger ones
# fall back to rejection sampling.
_ENUMERATION_LIMIT = 10_000
_REJECTION_TRIES = 1_000


def _nonconsecutive(combo: Sequence[int]) -> bool:
    return all(b - a > 1 for a, b in zip(combo, combo[1:]))


def select_iu_indices(n: int, r: int, rng: random.Random) -> tuple[int, ...]:
    """Draw r of n IU indices, uniformly over nonconsecutive combinations
    when any exist, else uniformly over all combinations."""
    if not 1 <= r <= n - 1:
        raise ValueError(f"need 1 <= r <= n-1, got n={n} r={r}")
    if math.comb(n, r) <= _ENUMERATION_LIMIT:
        combos = list(itertools.combinations(range(n), r))
        pool = [c for c in combos if _nonconsecutive(c)] or combos
        return pool[rng.randrange(len(pool))]
    combo: tuple[int, ...] = ()
    for _ in range(_REJECTION_TRIES):
        combo = tuple(sorted(rng.sample(range(n), r)))
        if _nonconsecutive(combo):
            return combo
    return combo


def replace_ius(
    pair: ParallelPair, indices: Iterable[int]
) -> CodeSwitchedSentence | Rejection:
    """Substitute the selected IUs of ``pair`` with aligned target tokens.

    Within each replaced IU the aligned target tokens are emitted once, in
    ascending target order; each source token with no alignment links
    contributes an empty-string placeholder. Non-replaced IUs keep their
    English tokens.
    """
    chosen = sorted(set(indices))
    n = len(pair.segmentation)
    for k in chosen:
        if not 0 <= k < n:
            raise ValueError(f"IU index {k} out of range for {n} IUs")
    tokens: list[str] = []
    tags: list[str] = []
    for k, (start, end) in enumerate(pair.segmentation.spans):
        if k in chosen:
            for j in pair.alignment.targets_for_range(start, end):
                tokens.append(pair.xx.tokens[j])
                tags.append(TAG_L2)
            for p in range(start, end):
                if not pair.alignment.source_is_linked(p):
                    tokens.append("")
                    tags.append(TAG_EMPTY)
        else:
            tokens.extend(pair.en.tokens[start:end])
            tags.extend([TAG_L1] * (end - start))
    if TAG_L2 not in tags:
        return Rejection(REJECT_NO_L2)
    rendered = " ".join(t for t, g in zip(tokens, tags) if g != TAG_EMPTY)
    if rendered == " ".join(pair.en.tokens):
        return Rejection(REJECT_EQUALS_SOURCE)
    return CodeSwitchedSentence(
        id=f"{pair.id}.r{len(chosen)}",
        lang=pair.lang,
        tokens=tuple(tokens),
        tags=tuple(tags),
        replaced_ius=tuple(chosen),
    )


def _rng_for(seed: int, pair_id: str, r: int) -> random.Random:
    """Per-attempt RNG keyed by (seed, pair id, r) so results do not depend
    on execution order or degree of parallelism."""
    key = f"{seed}\x00{pair_id}\x00{r}".encode()
    return random.Random(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))


def synthesize_pair(
    pair: ParallelPair, seed: int
) -> tuple[list[CodeSwitchedSentence], SynthesisSummary]:
    out: list[CodeSwitchedSentence] = []
    summary = SynthesisSummary()
    n = len(pair.segmentation)
    for r in replacement_counts(n):
        rng = _rng_for(seed, pair.id, r)
        indices = select_iu_indices(n, r, rng)
        summary.attempts += 1
        result = replace_ius(pair, indices)
        if isinstance(result, Rejection):
            summary.add_rejection(result.reason)
        else:
            summary.accepted += 1
            out.append(result)
    return out, summary


def _synthesize_pair_job(args: tuple[ParallelPair, int]):
    return synthesize_pair(*args)


def synthesize_corpus(
    pairs: Sequence[ParallelPair], seed: int, jobs: int = 1
) -> tuple[list[CodeSwitchedSentence], SynthesisSummary]:
    """Run one selection + replacement attempt per (pair, r) over a corpus.

    Output order is (pair order, ascending r); rejected variants are
    dropped and counted in the returned summary.
    """
    summary = SynthesisSummary()
    sentences: list[CodeSwitchedSentence] = []
    if jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(
                _synthesize_pair_job, ((p, seed) for p in pairs), chunksize=64
            ))
    else:
        results = [synthesize_pair(p, seed) for p in pairs]
    for out, part in results:
        sentences.extend(out)
        summary.merge(part)
    return sentences, summary


@dataclass
class LoadSummary:
    records: int = 0
    accepted: int = 0
    rejected_transcript: int = 0
    rejected_token_count: int = 0
    parse_errors: int = 0


def assemble_pairs(
    records: Sequence[tuple[str, str, str]],
    alignment_lines: Sequence[str],
    iu_lines: Sequence[str],
    lang: str,
) -> tuple[list[ParallelPair], LoadSummary]:
    """Join the three line-parallel inputs into validated pairs.

    Records whose transcript fails validation against the English source,
    or whose transcript token count differs from the source token count
    (the alignment indexes source tokens), are skipped and counted.
    """
    if not (len(records) == len(alignment_lines) == len(iu_lines)):
        raise ValueError(
            f"input files are not line-parallel: {len(records)} records, "
            f"{len(alignment_lines)} alignment lines, {len(iu_lines)} transcripts"
        )
    summary = LoadSummary(records=len(records))
    pairs: list[ParallelPair] = []
    for (rid, en_text, xx_text), align_line, iu_line in zip(
        records, alignment_lines, iu_lines
    ):
        try:
            transcript_tokens, segmentation = parse_iu_transcript(iu_line)
        except ValueError:
            summary.parse_errors += 1
            continue
        if not validate_transcript(transcript_tokens, en_text):
            summary.rejected_transcript += 1
            continue
        en = Utterance(id=rid, text=en_text)
        xx = Utterance(id=rid, text=xx_text)
        if len(transcript_tokens) != len(en.tokens):
            summary.rejected_token_count += 1
            continue
        alignment = parse_pharaoh(align_line, len(en.tokens), len(xx.tokens))
        pairs.append(ParallelPair(
            id=rid, en=en, xx=xx, lang=lang,
            alignment=alignment, segmentation=segmentation,
        ))
        summary.accepted += 1
    return pairs, summary
