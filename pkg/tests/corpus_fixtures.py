"""Deterministic synthetic input corpora for tests.

The generated corpus mimics the production inputs: a parallel TSV, a
line-parallel Pharaoh alignment file, and IU-marked transcripts whose IU
count distribution has a mean of roughly 1.45 (most sentences are a single
IU; multi-IU sentences average about 2.5 IUs).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

# (iu_count, probability): overall mean ~1.45 IUs per transcript
IU_DISTRIBUTION = [(1, 0.70), (2, 0.18), (3, 0.09), (4, 0.03)]

_SYLLABLES = [
    "ta", "ro", "mi", "sen", "lor", "ka", "vel", "du", "na", "pli",
    "gor", "sa", "fen", "ol", "ber", "ti", "mun", "ra", "lis", "ke",
]


def _word(rng: random.Random) -> str:
    return "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(1, 3)))


def _draw_iu_count(rng: random.Random) -> int:
    roll = rng.random()
    acc = 0.0
    for n, p in IU_DISTRIBUTION:
        acc += p
        if roll < acc:
            return n
    return IU_DISTRIBUTION[-1][0]


def _split_lengths(rng: random.Random, total: int, parts: int) -> list[int]:
    """Split ``total`` tokens into ``parts`` spans, each at least 1 token,
    avoiding extremely lopsided two-way splits."""
    if parts == 1:
        return [total]
    if parts == 2:
        lo = max(1, round(0.25 * total))
        hi = min(total - 1, round(0.75 * total))
        a = rng.randint(lo, max(lo, hi))
        return [a, total - a]
    min_part = max(1, total // (2 * parts))
    while True:
        cuts = sorted(rng.sample(range(1, total), parts - 1))
        bounds = [0, *cuts, total]
        lengths = [b - a for a, b in zip(bounds, bounds[1:])]
        if min(lengths) >= min_part:
            return lengths


@dataclass
class FixtureCorpus:
    parallel_tsv: str
    alignment: str
    iu_transcripts: str
    records: int
    multi_iu_records: int


def build_fixture_corpus(
    n_records: int = 600,
    seed: int = 7,
    unaligned_rate: float = 0.05,
    bad_transcript_rate: float = 0.0,
) -> FixtureCorpus:
    rng = random.Random(seed)
    tsv_lines = ["id\ten\txx"]
    align_lines = []
    iu_lines = []
    multi = 0
    for k in range(n_records):
        n_ius = _draw_iu_count(rng)
        length = max(5, 2 * n_ius, round(rng.gauss(10.6, 2.5)))
        en_tokens = [_word(rng) for _ in range(length)]
        # pseudo target language: same length, transformed surface forms
        xx_tokens = ["z" + w[::-1] for w in en_tokens]
        links = [(i, i) for i in range(length) if rng.random() >= unaligned_rate]
        spans = _split_lengths(rng, length, n_ius)
        if n_ius > 1:
            multi += 1
        parts = []
        pos = 0
        for span_len in spans:
            parts.append(" ".join(en_tokens[pos:pos + span_len]))
            pos += span_len
        transcript = " | ".join(parts)
        if rng.random() < bad_transcript_rate:
            transcript = transcript.replace(en_tokens[0], _word(rng) + "x", 1)
        tsv_lines.append(f"r{k:04d}\t{' '.join(en_tokens)}\t{' '.join(xx_tokens)}")
        align_lines.append(" ".join(f"{i}-{j}" for i, j in links))
        iu_lines.append(transcript)
    return FixtureCorpus(
        parallel_tsv="\n".join(tsv_lines) + "\n",
        alignment="\n".join(align_lines) + "\n",
        iu_transcripts="\n".join(iu_lines) + "\n",
        records=n_records,
        multi_iu_records=multi,
    )
