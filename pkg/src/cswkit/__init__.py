"""Intonation-unit code-switching corpus synthesis and MT evaluation."""

from .corpus_io import (
    CodeSwitchedSentence,
    IntonationSegmentation,
    LanguageMeta,
    LANGUAGES,
    ParallelPair,
    ParseError,
    Utterance,
    WordAlignment,
    parse_dataset,
    parse_iu_transcript,
    parse_parallel_tsv,
    parse_pharaoh,
    serialize_dataset,
    validate_transcript,
)
from .metrics import cmi, corpus_stats, spf
from .mt_eval import (
    bleu,
    chrf_pp,
    copy_rate,
    hallucination_tokens,
    replacement_rate,
    spearman_rho,
)
from .synthesis import (
    replace_ius,
    replacement_counts,
    select_iu_indices,
    synthesize_corpus,
)

__version__ = "0.1.0"
