#!/usr/bin/env python3
"""Regenerate the frozen golden metric values in tests/data/.

Builds the deterministic 50-pair multilingual scoring fixture, then scores
it with independent reference scorers (sacrebleu's BLEU and the sacrebleu
chrF++ port shipped with torchmetrics) and freezes the results as JSON.
The reference scorers are loaded from an installed sacrebleu/torchmetrics
when available, else from single-file copies pointed to by REF_BLEU_FILE
and REF_CHRF_FILE.

Run from the repository root:

    REF_BLEU_FILE=... REF_CHRF_FILE=... python3 tools/gen_golden_metrics.py
"""

import importlib.util
import json
import os
import random
import sys
import types
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"

LATIN = [
    "the", "house", "river", "green", "walked", "slowly", "towards",
    "morning", "light", "between", "old", "stones", "voices", "carried",
    "wind", "under", "bridge", "children", "laughed", "together",
]
CYRILLIC = [
    "дом", "река", "зелёный", "утро", "свет", "камни", "голоса",
    "ветер", "мост", "дети", "вместе", "медленно",
]
ARABIC = [
    "البيت", "النهر", "الصباح", "الضوء", "الحجارة", "الريح",
    "الجسر", "الأطفال", "معا", "ببطء",
]
TAMIL = [
    "வீடு", "ஆறு", "காலை", "ஒளி", "கற்கள்", "காற்று",
    "பாலம்", "குழந்தைகள்", "ஒன்றாக",
]
VOCABS = [LATIN, LATIN, CYRILLIC, ARABIC, TAMIL]
PUNCT = ["", "", "", ".", ",", "!"]


def build_fixture(n_pairs=50, seed=20240824):
    rng = random.Random(seed)
    pairs = []
    for i in range(n_pairs):
        vocab = VOCABS[i % len(VOCABS)]
        length = rng.randint(8, 14)
        ref_words = [rng.choice(vocab) for _ in range(length)]
        ref_words[-1] += rng.choice([".", "!", "؟" if vocab is ARABIC else "?"])
        hyp_words = []
        for w in ref_words:
            roll = rng.random()
            if roll < 0.10:
                continue  # dropped word
            if roll < 0.25:
                hyp_words.append(rng.choice(vocab) + rng.choice(PUNCT))
            else:
                hyp_words.append(w)
        if rng.random() < 0.3 and len(hyp_words) > 3:
            k = rng.randrange(len(hyp_words) - 1)
            hyp_words[k], hyp_words[k + 1] = hyp_words[k + 1], hyp_words[k]
        if not hyp_words:
            hyp_words = [rng.choice(vocab)]
        pairs.append((" ".join(ref_words), " ".join(hyp_words)))
    return pairs


def load_ref_bleu():
    try:
        import sacrebleu

        return lambda hyps, refs: sacrebleu.corpus_bleu(
            hyps, [refs], tokenize="none", smooth_method="none"
        ).score
    except ImportError:
        pass
    path = os.environ["REF_BLEU_FILE"]
    # the single-file distribution imports portalocker and MeCab at module
    # level; neither is needed for untokenized scoring
    sys.modules.setdefault("portalocker", types.ModuleType("portalocker"))
    mecab = types.ModuleType("MeCab")
    mecab.Tagger = lambda *a, **k: types.SimpleNamespace(
        parse=lambda s: s,
        dictionary_info=lambda: types.SimpleNamespace(
            next=None, filename="ipadic", size=392126
        ),
    )
    sys.modules.setdefault("MeCab", mecab)
    spec = importlib.util.spec_from_file_location("ref_bleu", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return lambda hyps, refs: mod.corpus_bleu(
        hyps, [refs], tokenize="none", smooth_method="none"
    ).score


def load_ref_chrfpp():
    try:
        from torchmetrics.functional.text import chrf_score

        return lambda hyps, refs: 100.0 * float(
            chrf_score(hyps, [[r] for r in refs], n_word_order=2)
        )
    except ImportError:
        pass
    path = os.environ["REF_CHRF_FILE"]
    helper = types.ModuleType("torchmetrics.functional.text.helper")

    def _validate_inputs(ref_corpus, hypothesis_corpus):
        return ref_corpus, hypothesis_corpus

    helper._validate_inputs = _validate_inputs
    for name in (
        "torchmetrics",
        "torchmetrics.functional",
        "torchmetrics.functional.text",
    ):
        sys.modules.setdefault(name, types.ModuleType(name))
    sys.modules["torchmetrics.functional.text.helper"] = helper
    spec = importlib.util.spec_from_file_location("ref_chrf", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)

    def score(hyps, refs):
        value = mod.chrf_score(
            hyps, [[r] for r in refs], n_char_order=6, n_word_order=2, beta=2.0
        )
        return 100.0 * float(value)

    return score


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    pairs = build_fixture()
    fixture_path = DATA / "metric_fixture.tsv"
    fixture_path.write_text(
        "".join(f"{ref}\t{hyp}\n" for ref, hyp in pairs), encoding="utf-8"
    )
    refs = [ref for ref, _ in pairs]
    hyps = [hyp for _, hyp in pairs]
    ref_bleu = load_ref_bleu()
    ref_chrfpp = load_ref_chrfpp()
    golden = {
        "pairs": len(pairs),
        "bleu_whitespace": ref_bleu(hyps, refs),
        "bleu_first20": ref_bleu(hyps[:20], refs[:20]),
        "chrfpp": ref_chrfpp(hyps, refs),
        "chrfpp_first20": ref_chrfpp(hyps[:20], refs[:20]),
    }
    out = DATA / "golden_metrics.json"
    out.write_text(json.dumps(golden, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(golden, indent=2))


if __name__ == "__main__":
    main()
