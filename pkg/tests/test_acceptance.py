"""Acceptance gate: one test per release criterion.

Each test prints a single ``[PASS]``/``[FAIL]``/``[SKIP]`` line naming its
criterion (visible with ``pytest -s`` or in captured output on failure).
"""

import functools
import itertools
import json
import os
import random
import urllib.error
import urllib.request

import pytest

from cswkit import cli
from cswkit.corpus_io import parse_dataset, parse_parallel_tsv
from cswkit.harness import RAW_INPUT_MODEL, EvalConfig, run_evaluation
from cswkit.metrics import TAG_L1, TAG_L2, corpus_stats
from cswkit.mt_eval import (
    BaselineKind,
    Setting,
    bleu,
    chrf_pp,
    replacement_rate,
    spearman_rho,
)
from cswkit.synthesis import (
    REJECT_EQUALS_SOURCE,
    Rejection,
    assemble_pairs,
    replace_ius,
    select_iu_indices,
    synthesize_corpus,
)
from conftest import DATA_DIR
from corpus_fixtures import build_fixture_corpus
from test_synthesis import (
    _nonconsecutive_subsets,
    brute_force_replace,
    random_small_pair,
)

GOLDEN = json.loads((DATA_DIR / "golden_metrics.json").read_text())

# Expected released-data statistics per language:
# (count, pct_l1, pct_l2, cmi, spf)
RELEASED_TEST_SPLIT_STATS = {
    "ar": (5176, 55.20, 44.80, 32.89, 0.17),
    "ca": (5137, 51.02, 48.98, 33.54, 0.16),
    "cy": (5150, 52.37, 47.63, 33.32, 0.16),
    "de": (5138, 50.65, 49.35, 33.71, 0.15),
    "et": (5153, 55.71, 44.29, 32.76, 0.17),
    "fa": (5174, 52.07, 47.93, 33.43, 0.16),
    "id": (5128, 53.32, 46.68, 33.37, 0.16),
    "lv": (5176, 54.71, 45.29, 33.04, 0.17),
    "mn": (5152, 55.23, 44.77, 32.88, 0.17),
    "sl": (5158, 53.98, 46.02, 33.29, 0.17),
    "sv": (4813, 52.06, 47.94, 33.32, 0.16),
    "ta": (5161, 55.52, 44.48, 32.84, 0.17),
    "tr": (5154, 56.07, 43.93, 32.82, 0.18),
}

RELEASED_DATA_ENV = "CSW_RELEASED_TEST_DIR"
RELEASED_DATA_HOST = "https://huggingface.co"


def criterion(name):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except pytest.skip.Exception:
                print(f"\n[SKIP] {name}", flush=True)
                raise
            except BaseException:
                print(f"\n[FAIL] {name}", flush=True)
                raise
            print(f"\n[PASS] {name}", flush=True)
            return result
        return wrapper
    return deco


@criterion("released-data statistics reproduction")
def test_released_data_statistics():
    """`stats` on the published test split must reproduce Count exactly and
    %L1/%L2/CMI/SPF within +/-0.05 under macro or micro aggregation, for
    all 13 languages, in under a minute."""
    data_dir = os.environ.get(RELEASED_DATA_ENV)
    if not data_dir:
        try:
            urllib.request.urlopen(RELEASED_DATA_HOST, timeout=5)
        except (urllib.error.URLError, OSError):
            pytest.skip(
                "released dataset unavailable: no network access to the "
                f"hosting service and {RELEASED_DATA_ENV} is not set; "
                "expected per-language statistics remain encoded in "
                "RELEASED_TEST_SPLIT_STATS and this test runs unchanged "
                "once the data is present"
            )
        pytest.skip(
            f"{RELEASED_DATA_ENV} not set; point it at a directory with "
            "<iso>.tsv dataset files converted from the released test split"
        )
    import time

    start = time.monotonic()
    for iso, (count, pct_l1, pct_l2, cmi, spf) in RELEASED_TEST_SPLIT_STATS.items():
        path = os.path.join(data_dir, f"{iso}.tsv")
        records = parse_dataset(open(path, encoding="utf-8").read())
        stats = corpus_stats(records)
        assert stats.count == count, iso
        ok = False
        for mode_cmi, mode_spf in (
            (stats.cmi_macro, stats.spf_macro),
            (stats.cmi_micro, stats.spf_micro),
        ):
            ok = ok or (
                abs(stats.pct_l1 - pct_l1) <= 0.05
                and abs(stats.pct_l2 - pct_l2) <= 0.05
                and abs(mode_cmi - cmi) <= 0.05
                and abs(mode_spf - spf) <= 0.05
            )
        assert ok, f"{iso}: no aggregation mode matches the published row"
    assert time.monotonic() - start < 60.0


@criterion("synthesis plausibility bands on a 600-transcript fixture")
def test_synthesis_plausibility_bands():
    fx = build_fixture_corpus(600, seed=7)
    records, _ = parse_parallel_tsv(fx.parallel_tsv)
    pairs, load = assemble_pairs(
        records, fx.alignment.splitlines(), fx.iu_transcripts.splitlines(), "ca"
    )
    assert load.accepted == 600

    # the fixture must exhibit the intended IU profile
    iu_counts = [len(p.segmentation) for p in pairs]
    mean_iu = sum(iu_counts) / len(iu_counts)
    assert 1.4 <= mean_iu <= 1.5, mean_iu

    sentences, _ = synthesize_corpus(pairs, seed=7)
    stats = corpus_stats(sentences)
    assert 30.0 <= stats.cmi <= 36.0, stats.cmi
    assert 0.13 <= stats.spf <= 0.20, stats.spf
    assert 48.0 <= stats.pct_l1 <= 58.0, stats.pct_l1

    ratio = len(sentences) / fx.multi_iu_records
    assert 1.2 <= ratio <= 1.6, ratio


@criterion("IU-selection oracle: nonconsecutive preference and uniformity")
def test_iu_selection_oracle():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = random.Random(20240824)
    draws_per_cell = 2_000
    for n in range(2, 9):
        for r in range(1, n):
            nc = _nonconsecutive_subsets(n, r)
            pool = nc or list(itertools.combinations(range(n), r))
            counts = {combo: 0 for combo in pool}
            for _ in range(draws_per_cell):
                combo = select_iu_indices(n, r, rng)
                if nc:
                    assert all(b - a > 1 for a, b in zip(combo, combo[1:])), (
                        f"adjacent indices drawn for n={n} r={r}: {combo}"
                    )
                counts[combo] += 1
            if len(pool) > 1:
                result = scipy_stats.chisquare(list(counts.values()))
                assert result.pvalue > 0.01, (n, r, result.pvalue)


@criterion("replacement algorithm: hand examples + 10,000-pair brute force")
def test_replacement_algorithm_suite(cat_pair):
    # hand-simulated examples
    first = replace_ius(cat_pair, {0})
    assert first.tokens == ("el", "gat", "sat", "down")
    assert first.tags == (TAG_L2, TAG_L2, TAG_L1, TAG_L1)

    second = replace_ius(cat_pair, {1})
    assert second.tokens == ("the", "cat", "es", "va", "asseure")
    assert second.tags == (TAG_L1, TAG_L1, TAG_L2, TAG_L2, TAG_L2)

    from cswkit.corpus_io import (
        IntonationSegmentation,
        ParallelPair,
        Utterance,
        parse_pharaoh,
    )

    nasa = ParallelPair(
        id="nasa",
        en=Utterance("nasa", "NASA launched"),
        xx=Utterance("nasa", "NASA va llançar"),
        lang="ca",
        alignment=parse_pharaoh("0-0", 2, 3),
        segmentation=IntonationSegmentation(((0, 1), (1, 2))),
    )
    assert replace_ius(nasa, {0}) == Rejection(REJECT_EQUALS_SOURCE)

    # randomized brute-force comparison
    rng = random.Random(20240824)
    outcomes = {"accepted": 0, "no_l2": 0, "equals_source": 0}
    for _ in range(10_000):
        pair, indices = random_small_pair(rng)
        expected = brute_force_replace(pair, indices)
        actual = replace_ius(pair, indices)
        if isinstance(expected, str):
            assert actual == Rejection(expected)
            outcomes[expected] += 1
        else:
            assert list(actual.tokens) == expected[0]
            assert list(actual.tags) == expected[1]
            outcomes["accepted"] += 1
    assert all(v > 0 for v in outcomes.values()), outcomes


@criterion("metric oracle equivalence: BLEU +/-0.01, chrF++ +/-0.1")
def test_metric_oracle_equivalence(metric_fixture):
    refs, hyps = metric_fixture
    assert len(refs) == GOLDEN["pairs"] == 50
    assert bleu(
        [h.split() for h in hyps], [r.split() for r in refs]
    ) == pytest.approx(GOLDEN["bleu_whitespace"], abs=0.01)
    assert bleu(
        [h.split() for h in hyps[:20]], [r.split() for r in refs[:20]]
    ) == pytest.approx(GOLDEN["bleu_first20"], abs=0.01)
    assert chrf_pp(hyps, refs) == pytest.approx(GOLDEN["chrfpp"], abs=0.1)
    assert chrf_pp(hyps[:20], refs[:20]) == pytest.approx(
        GOLDEN["chrfpp_first20"], abs=0.1
    )


@criterion("diagnostic anchors: copy system, disjoint output, spearman")
def test_diagnostic_anchors(tmp_path):
    from test_harness import build_world

    config_path, sentences = build_world(tmp_path)
    report = run_evaluation(EvalConfig.from_file(config_path))

    copy = report.system("ca", Setting.CSW_TO_EN, "copy")
    assert copy.replacement_rate == 0.0
    raw = report.system("ca", Setting.CSW_TO_EN, RAW_INPUT_MODEL)
    assert raw is not None
    raw_deltas = [
        d for d in report.deltas
        if d.model == "copy" and d.baseline is BaselineKind.RAW_CSW_INPUT
    ]
    assert raw_deltas and all(d.delta == 0.0 for d in raw_deltas)

    disjoint = ["qqq www zzz"] * len(sentences)
    assert replacement_rate(sentences, disjoint, target="l1") == 100.0
    assert replacement_rate(sentences, disjoint, target="l2") == 100.0

    assert spearman_rho([1, 4, 9, 16], [2, 3, 5, 7]) == pytest.approx(1.0)
    assert spearman_rho([1, 4, 9, 16], [-2, -3, -5, -7]) == pytest.approx(-1.0)


@criterion("determinism: byte-identical synthesis across runs and job counts")
def test_synthesis_determinism(tmp_path):
    fx = build_fixture_corpus(120, seed=11)
    (tmp_path / "parallel.tsv").write_text(fx.parallel_tsv, encoding="utf-8")
    (tmp_path / "aligned.txt").write_text(fx.alignment, encoding="utf-8")
    (tmp_path / "ius.txt").write_text(fx.iu_transcripts, encoding="utf-8")

    def run(out, jobs):
        code = cli.main([
            "synthesize",
            "--parallel", str(tmp_path / "parallel.tsv"),
            "--align", str(tmp_path / "aligned.txt"),
            "--iu", str(tmp_path / "ius.txt"),
            "--lang", "ca", "--seed", "1234",
            "--out", str(tmp_path / out),
            "--jobs", str(jobs),
        ])
        assert code == cli.EXIT_OK
        return (tmp_path / out).read_bytes()

    first = run("a.tsv", 1)
    assert first == run("b.tsv", 1)
    assert first == run("c.tsv", 8)
    assert parse_dataset(first.decode("utf-8"))
