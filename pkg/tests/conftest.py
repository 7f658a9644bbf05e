import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cswkit.corpus_io import (
    IntonationSegmentation,
    ParallelPair,
    Utterance,
    parse_pharaoh,
)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def cat_pair() -> ParallelPair:
    """en 'the cat | sat down' / ca 'el gat es va asseure' with a
    one-to-many link on 'sat'."""
    return ParallelPair(
        id="u1",
        en=Utterance("u1", "the cat sat down"),
        xx=Utterance("u1", "el gat es va asseure"),
        lang="ca",
        alignment=parse_pharaoh("0-0 1-1 2-2 2-3 3-4", 4, 5),
        segmentation=IntonationSegmentation(((0, 2), (2, 4))),
    )


@pytest.fixture
def metric_fixture():
    """The frozen 50-pair multilingual scoring fixture: (refs, hyps)."""
    pairs = [
        line.split("\t")
        for line in (DATA_DIR / "metric_fixture.tsv").read_text(encoding="utf-8").splitlines()
    ]
    return [p[0] for p in pairs], [p[1] for p in pairs]
