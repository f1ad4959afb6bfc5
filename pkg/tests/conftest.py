from __future__ import annotations

import pytest

from bahnaric_mt.corpus import load_dictionary, load_parallel_corpus
from mt_testing import DATA_DIR


@pytest.fixture(scope="session")
def toy_dictionary():
    return load_dictionary(DATA_DIR / "toy_dictionary.json")


@pytest.fixture(scope="session")
def toy_corpus():
    return load_parallel_corpus(DATA_DIR / "toy_corpus.tsv", "tsv")
