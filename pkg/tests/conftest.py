"""Shared fixtures: a tiny synthetic corpus and small alphabets/networks."""

import numpy as np
import pytest

from e2e_ner.alphabet import build_alphabet
from e2e_ner.corpus import CorpusSpec, SplitCounts, generate_corpus, write_corpus
from e2e_ner.net import NetConfig

SMALL_BASE = " ab"


@pytest.fixture
def tiny_spec() -> CorpusSpec:
    return CorpusSpec(
        counts=SplitCounts(train=8, dev=3, test=3, asr_only=3),
        feature_dim=6,
        max_clauses=2,
        noise=0.1,
        seed=5,
    )


@pytest.fixture
def tiny_corpus(tmp_path, tiny_spec):
    return write_corpus(tmp_path / "corpus", tiny_spec, generate_corpus(tiny_spec))


@pytest.fixture
def base_alphabet():
    return build_alphabet()


@pytest.fixture
def tagged_alphabet():
    return build_alphabet(tag_set_enabled=True)


@pytest.fixture
def small_alphabet():
    """Blank, space, 'a' and 'b': small enough for exhaustive checks."""
    return build_alphabet(SMALL_BASE)


@pytest.fixture
def small_net_config():
    return NetConfig(
        feature_dim=6,
        conv_channels=8,
        hidden_size=6,
        n_recurrent=1,
        batch_size=4,
        epochs=1,
        learning_rate=0.01,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
