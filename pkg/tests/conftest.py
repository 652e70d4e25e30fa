import sys
from pathlib import Path

import pytest

from morphseg import synth
from morphseg.corpus import Corpus

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable


def synthetic_corpus(n_tokens, seed=0):
    """(Corpus, gold dict lines, affix tags) from the bundled generator."""
    tokens, gold_lines, tags = synth.generate(n_tokens, seed=seed)
    return Corpus.from_tokens(tokens), gold_lines, tags


@pytest.fixture
def tiny_corpus():
    return Corpus.from_tokens(
        ["cats", "dogs", "cat", "dog", "cats", "walked", "walking", "walks"]
    )
