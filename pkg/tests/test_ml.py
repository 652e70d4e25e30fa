import math
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from morphseg.corpus import Corpus
from morphseg.errors import MorphsegError, UnsegmentableError
from morphseg.ml import (
    MorphStats,
    ml_cost,
    poisson,
    random_segment,
    reject,
    train_em,
    viterbi_segment,
)


def test_poisson_draws():
    rng = random.Random(3)
    draws = [poisson(rng, 5.5) for _ in range(20000)]
    assert all(isinstance(k, int) and k >= 0 for k in draws)
    mean = sum(draws) / len(draws)
    assert 5.2 < mean < 5.8
    replay = random.Random(3)
    assert [poisson(replay, 5.5) for _ in range(5)] == draws[:5]


def test_poisson_small_lambda_is_mostly_zero():
    rng = random.Random(0)
    draws = [poisson(rng, 0.05) for _ in range(500)]
    assert draws.count(0) > 400


def test_random_segment_basics():
    rng = random.Random(1)
    word = "susikoirajahti"
    morphs = random_segment(word, rng)
    assert "".join(morphs) == word
    assert all(morphs)
    assert random_segment(word, random.Random(1)) == morphs
    with pytest.raises(ValueError):
        random_segment("", rng)


@given(
    st.text(alphabet="abcde", min_size=1, max_size=20),
    st.integers(min_value=0, max_value=2 ** 30),
    st.floats(min_value=0.5, max_value=9.0),
)
@settings(max_examples=80, deadline=None)
def test_random_segment_always_covers_the_word(word, seed, mean):
    morphs = random_segment(word, random.Random(seed), mean)
    assert "".join(morphs) == word
    assert all(morphs)


def test_viterbi_prefers_longer_known_morphs():
    stats = MorphStats({"a": 1, "ab": 1, "b": 1, "c": 1}, 4, {})
    morphs, cost = viterbi_segment("abc", stats)
    assert morphs == ["ab", "c"]
    assert cost == 4.0


def test_viterbi_tie_prefers_fewer_morphs():
    # [aa] and [a, a] both cost 2 bits
    stats = MorphStats({"aa": 1, "a": 2, "x": 1}, 4, {})
    morphs, cost = viterbi_segment("aa", stats)
    assert morphs == ["aa"]
    assert cost == 2.0


def test_viterbi_tie_prefers_smallest_boundaries():
    # [a, aa] and [aa, a] both cost 2 bits with 2 morphs
    stats = MorphStats({"a": 1, "aa": 1}, 2, {})
    morphs, cost = viterbi_segment("aaa", stats)
    assert morphs == ["a", "aa"]
    assert cost == 2.0


def test_viterbi_unsegmentable():
    stats = MorphStats({"a": 1}, 1, {})
    with pytest.raises(UnsegmentableError):
        viterbi_segment("ab", stats)
    with pytest.raises(ValueError):
        viterbi_segment("", stats)


@st.composite
def viterbi_instances(draw):
    word = draw(st.text(alphabet="ab", min_size=1, max_size=8))
    substrings = {word[i:j] for i in range(len(word)) for j in range(i + 1, len(word) + 1)}
    pool = sorted(substrings | {"a", "b", "qq"})
    counts = {}
    for s in pool:
        if draw(st.booleans()):
            counts[s] = draw(st.integers(min_value=1, max_value=30))
    if not counts:
        counts = {"a": 1}
    return word, MorphStats(counts, sum(counts.values()), {})


@given(viterbi_instances())
@settings(max_examples=120, deadline=None)
def test_viterbi_matches_exhaustive_search(instance):
    word, stats = instance
    expected = oracles.exhaustive_viterbi(word, stats)
    if expected is None:
        with pytest.raises(UnsegmentableError):
            viterbi_segment(word, stats)
        return
    morphs, cost = viterbi_segment(word, stats)
    assert cost == expected[1]
    assert morphs == expected[0]
    assert "".join(morphs) == word


def test_reject_fixtures():
    assert reject(["halua", "n"], {}) is None
    assert reject(["halu", "a", "n"], {}) == "one-letter-sequence"
    assert reject(["halua", "n"], {"halua": 1}) == "rare-morph"
    # morphs used by several types are fine
    assert reject(["halua", "n"], {"halua": 2, "n": 14}) is None
    # the rare-morph check wins over the one-letter check
    assert reject(["halu", "a", "n"], {"a": 1}) == "rare-morph"
    # a lone single-letter morph is not a sequence
    assert reject(["o", "lisi"], {}) is None


def test_morph_stats_from_segmentation():
    seg = {"aab": ["a", "ab"], "ab": ["ab"]}
    stats = MorphStats.from_segmentation(seg, {"aab": 2, "ab": 3})
    assert stats.counts == {"a": 2, "ab": 5}
    assert stats.total == 7
    assert stats.type_usage == {"a": 1, "ab": 2}
    expected = 2 * math.log2(7 / 2) + 5 * math.log2(7 / 5)
    assert stats.corpus_bits() == pytest.approx(expected, rel=1e-12)


def test_ml_cost():
    corpus = Corpus.from_tokens(["ab", "ab"])
    assert ml_cost({"ab": ["a", "b"]}, corpus) == 4.0
    with pytest.raises(MorphsegError):
        ml_cost({}, corpus)


def test_train_em_requires_an_iteration(tiny_corpus):
    with pytest.raises(ValueError):
        train_em(tiny_corpus, iterations=0)


def test_train_em_segments_every_type(tiny_corpus):
    segmentation, stats = train_em(tiny_corpus, iterations=4, rng=random.Random(0))
    assert set(segmentation) == set(tiny_corpus.type_counts)
    for word, morphs in segmentation.items():
        assert "".join(morphs) == word
        assert all(morphs)
    assert stats.total == sum(
        len(segmentation[w]) * n for w, n in tiny_corpus.type_counts.items()
    )
    assert stats.counts


def test_train_em_is_deterministic(tiny_corpus):
    a = train_em(tiny_corpus, iterations=5, rng=random.Random(9))
    b = train_em(tiny_corpus, iterations=5, rng=random.Random(9))
    assert a[0] == b[0]
    assert a[1].counts == b[1].counts


def test_train_em_cost_log_and_monotonicity_without_rejection():
    from morphseg import synth

    tokens, _, _ = synth.generate(800, seed=0)
    corpus = Corpus.from_tokens(tokens)
    log = []
    train_em(corpus, iterations=6, rng=random.Random(0), use_rejection=False, cost_log=log)
    assert len(log) == 6
    for earlier, later in zip(log, log[1:]):
        assert later <= earlier + 1e-9


@given(
    st.lists(st.text(alphabet="abc", min_size=1, max_size=7), min_size=1, max_size=15),
    st.integers(min_value=0, max_value=2 ** 30),
)
@settings(max_examples=40, deadline=None)
def test_train_em_output_is_always_a_valid_segmentation(words, seed):
    corpus = Corpus.from_tokens(words)
    segmentation, stats = train_em(corpus, iterations=3, rng=random.Random(seed))
    assert set(segmentation) == set(corpus.type_counts)
    for word, morphs in segmentation.items():
        assert "".join(morphs) == word
    assert ml_cost(segmentation, corpus) == pytest.approx(stats.corpus_bits(), rel=1e-9)
