"""Batch maximum-likelihood segmentation via Viterbi EM.

Word types start from random segmentations with Poisson-distributed
segment lengths. Each iteration re-estimates morph probabilities from the
current segmentations and then resegments every word type with the Viterbi
algorithm under the frozen estimates. Pure ML assigns new morphs infinite
cost, so random resegmentation of rejected words is the only mechanism
that introduces new morphs into the lexicon.
"""

import collections
import dataclasses
import logging
import math
import random

from .errors import UnsegmentableError, MorphsegError

_logger = logging.getLogger(__name__)

_log2 = math.log2

DEFAULT_SEED = 42
DEFAULT_INTERVAL_MEAN = 5.5


@dataclasses.dataclass
class MorphStats:
    """Token-weighted morph counts plus per-type usage tallies.

    counts: morph -> number of morph tokens across the corpus.
    total: sum of counts.
    type_usage: morph -> number of distinct word types using it.
    """

    counts: dict
    total: int
    type_usage: dict

    @classmethod
    def from_segmentation(cls, segmentation, type_counts):
        counts = collections.Counter()
        usage = collections.Counter()
        for word, n in type_counts.items():
            morphs = segmentation[word]
            for m in morphs:
                counts[m] += n
            for m in set(morphs):
                usage[m] += 1
        return cls(dict(counts), sum(counts.values()), dict(usage))

    def corpus_bits(self):
        """sum over morph tokens of -log2 p(morph), p by maximum likelihood."""
        total = self.total
        return math.fsum(c * _log2(total / c) for c in self.counts.values())


def poisson(rng, lam):
    """One Poisson draw by CDF inversion from the given generator."""
    u = rng.random()
    p = math.exp(-lam)
    cum = p
    k = 0
    while u > cum:
        k += 1
        p *= lam / k
        cum += p
    return k


def random_segment(word, rng, mean_interval=DEFAULT_INTERVAL_MEAN):
    """Split a word at random intervals drawn from Poisson(mean_interval).

    Zero draws are redrawn; an interval reaching the end of the word stops
    the splitting, so every morph is non-empty.
    """
    if not word:
        raise ValueError("cannot segment an empty word")
    morphs = []
    pos = 0
    n = len(word)
    while True:
        k = poisson(rng, mean_interval)
        while k == 0:
            k = poisson(rng, mean_interval)
        if k >= n - pos:
            morphs.append(word[pos:])
            return morphs
        morphs.append(word[pos : pos + k])
        pos += k


def viterbi_segment(word, stats):
    """Cheapest segmentation of a word into known morphs.

    Returns (morphs, cost in bits). Ties are broken first toward fewer
    morphs, then toward the lexicographically smallest boundary tuple.
    Raises UnsegmentableError when no concatenation of known morphs
    yields the word.
    """
    if not word:
        raise ValueError("cannot segment an empty word")
    counts = stats.counts
    total = stats.total
    n = len(word)
    # state per prefix length: (cost, morph count, boundary tuple)
    best = [None] * (n + 1)
    best[0] = (0.0, 0, ())
    for end in range(1, n + 1):
        winner = None
        for start in range(end):
            prev = best[start]
            if prev is None:
                continue
            c = counts.get(word[start:end])
            if c is None:
                continue
            bounds = prev[2] + (start,) if start else prev[2]
            cand = (prev[0] + _log2(total / c), prev[1] + 1, bounds)
            if winner is None or cand < winner:
                winner = cand
        best[end] = winner
    if best[n] is None:
        raise UnsegmentableError("no known morphs cover %r" % (word,))
    cost, _, bounds = best[n]
    edges = (0,) + bounds + (n,)
    morphs = [word[edges[i] : edges[i + 1]] for i in range(len(edges) - 1)]
    return morphs, cost


def reject(morphs, prev_type_usage):
    """Reason to reject a proposed segmentation, or None to accept.

    Rejects morphs that were used by exactly one word type in the previous
    iteration, and runs of two or more single-letter morphs.
    """
    for m in morphs:
        if prev_type_usage.get(m) == 1:
            return "rare-morph"
    for prev, cur in zip(morphs, morphs[1:]):
        if len(prev) == 1 and len(cur) == 1:
            return "one-letter-sequence"
    return None


def ml_cost(segmentation, corpus):
    """Corpus cost in bits of a segmentation under its own ML estimates."""
    counts = collections.Counter()
    for word, n in corpus.type_counts.items():
        morphs = segmentation.get(word)
        if morphs is None:
            raise MorphsegError("segmentation is missing corpus word %r" % (word,))
        for m in morphs:
            counts[m] += n
    total = sum(counts.values())
    return math.fsum(c * _log2(total / c) for c in counts.values())


def train_em(
    corpus,
    iterations=10,
    rng=None,
    mean_interval=DEFAULT_INTERVAL_MEAN,
    use_rejection=True,
    cost_log=None,
):
    """Segment all corpus word types by iterated Viterbi re-estimation.

    Returns (segmentation dict, MorphStats of the final segmentation).
    With use_rejection, dubious Viterbi outputs are replaced by fresh
    random segmentations except on the final iteration; with it off the
    per-iteration ml_cost is non-increasing.
    """
    if iterations < 1:
        raise ValueError("need at least one iteration")
    rng = rng or random.Random(DEFAULT_SEED)
    segmentation = {
        word: random_segment(word, rng, mean_interval) for word in corpus.type_counts
    }
    for it in range(iterations):
        final = it == iterations - 1
        stats = MorphStats.from_segmentation(segmentation, corpus.type_counts)
        resegmented = {}
        rejected = 0
        for word in segmentation:
            try:
                morphs, _ = viterbi_segment(word, stats)
            except UnsegmentableError:
                if final or not use_rejection:
                    resegmented[word] = segmentation[word]
                else:
                    resegmented[word] = random_segment(word, rng, mean_interval)
                continue
            if use_rejection and not final:
                reason = reject(morphs, stats.type_usage)
                if reason:
                    morphs = random_segment(word, rng, mean_interval)
                    rejected += 1
            resegmented[word] = morphs
        segmentation = resegmented
        if cost_log is not None:
            cost_log.append(ml_cost(segmentation, corpus))
        if rejected:
            _logger.info("iteration %d: %d segmentations rejected", it + 1, rejected)
    return segmentation, MorphStats.from_segmentation(segmentation, corpus.type_counts)
