"""Scoring segmentations against reference morphological analyses.

A word's morphs are aligned with its reference labels by dynamic
programming over a grid that allows one-to-many and many-to-one pairings
while keeping both sides monotone and fully covered. The pairing distance
is d(M, L) = -log2 P(L | M) with conditionals estimated from token-weighted
co-alignment counts; alignments and distances are refined together EM-style
starting from a string-matching initialization. A frozen distance table
then scores held-out words, charging unseen pairs a maximal distance.
"""

import collections
import dataclasses
import logging
import math

from .errors import GoldParseError, MorphsegError

_logger = logging.getLogger(__name__)

_log2 = math.log2

DEFAULT_EXTRA_DISTANCE = 10.0
DEFAULT_EM_ITERS = 10
DEFAULT_EM_TOL = 1e-4


@dataclasses.dataclass(frozen=True)
class GoldEntry:
    """Reference labels of one word: base-form constituents then tags."""

    labels: tuple
    base_count: int


def parse_gold(lines, tag_filter=None, source="<gold>"):
    """Parse reference analyses from TSV lines.

    Line format: word, then tab, then base form (constituents joined by #)
    followed by space-separated tags. Tags absent from tag_filter are
    dropped (tag_filter None keeps everything). Words whose label list
    ends up empty are dropped with a warning.
    """
    gold = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise GoldParseError(
                "%s line %d: expected word<TAB>analysis" % (source, lineno)
            )
        word, analysis = parts
        fields = analysis.split()
        if not word or not fields:
            raise GoldParseError("%s line %d: empty word or analysis" % (source, lineno))
        bases = [b for b in fields[0].split("#") if b]
        if not bases:
            raise GoldParseError("%s line %d: empty base form" % (source, lineno))
        tags = fields[1:]
        if tag_filter is not None:
            tags = [t for t in tags if t in tag_filter]
        labels = bases + tags
        if word in gold:
            _logger.warning("%s line %d: duplicate analysis for %r kept first", source, lineno, word)
            continue
        gold[word] = GoldEntry(tuple(labels), len(bases))
    return gold


def load_gold(path, tag_filter=None):
    with open(path, encoding="utf-8") as f:
        return parse_gold(f, tag_filter, source=str(path))


def load_tag_filter(path):
    """Tags to keep, one per line."""
    with open(path, encoding="utf-8") as f:
        return {line.strip() for line in f if line.strip()}


@dataclasses.dataclass
class DistanceTable:
    """Pair distances in bits plus the charge for unseen pairs."""

    distances: dict  # (morph, label) -> bits
    max_distance: float

    def get(self, morph, label):
        return self.distances.get((morph, label), self.max_distance)

    def seen(self, morph, label):
        return (morph, label) in self.distances


def _align_grid(m, n, cell, better):
    """Shared DP over the m x n alignment grid.

    cell(i, j) is the score of pairing morph i with label j; every cell on
    the path is charged. Moves are diagonal, down (many-to-one) and right
    (one-to-many); ties prefer diagonal, then down. Returns the full score
    grid and a move grid for backtracing.
    """
    score = [[0.0] * n for _ in range(m)]
    move = [[0] * n for _ in range(m)]  # 1 diag, 2 down, 3 right
    for i in range(m):
        row = score[i]
        for j in range(n):
            here = cell(i, j)
            if i == 0 and j == 0:
                row[j] = here
                continue
            best = None
            mv = 0
            if i > 0 and j > 0:
                best = score[i - 1][j - 1]
                mv = 1
            if i > 0 and better(score[i - 1][j], best):
                best = score[i - 1][j]
                mv = 2
            if j > 0 and better(row[j - 1], best):
                best = row[j - 1]
                mv = 3
            row[j] = here + best
            move[i][j] = mv
    return score, move


def _backtrace(move, m, n):
    pairs = []
    i, j = m - 1, n - 1
    while True:
        pairs.append((i, j))
        mv = move[i][j]
        if mv == 0:
            break
        if mv == 1:
            i, j = i - 1, j - 1
        elif mv == 2:
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return pairs


def align_word(morphs, labels, table):
    """Minimum-distance alignment of morphs with labels.

    Returns (pairs, bits) where pairs is the ordered list of
    (morph index, label index) cells on the best path.
    """
    if not morphs or not labels:
        raise ValueError("both morphs and labels must be non-empty")

    def cell(i, j):
        return table.get(morphs[i], labels[j])

    def better(cand, cur):
        return cur is None or cand < cur

    score, move = _align_grid(len(morphs), len(labels), cell, better)
    pairs = _backtrace(move, len(morphs), len(labels))
    return pairs, score[-1][-1]


def _common_substring_len(a, b):
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    best = 0
    for ca in a:
        cur = [0] * (len(b) + 1)
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                cur[j] = prev[j - 1] + 1
                if cur[j] > best:
                    best = cur[j]
        prev = cur
    return best


def _string_match_align(morphs, entry):
    """Initial alignment: maximize substring similarity to base labels.

    The pairing score of a morph with a base-form label is the length of
    their longest common substring (case-insensitive) over the longer
    length; pairings with tag labels score zero.
    """
    labels = entry.labels
    folded = [m.casefold() for m in morphs]

    def cell(i, j):
        if j >= entry.base_count:
            return 0.0
        a, b = folded[i], labels[j].casefold()
        return _common_substring_len(a, b) / max(len(a), len(b))

    def better(cand, cur):
        return cur is None or cand > cur

    _, move = _align_grid(len(morphs), len(labels), cell, better)
    return _backtrace(move, len(morphs), len(labels))


def _accumulate(words, alignments, segmented, gold, token_counts):
    """Token-weighted pair and morph tallies from current alignments.

    A word token containing morph M counts once toward c(M) and once
    toward c(M, L) for each distinct label L aligned with M in it.
    """
    pair_counts = collections.Counter()
    morph_counts = collections.Counter()
    for word in words:
        weight = token_counts[word]
        morphs = segmented[word]
        labels = gold[word].labels
        for morph, label in {(morphs[i], labels[j]) for i, j in alignments[word]}:
            pair_counts[(morph, label)] += weight
        for morph in set(morphs):
            morph_counts[morph] += weight
    return pair_counts, morph_counts


def _build_table(pair_counts, morph_counts, extra, max_distance):
    distances = {}
    for (morph, label), c in pair_counts.items():
        c_m = morph_counts[morph]
        distances[(morph, label)] = 0.0 if c == c_m else _log2(c_m / c)
    observed = max(distances.values(), default=0.0)
    if max_distance is None:
        d_max = observed + extra
    else:
        if max_distance < observed:
            raise MorphsegError(
                "max distance %.3f is below the largest observed distance %.3f"
                % (max_distance, observed)
            )
        d_max = max_distance
    return DistanceTable(distances, d_max)


def em_align(
    segmented,
    gold,
    token_counts,
    max_iters=DEFAULT_EM_ITERS,
    tol=DEFAULT_EM_TOL,
    extra_distance=DEFAULT_EXTRA_DISTANCE,
    max_distance=None,
    distance_log=None,
):
    """Fit a DistanceTable to segmented words with reference analyses.

    Alternates between estimating pair distances from the current
    alignments and realigning every word under the new distances, starting
    from string-matching alignments, until the token-weighted total
    distance improves by less than tol relative or max_iters is reached.
    Words without a reference analysis are skipped with a warning.
    distance_log, if given, is appended with the total distance after each
    realignment.
    """
    words = []
    for word in segmented:
        if word in gold:
            words.append(word)
        else:
            _logger.warning("no reference analysis for %r; skipped", word)
    if not words:
        raise MorphsegError("no overlap between segmentation and reference analyses")
    for word in words:
        if word not in token_counts:
            raise MorphsegError("no token count for %r" % (word,))

    alignments = {w: _string_match_align(segmented[w], gold[w]) for w in words}
    table = None
    prev_total = None
    for _ in range(max_iters):
        pair_counts, morph_counts = _accumulate(
            words, alignments, segmented, gold, token_counts
        )
        table = _build_table(pair_counts, morph_counts, extra_distance, max_distance)
        total = 0.0
        for word in words:
            pairs, bits = align_word(segmented[word], gold[word].labels, table)
            alignments[word] = pairs
            total += token_counts[word] * bits
        if distance_log is not None:
            distance_log.append(total)
        if prev_total is not None and prev_total - total < tol * max(prev_total, 1e-12):
            break
        prev_total = total
    return table


@dataclasses.dataclass
class EvalResult:
    alignment_distance_bits: float
    unseen_pair_pct: float
    aligned_pairs: int
    unseen_pairs: int
    alignments: dict  # word -> list of (morph index, label index)


def score_segmentation(segmented, gold, token_counts, table):
    """Token-weighted alignment distance of words under a frozen table.

    Pairs absent from the table are charged table.max_distance and counted
    as unseen. Words without a reference analysis are skipped.
    """
    total = 0.0
    pair_total = 0
    unseen = 0
    alignments = {}
    skipped = 0
    for word, morphs in segmented.items():
        entry = gold.get(word)
        if entry is None:
            skipped += 1
            continue
        weight = token_counts[word]
        pairs, bits = align_word(morphs, entry.labels, table)
        alignments[word] = pairs
        total += weight * bits
        pair_total += weight * len(pairs)
        for i, j in pairs:
            if not table.seen(morphs[i], entry.labels[j]):
                unseen += weight
    if skipped:
        _logger.warning("%d words lacked reference analyses and were skipped", skipped)
    if pair_total == 0:
        raise MorphsegError("nothing to score: no scored words")
    return EvalResult(
        alignment_distance_bits=total,
        unseen_pair_pct=100.0 * unseen / pair_total,
        aligned_pairs=pair_total,
        unseen_pairs=unseen,
        alignments=alignments,
    )


def evaluate(
    train_seg,
    test_seg,
    gold,
    train_counts,
    test_counts,
    max_iters=DEFAULT_EM_ITERS,
    extra_distance=DEFAULT_EXTRA_DISTANCE,
    max_distance=None,
):
    """Fit distances on the training segmentation, score the test one."""
    table = em_align(
        train_seg,
        gold,
        train_counts,
        max_iters=max_iters,
        extra_distance=extra_distance,
        max_distance=max_distance,
    )
    return score_segmentation(test_seg, gold, test_counts, table), table


def format_alignment(word, morphs, labels, pairs):
    """One dump line: word, then each morph with its aligned labels."""
    by_morph = collections.defaultdict(list)
    for i, j in pairs:
        by_morph[i].append(labels[j])
    cells = ["%s:%s" % (morphs[i], "+".join(by_morph[i])) for i in sorted(by_morph)]
    return "%s\t%s" % (word, " ".join(cells))
