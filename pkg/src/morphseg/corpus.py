"""Corpus loading and preprocessing.

Tokens are whitespace-delimited. A token is kept only if every character
belongs to the configured alphabet; otherwise the whole token is dropped.
"""

import collections
import dataclasses
import logging

from .errors import EmptyCorpusError, CorpusSizeError, MorphsegError

_logger = logging.getLogger(__name__)

# Preset alphabets. Both stay within the 32 codable characters implied by
# the default 5 bits per character of the MDL codebook cost.
ALPHABETS = {
    "english": frozenset("abcdefghijklmnopqrstuvwxyz'-"),
    "finnish": frozenset("abcdefghijklmnopqrstuvwxyzåäö-"),
}


@dataclasses.dataclass(frozen=True)
class PreprocessConfig:
    """How raw text is normalized before tokens enter a model.

    alphabet: set of allowed characters; tokens containing anything else
        are dropped entirely.
    lowercase: lowercase the text before filtering.
    """

    alphabet: frozenset = ALPHABETS["english"]
    lowercase: bool = True

    def __post_init__(self):
        if not self.alphabet:
            raise ValueError("alphabet must not be empty")
        for ch in self.alphabet:
            if len(ch) != 1:
                raise ValueError("alphabet entries must be single characters: %r" % (ch,))


@dataclasses.dataclass(frozen=True)
class Corpus:
    """An ordered token sequence plus type counts derived from it."""

    tokens: tuple
    type_counts: dict

    @classmethod
    def from_tokens(cls, tokens):
        tokens = tuple(tokens)
        return cls(tokens, dict(collections.Counter(tokens)))

    def __len__(self):
        return len(self.tokens)


def load_corpus(lines, config=None):
    """Tokenize an iterable of text lines into a Corpus.

    Raises EmptyCorpusError if no token survives filtering.
    """
    config = config or PreprocessConfig()
    alphabet = config.alphabet
    tokens = []
    dropped = 0
    for line in lines:
        if config.lowercase:
            line = line.lower()
        for token in line.split():
            if set(token) <= alphabet:
                tokens.append(token)
            else:
                dropped += 1
    if dropped:
        _logger.info("dropped %d tokens with out-of-alphabet characters", dropped)
    if not tokens:
        raise EmptyCorpusError("no tokens left after preprocessing")
    return Corpus.from_tokens(tokens)


def read_corpus(path, config=None):
    """load_corpus over a UTF-8 text file."""
    try:
        with open(path, encoding="utf-8") as f:
            return load_corpus(f, config)
    except UnicodeDecodeError as exc:
        raise MorphsegError("%s is not valid UTF-8: %s" % (path, exc)) from exc


def split_corpus(corpus, n_train, n_test):
    """Split off the first n_train tokens for training and the next n_test for testing."""
    if n_train < 1:
        raise EmptyCorpusError("training split must contain at least one token")
    if n_test < 1:
        raise EmptyCorpusError("test split must contain at least one token")
    if n_train + n_test > len(corpus.tokens):
        raise CorpusSizeError(
            "corpus has %d tokens, need %d" % (len(corpus.tokens), n_train + n_test)
        )
    train = Corpus.from_tokens(corpus.tokens[:n_train])
    test = Corpus.from_tokens(corpus.tokens[n_train : n_train + n_test])
    return train, test


def truncate(corpus, n_tokens):
    """A corpus holding only the first n_tokens tokens."""
    if n_tokens < 1:
        raise EmptyCorpusError("cannot truncate to an empty corpus")
    if n_tokens > len(corpus.tokens):
        raise CorpusSizeError(
            "corpus has %d tokens, requested %d" % (len(corpus.tokens), n_tokens)
        )
    return Corpus.from_tokens(corpus.tokens[:n_tokens])
