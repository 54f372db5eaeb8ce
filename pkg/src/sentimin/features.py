"""Vocabulary construction, document-frequency pruning and TF-IDF vectors."""

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from .errors import EmptyCorpus, InputError, UnknownTerm

DEFAULT_MIN_DF = 0.0099
DEFAULT_MAX_DF = 0.90


@dataclass(frozen=True)
class PruneBounds:
    min_df_ratio: float = DEFAULT_MIN_DF
    max_df_ratio: float = DEFAULT_MAX_DF

    def __post_init__(self):
        if not 0.0 <= self.min_df_ratio <= self.max_df_ratio <= 1.0:
            raise ValueError(
                f"prune bounds must satisfy 0 <= min <= max <= 1, "
                f"got ({self.min_df_ratio}, {self.max_df_ratio})"
            )

    def contains(self, df, n_docs):
        # exact rational comparison: 99/10000 sits on the 0.0099 bound, not beside it
        ratio = Fraction(df, n_docs)
        return _exact(self.min_df_ratio) <= ratio <= _exact(self.max_df_ratio)


def _exact(bound):
    return Fraction(repr(float(bound)))


class Vocabulary:
    """Lexicographically ordered terms with their document frequencies."""

    def __init__(self, df, n_docs):
        if n_docs < 0:
            raise ValueError("n_docs must be >= 0")
        for term, count in df.items():
            if not 1 <= count <= n_docs:
                raise ValueError(f"df({term!r})={count} outside [1, {n_docs}]")
        self.terms = tuple(sorted(df))
        self.df = MappingProxyType({t: df[t] for t in self.terms})
        self.n_docs = n_docs
        self._index = {t: i for i, t in enumerate(self.terms)}

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self._index

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self.n_docs == other.n_docs and dict(self.df) == dict(other.df)

    def __repr__(self):
        return f"Vocabulary({len(self.terms)} terms, n_docs={self.n_docs})"

    def index(self, term):
        return self._index[term]

    def to_dict(self):
        return {
            "n_docs": self.n_docs,
            "terms": [{"term": t, "df": self.df[t]} for t in self.terms],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            df = {}
            for entry in data["terms"]:
                term, count = entry["term"], entry["df"]
                if not isinstance(term, str) or not isinstance(count, int) or term in df:
                    raise ValueError(f"bad vocabulary entry {entry!r}")
                df[term] = count
            n_docs = data["n_docs"]
            if not isinstance(n_docs, int):
                raise ValueError("n_docs must be an integer")
            return cls(df, n_docs)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"invalid vocabulary: {exc}") from exc

    def to_json(self):
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid vocabulary JSON: {exc}") from exc
        return cls.from_dict(data)


def build_vocabulary(docs):
    """Collect every distinct token with the number of documents holding it."""
    docs = list(docs)
    if not docs:
        raise EmptyCorpus("document collection")
    df = Counter()
    for tokens in docs:
        df.update(set(tokens))
    return Vocabulary(dict(df), len(docs))


def prune_by_df(vocab, bounds=None):
    """Keep terms whose df / n_docs lies inside ``bounds`` (inclusive)."""
    bounds = bounds or PruneBounds()
    if vocab.n_docs == 0:
        return vocab
    kept = {t: c for t, c in vocab.df.items() if bounds.contains(c, vocab.n_docs)}
    return Vocabulary(kept, vocab.n_docs)


def idf(vocab, term):
    try:
        df = vocab.df[term]
    except KeyError:
        raise UnknownTerm(term) from None
    return math.log(vocab.n_docs / df)


def tfidf_vector(tokens, vocab):
    """Sparse ``{term: raw count * idf}``; zero weights and unknown tokens dropped."""
    counts = Counter(t for t in tokens if t in vocab)
    vector = {}
    for term in sorted(counts):
        weight = counts[term] * idf(vocab, term)
        if weight > 0.0:
            vector[term] = weight
    return vector
