"""Two-class multinomial Naive Bayes in log space with additive smoothing."""

import json
import math
from collections import Counter
from dataclasses import dataclass

from .corpus import LABELS, Label
from .errors import EmptyVocabulary, InputError, MissingClass
from .features import Vocabulary, tfidf_vector

WEIGHTINGS = ("counts", "tfidf")
MODEL_FORMAT = "sentimin-nb/1"


@dataclass(frozen=True)
class Prediction:
    label: Label
    log_score: dict
    posterior: dict


class NbModel:
    """Trained parameters. Treat as immutable once built."""

    def __init__(self, class_log_prior, cond_log_prob, alpha, vocab, weighting="counts"):
        if weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}")
        self.class_log_prior = dict(class_log_prior)
        self.cond_log_prob = {label: dict(table) for label, table in cond_log_prob.items()}
        self.alpha = alpha
        self.vocab = vocab
        self.weighting = weighting
        self.label_order = LABELS

    def evidence(self, tokens):
        """Per-term evidence weights of a document, sorted by term."""
        if self.weighting == "tfidf":
            return tfidf_vector(tokens, self.vocab)
        counts = Counter(t for t in tokens if t in self.vocab)
        return {t: counts[t] for t in sorted(counts)}

    def to_dict(self):
        return {
            "format": MODEL_FORMAT,
            "alpha": self.alpha,
            "weighting": self.weighting,
            "labels": [label.value for label in self.label_order],
            "log_priors": {label.value: self.class_log_prior[label] for label in self.label_order},
            "vocab_ref": self.vocab.to_dict(),
            "cond_log_prob": {
                label.value: {t: self.cond_log_prob[label][t] for t in self.vocab.terms}
                for label in self.label_order
            },
        }

    @classmethod
    def from_dict(cls, data):
        try:
            if data.get("format") != MODEL_FORMAT:
                raise ValueError(f"unsupported model format {data.get('format')!r}")
            labels = [Label.parse(v) for v in data["labels"]]
            if tuple(labels) != LABELS:
                raise ValueError(f"labels must be {[l.value for l in LABELS]}")
            vocab = Vocabulary.from_dict(data["vocab_ref"])
            priors = {label: float(data["log_priors"][label.value]) for label in LABELS}
            cond = {}
            for label in LABELS:
                table = data["cond_log_prob"][label.value]
                if set(table) != set(vocab.terms):
                    raise ValueError(f"cond_log_prob[{label.value}] does not match the vocabulary")
                cond[label] = {t: float(table[t]) for t in vocab.terms}
            return cls(priors, cond, float(data["alpha"]), vocab, data.get("weighting", "counts"))
        except (AttributeError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"invalid model: {exc!r}") from exc

    def to_json(self):
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"model is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise InputError("model JSON must be an object")
        return cls.from_dict(data)


def train(train_docs, vocab, alpha=1.0, weighting="counts"):
    """Fit priors and smoothed term likelihoods.

    ``train_docs`` is a sequence of ``(tokens, label)`` pairs. Only tokens in
    ``vocab`` are counted. With ``weighting="tfidf"`` each document adds its
    TF-IDF weights instead of raw counts.
    """
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    if len(vocab) == 0:
        raise EmptyVocabulary()
    train_docs = list(train_docs)
    n_docs = Counter(label for _, label in train_docs)
    for label in LABELS:
        if n_docs[label] == 0:
            raise MissingClass(label)

    probe = NbModel({}, {}, alpha, vocab, weighting)
    totals = {label: dict.fromkeys(vocab.terms, 0) for label in LABELS}
    for tokens, label in train_docs:
        row = totals[label]
        for term, weight in probe.evidence(tokens).items():
            row[term] += weight

    n_total = len(train_docs)
    priors = {label: math.log(n_docs[label] / n_total) for label in LABELS}
    cond = {}
    for label in LABELS:
        row = totals[label]
        denom = sum(row[t] for t in vocab.terms) + alpha * len(vocab)
        cond[label] = {t: math.log((row[t] + alpha) / denom) for t in vocab.terms}
    return NbModel(priors, cond, alpha, vocab, weighting)


def log_posterior(model, tokens):
    """Unnormalized log posterior per label; unknown tokens are ignored."""
    evidence = model.evidence(tokens)
    scores = {}
    for label in model.label_order:
        table = model.cond_log_prob[label]
        score = model.class_log_prior[label]
        for term, weight in evidence.items():
            score += weight * table[term]
        scores[label] = score
    return scores


def classify(model, tokens):
    scores = log_posterior(model, tokens)
    best = model.label_order[0]
    for label in model.label_order[1:]:
        if scores[label] > scores[best]:
            best = label
    top = max(scores.values())
    exp = {label: math.exp(s - top) for label, s in scores.items()}
    total = sum(exp.values())
    posterior = {label: v / total for label, v in exp.items()}
    return Prediction(best, scores, posterior)
