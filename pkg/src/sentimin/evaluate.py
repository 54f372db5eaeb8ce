"""Stratified k-fold cross-validation, confusion matrices and metrics."""

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .corpus import LABELS, Label
from .errors import EmptyMatrix, LengthMismatch, TooFewDocuments
from .features import PruneBounds, build_vocabulary, prune_by_df
from .nbayes import classify, train
from .textprep import PrepConfig, preprocess

UNDEFINED = "undefined"


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 counts. ``fp`` is predicted Positive but actually Negative."""

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion matrix counts must be >= 0")

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other):
        return ConfusionMatrix(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn
        )

    def swapped(self):
        """Same matrix with the Positive and Negative roles exchanged."""
        return ConfusionMatrix(self.tn, self.fn, self.fp, self.tp)

    def to_dict(self):
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}


@dataclass(frozen=True)
class MetricsReport:
    """Derived metrics; ``None`` marks a value whose denominator is zero."""

    accuracy: Optional[float]
    precision_pos: Optional[float]
    precision_neg: Optional[float]
    recall_pos: Optional[float]
    recall_neg: Optional[float]
    macro_precision: Optional[float]
    macro_recall: Optional[float]
    kappa: Optional[float]

    FIELDS = (
        "accuracy", "precision_pos", "precision_neg", "recall_pos",
        "recall_neg", "macro_precision", "macro_recall", "kappa",
    )

    def to_dict(self):
        return {name: _or_undefined(getattr(self, name)) for name in self.FIELDS}


def _or_undefined(value):
    return UNDEFINED if value is None else value


def _ratio(num, den):
    return None if den == 0 else num / den


def _mean(a, b):
    return None if a is None or b is None else (a + b) / 2


def confusion_matrix(predictions, truths):
    predictions, truths = list(predictions), list(truths)
    if len(predictions) != len(truths):
        raise LengthMismatch(len(predictions), len(truths))
    if not predictions:
        raise EmptyMatrix()
    tp = fp = fn = tn = 0
    for pred, true in zip(predictions, truths):
        pred, true = Label(pred), Label(true)
        if pred is Label.POSITIVE:
            if true is Label.POSITIVE:
                tp += 1
            else:
                fp += 1
        elif true is Label.POSITIVE:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, fn, tn)


def metrics(cm):
    """Accuracy, per-class and macro precision/recall, and Cohen's kappa."""
    n = cm.total
    if n == 0:
        raise EmptyMatrix()
    accuracy = (cm.tp + cm.tn) / n
    precision_pos = _ratio(cm.tp, cm.tp + cm.fp)
    precision_neg = _ratio(cm.tn, cm.tn + cm.fn)
    recall_pos = _ratio(cm.tp, cm.tp + cm.fn)
    recall_neg = _ratio(cm.tn, cm.tn + cm.fp)
    # chance agreement from the predicted and actual marginals
    expected = ((cm.tp + cm.fp) * (cm.tp + cm.fn) + (cm.fn + cm.tn) * (cm.fp + cm.tn)) / (n * n)
    kappa = None if expected == 1 else (accuracy - expected) / (1 - expected)
    return MetricsReport(
        accuracy=accuracy,
        precision_pos=precision_pos,
        precision_neg=precision_neg,
        recall_pos=recall_pos,
        recall_neg=recall_neg,
        macro_precision=_mean(precision_pos, precision_neg),
        macro_recall=_mean(recall_pos, recall_neg),
        kappa=kappa,
    )


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: tuple
    seed: int

    def test_indices(self, fold):
        return [i for i, f in enumerate(self.assignments) if f == fold]

    def train_indices(self, fold):
        return [i for i, f in enumerate(self.assignments) if f != fold]


def _labels_of(items):
    return [item.label if hasattr(item, "label") else Label(item) for item in items]


def kfold_split(corpus, k, seed):
    """Shuffle each class with a seeded RNG and deal it round-robin into k folds.

    ``corpus`` may hold labeled documents or bare labels.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    labels = _labels_of(corpus)
    rng = random.Random(seed)
    assignments = [None] * len(labels)
    for label in LABELS:
        idx = [i for i, lab in enumerate(labels) if lab is label]
        if len(idx) < k:
            raise TooFewDocuments(label, len(idx), k)
        rng.shuffle(idx)
        for position, i in enumerate(idx):
            assignments[i] = position % k
    return FoldPlan(k, tuple(assignments), seed)


@dataclass(frozen=True)
class PipelineConfig:
    prep: PrepConfig = field(default_factory=PrepConfig)
    bounds: PruneBounds = field(default_factory=PruneBounds)
    alpha: float = 1.0
    weighting: str = "counts"


def fit_model(token_docs, labels, bounds, alpha=1.0, weighting="counts"):
    """Build and prune a vocabulary from ``token_docs`` and train on it."""
    vocab = prune_by_df(build_vocabulary(token_docs), bounds)
    return train(zip(token_docs, labels), vocab, alpha, weighting)


@dataclass(frozen=True)
class FoldResult:
    fold: int
    n_train: int
    n_test: int
    vocab_size: int
    matrix: ConfusionMatrix
    metrics: MetricsReport

    def to_dict(self):
        return {
            "fold": self.fold,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "vocab_size": self.vocab_size,
            "matrix": self.matrix.to_dict(),
            "metrics": self.metrics.to_dict(),
        }


@dataclass(frozen=True)
class CrossValidation:
    k: int
    seed: int
    matrix: ConfusionMatrix
    metrics: MetricsReport
    folds: tuple
    plan: FoldPlan
    predictions: tuple

    def to_dict(self):
        return {
            "k": self.k,
            "seed": self.seed,
            "aggregate_matrix": self.matrix.to_dict(),
            "metrics": self.metrics.to_dict(),
            "folds": [fold.to_dict() for fold in self.folds],
        }


def _run_fold(fold, token_docs, labels, assignments, bounds, alpha, weighting):
    train_idx = [i for i, f in enumerate(assignments) if f != fold]
    test_idx = [i for i, f in enumerate(assignments) if f == fold]
    # vocabulary and pruning come from the training folds only
    model = fit_model(
        [token_docs[i] for i in train_idx], [labels[i] for i in train_idx], bounds, alpha, weighting
    )
    preds = [(i, classify(model, token_docs[i]).label) for i in test_idx]
    cm = confusion_matrix([p for _, p in preds], [labels[i] for i in test_idx])
    result = FoldResult(fold, len(train_idx), len(test_idx), len(model.vocab), cm, metrics(cm))
    return result, preds


def cross_validate(corpus, k=10, seed=0, config=None, jobs=1):
    """k-fold CV over labeled documents.

    Each document is preprocessed once; the vocabulary, pruning and model are
    refit per fold. The aggregate matrix is the sum of the fold matrices and
    the headline metrics are derived from it. ``jobs > 1`` runs folds in
    worker processes with identical results.
    """
    config = config or PipelineConfig()
    docs = list(corpus)
    labels = _labels_of(docs)
    plan = kfold_split(labels, k, seed)
    token_docs = [preprocess(doc.text, config.prep) for doc in docs]
    args = (token_docs, labels, plan.assignments, config.bounds, config.alpha, config.weighting)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, k)) as pool:
            futures = [pool.submit(_run_fold, fold, *args) for fold in range(k)]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [_run_fold(fold, *args) for fold in range(k)]

    folds = tuple(result for result, _ in outcomes)
    aggregate = ConfusionMatrix()
    for result in folds:
        aggregate = aggregate + result.matrix
    predicted = [None] * len(docs)
    for _, preds in outcomes:
        for i, label in preds:
            predicted[i] = label
    return CrossValidation(k, seed, aggregate, metrics(aggregate), folds, plan, tuple(predicted))


def _pct(value):
    return UNDEFINED if value is None else f"{value * 100:.2f}%"


def render_matrix(cm, report=None):
    """Plain-text confusion table: predictions in rows, actual classes in columns."""
    report = report or metrics(cm)
    rows = [
        ("", "Actual Positive", "Actual Negative", "Class Precision"),
        ("Pred. Positive", str(cm.tp), str(cm.fp), _pct(report.precision_pos)),
        ("Pred. Negative", str(cm.fn), str(cm.tn), _pct(report.precision_neg)),
        ("Class Recall", _pct(report.recall_pos), _pct(report.recall_neg), ""),
    ]
    widths = [max(len(row[c]) for row in rows) for c in range(4)]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [row[c].rjust(widths[c]) for c in range(1, 4)]
        lines.append("  ".join(cells).rstrip())
    kappa = UNDEFINED if report.kappa is None else f"{report.kappa:.4f}"
    lines.append("")
    lines.append(f"accuracy         {_pct(report.accuracy)}")
    lines.append(f"macro precision  {_pct(report.macro_precision)}")
    lines.append(f"macro recall     {_pct(report.macro_recall)}")
    lines.append(f"kappa            {kappa}")
    return "\n".join(lines) + "\n"
