"""Binary sentiment classification of short Indonesian social-media posts."""

__version__ = "0.1.0"

from .corpus import Corpus, Label, LabeledDocument, RawPost
from .evaluate import ConfusionMatrix, PipelineConfig, cross_validate, metrics
from .features import PruneBounds, Vocabulary, build_vocabulary, prune_by_df, tfidf_vector
from .nbayes import NbModel, classify, log_posterior, train
from .textprep import PrepConfig, preprocess, stem

__all__ = [
    "ConfusionMatrix", "Corpus", "Label", "LabeledDocument", "NbModel", "PipelineConfig",
    "PrepConfig", "PruneBounds", "RawPost", "Vocabulary", "build_vocabulary", "classify",
    "cross_validate", "log_posterior", "metrics", "preprocess", "prune_by_df", "stem",
    "tfidf_vector", "train",
]
