"""Exception hierarchy shared by all pipeline stages.

Every error carries an ``exit_code`` so the CLI can map it without a lookup
table: 2 for I/O, 3 for configuration, 4 for data-shape problems.
"""


class SentiminError(Exception):
    exit_code = 1


class InputError(SentiminError):
    """A file could not be read, parsed or written."""

    exit_code = 2


class ConfigError(SentiminError):
    exit_code = 3


class DataError(SentiminError):
    """The data is well-formed but has the wrong shape for the operation."""

    exit_code = 4


class MalformedRecord(InputError):
    def __init__(self, line_no, reason):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateId(DataError):
    def __init__(self, doc_id):
        super().__init__(f"duplicate document id {doc_id!r}")
        self.doc_id = doc_id


class EmptyKeywordList(ConfigError):
    def __init__(self):
        super().__init__("at least one keyword is required")


class InsufficientClassCount(DataError):
    def __init__(self, label, have, need):
        super().__init__(f"class {label} has {have} documents, need {need}")
        self.label = label
        self.have = have
        self.need = need


class TooFewDocuments(DataError):
    def __init__(self, label, have, k):
        super().__init__(f"class {label} has {have} documents, fewer than k={k}")
        self.label = label
        self.have = have
        self.k = k


class EmptyCorpus(DataError):
    def __init__(self, what="corpus"):
        super().__init__(f"{what} is empty")


class UnknownTerm(KeyError, SentiminError):
    exit_code = 4


class MissingClass(DataError):
    def __init__(self, label):
        super().__init__(f"no training documents labeled {label}")
        self.label = label


class EmptyVocabulary(DataError):
    def __init__(self):
        super().__init__("vocabulary is empty (check the pruning window)")


class LengthMismatch(DataError):
    def __init__(self, n_pred, n_true):
        super().__init__(f"{n_pred} predictions vs {n_true} truths")


class EmptyMatrix(DataError):
    def __init__(self):
        super().__init__("confusion matrix has no observations")
