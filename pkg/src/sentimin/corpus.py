"""Corpus ingestion, keyword filtering, de-duplication and train/test splits."""

import csv
import json
import random
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional

from ._io import atomic_write_text, iter_jsonl, read_text
from .errors import (
    DataError,
    DuplicateId,
    EmptyKeywordList,
    InputError,
    InsufficientClassCount,
    MalformedRecord,
)

_OPTIONAL_POST_FIELDS = ("author", "timestamp", "matched_keyword")
_WS = re.compile(r"\s+")


class Label(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @classmethod
    def parse(cls, value):
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown label {value!r} (expected positive/negative)") from None

    def __str__(self):
        return self.value.capitalize()


# Fixed order used for priors, tie-breaking and fold dealing.
LABELS = (Label.POSITIVE, Label.NEGATIVE)


@dataclass(frozen=True)
class RawPost:
    id: str
    text: str
    author: str = ""
    timestamp: str = ""
    matched_keyword: str = ""

    def to_record(self):
        return {
            "id": self.id,
            "text": self.text,
            "author": self.author,
            "timestamp": self.timestamp,
            "matched_keyword": self.matched_keyword,
        }


@dataclass(frozen=True)
class LabeledDocument:
    id: str
    text: str
    label: Label
    brand: Optional[str] = None

    def to_record(self):
        record = {"id": self.id, "text": self.text, "label": self.label.value}
        if self.brand is not None:
            record["brand"] = self.brand
        return record


@dataclass(frozen=True)
class Corpus:
    documents: tuple = ()
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(self.documents))
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise DuplicateId(doc.id)
            seen.add(doc.id)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, index):
        return self.documents[index]

    def ids(self):
        return [doc.id for doc in self.documents]

    def derive(self, documents, note=None):
        provenance = self.provenance if note is None else f"{self.provenance}; {note}".lstrip("; ")
        return Corpus(tuple(documents), provenance)


@dataclass
class IngestReport:
    read: int = 0
    kept: int = 0
    malformed_lines: list = field(default_factory=list)
    duplicates_removed: int = 0

    @property
    def malformed(self):
        return len(self.malformed_lines)

    def to_dict(self):
        return {
            "read": self.read,
            "kept": self.kept,
            "malformed": self.malformed,
            "malformed_lines": list(self.malformed_lines),
            "duplicates_removed": self.duplicates_removed,
        }


def _post_from_record(record, line_no):
    doc_id = record.get("id")
    text = record.get("text")
    if not isinstance(doc_id, str) or not doc_id:
        raise MalformedRecord(line_no, "missing or empty 'id'")
    if not isinstance(text, str) or not text.strip():
        raise MalformedRecord(line_no, "missing or empty 'text'")
    extras = {}
    for name in _OPTIONAL_POST_FIELDS:
        value = record.get(name, "")
        if value is None:
            value = ""
        if not isinstance(value, str):
            raise MalformedRecord(line_no, f"field {name!r} must be a string")
        extras[name] = value
    return RawPost(doc_id, text, **extras)


def ingest_jsonl(path):
    """Read a JSONL dump into a corpus of :class:`RawPost`.

    Returns ``(corpus, report)``. Malformed lines are skipped and listed in
    the report; a repeated id raises :class:`DuplicateId`.
    """
    report = IngestReport()
    posts = []
    seen = set()
    for line_no, record in iter_jsonl(path):
        report.read += 1
        if isinstance(record, MalformedRecord):
            report.malformed_lines.append(line_no)
            continue
        try:
            post = _post_from_record(record, line_no)
        except MalformedRecord:
            report.malformed_lines.append(line_no)
            continue
        if post.id in seen:
            raise DuplicateId(post.id)
        seen.add(post.id)
        posts.append(post)
    report.kept = len(posts)
    return Corpus(tuple(posts), f"source={Path(path)}"), report


def ingest_many(paths):
    """Ingest several dumps and merge them in lexicographic path order."""
    merged = []
    total = IngestReport()
    sources = []
    for path in sorted(str(p) for p in paths):
        corpus, report = ingest_jsonl(path)
        merged.extend(corpus.documents)
        sources.append(path)
        total.read += report.read
        total.malformed_lines.extend(f"{path}:{n}" for n in report.malformed_lines)
    total.kept = len(merged)
    return Corpus(tuple(merged), "sources=" + ",".join(sources)), total


def write_jsonl(corpus, path):
    lines = [json.dumps(doc.to_record(), ensure_ascii=False) for doc in corpus]
    atomic_write_text(path, "".join(line + "\n" for line in lines))


def filter_by_keywords(corpus, keywords):
    """Keep documents whose text or matched keyword contains any keyword.

    Matching is a case-insensitive substring test. Retained posts get
    ``matched_keyword`` set to the first keyword (in ``keywords`` order)
    that matches.
    """
    keywords = [k for k in keywords if k and k.strip()]
    if not keywords:
        raise EmptyKeywordList()
    folded = [(k, k.casefold()) for k in keywords]
    kept = []
    for doc in corpus:
        haystacks = [doc.text.casefold()]
        matched_field = getattr(doc, "matched_keyword", None)
        if matched_field:
            haystacks.append(matched_field.casefold())
        hit = next((k for k, fk in folded if any(fk in h for h in haystacks)), None)
        if hit is None:
            continue
        if isinstance(doc, RawPost):
            doc = replace(doc, matched_keyword=hit)
        kept.append(doc)
    return corpus.derive(kept, "keywords=" + ",".join(keywords))


def dedup_key(text):
    return _WS.sub(" ", text.casefold()).strip()


def deduplicate(corpus):
    """Drop repeated texts, keeping the first of each group.

    Returns ``(corpus, n_removed)``.
    """
    seen = set()
    kept = []
    for doc in corpus:
        key = dedup_key(doc.text)
        if key in seen:
            continue
        seen.add(key)
        kept.append(doc)
    removed = len(corpus) - len(kept)
    return corpus.derive(kept), removed


def split_train_test(corpus, n_per_class, seed):
    """Sample ``n_per_class`` documents of each label for training.

    Both halves keep the corpus order. The same seed always gives the same
    partition.
    """
    rng = random.Random(seed)
    chosen = set()
    for label in LABELS:
        idx = [i for i, doc in enumerate(corpus) if doc.label is label]
        if len(idx) < n_per_class:
            raise InsufficientClassCount(label, len(idx), n_per_class)
        chosen.update(rng.sample(idx, n_per_class))
    train = [doc for i, doc in enumerate(corpus) if i in chosen]
    test = [doc for i, doc in enumerate(corpus) if i not in chosen]
    return (
        corpus.derive(train, f"train n_per_class={n_per_class} seed={seed}"),
        corpus.derive(test, f"test seed={seed}"),
    )


def read_label_csv(path):
    """Read an ``id,label`` CSV into a dict of id -> :class:`Label`."""
    text = read_text(path)
    reader = csv.DictReader(text.splitlines())
    if reader.fieldnames is None or not {"id", "label"} <= {f.strip() for f in reader.fieldnames}:
        raise InputError(f"{path}: expected header with columns id,label")
    labels = {}
    for row_no, row in enumerate(reader, start=2):
        row = {k.strip(): (v or "").strip() for k, v in row.items() if k is not None}
        try:
            labels[row["id"]] = Label.parse(row["label"])
        except ValueError as exc:
            raise MalformedRecord(row_no, str(exc)) from None
    return labels


def load_labeled(path, labels_csv=None):
    """Load a labeled corpus from JSONL (fields id, text, label, brand).

    When ``labels_csv`` is given, its labels override any ``label`` fields.
    Unlike :func:`ingest_jsonl`, any bad record aborts the load.
    """
    overrides = read_label_csv(labels_csv) if labels_csv else {}
    docs = []
    for line_no, record in iter_jsonl(path):
        if isinstance(record, MalformedRecord):
            raise record
        post = _post_from_record(record, line_no)
        raw_label = overrides.get(post.id, record.get("label"))
        if raw_label is None:
            raise DataError(f"{path}: line {line_no}: document {post.id!r} has no label")
        try:
            label = raw_label if isinstance(raw_label, Label) else Label.parse(raw_label)
        except ValueError as exc:
            raise MalformedRecord(line_no, str(exc)) from None
        brand = record.get("brand")
        if brand is not None and not isinstance(brand, str):
            raise MalformedRecord(line_no, "field 'brand' must be a string")
        docs.append(LabeledDocument(post.id, post.text, label, brand or None))
    return Corpus(tuple(docs), f"source={Path(path)}")


def load_unlabeled(path):
    """Load documents to classify as ``(id, text, brand)`` triples."""
    rows = []
    seen = set()
    for line_no, record in iter_jsonl(path):
        if isinstance(record, MalformedRecord):
            raise record
        post = _post_from_record(record, line_no)
        if post.id in seen:
            raise DuplicateId(post.id)
        seen.add(post.id)
        brand = record.get("brand")
        if brand is not None and not isinstance(brand, str):
            raise MalformedRecord(line_no, "field 'brand' must be a string")
        rows.append((post.id, post.text, brand or None))
    return rows
