"""Command-line entry point: ``sentimin {ingest,train,evaluate,classify,compare}``.

Exit codes: 0 success, 2 I/O failure, 3 configuration error, 4 data shape.
"""

import argparse
import json
import logging
import os
import sys
import warnings
from dataclasses import dataclass, fields, replace
from typing import Optional

from . import __version__
from ._io import atomic_write_text, dumps, iter_jsonl, read_text
from .corpus import (
    Label,
    MalformedRecord,
    deduplicate,
    filter_by_keywords,
    ingest_many,
    load_labeled,
    load_unlabeled,
    write_jsonl,
)
from .errors import ConfigError, InputError, SentiminError
from .evaluate import PipelineConfig, cross_validate, fit_model, render_matrix
from .features import PruneBounds, build_vocabulary
from .nbayes import WEIGHTINGS, NbModel, classify
from .report import rank_by_satisfaction, render_table, summarize_brand
from .textprep import PrepConfig, load_stopwords, preprocess, preprocess_trace

log = logging.getLogger("sentimin")

CONFIG_ENV = "SENTIMIN_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    stopword_path: Optional[str] = None
    min_df_ratio: float = 0.0099
    max_df_ratio: float = 0.90
    alpha: float = 1.0
    k: int = 10
    seed: int = 0
    min_token_len: int = 2
    stem_enabled: bool = True
    keep_hashtag_body: bool = True
    weighting: str = "counts"

    def validate(self):
        if self.k < 2:
            raise ConfigError(f"k must be >= 2, got {self.k}")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be > 0, got {self.alpha}")
        if not 0 <= self.min_df_ratio <= self.max_df_ratio <= 1:
            raise ConfigError(
                f"need 0 <= min_df <= max_df <= 1, got {self.min_df_ratio}, {self.max_df_ratio}"
            )
        if self.min_token_len < 1:
            raise ConfigError(f"min_token_len must be >= 1, got {self.min_token_len}")
        if self.weighting not in WEIGHTINGS:
            raise ConfigError(f"weighting must be one of {', '.join(WEIGHTINGS)}")
        return self

    def pipeline(self):
        stopwords = load_stopwords(self.stopword_path)
        try:
            prep = PrepConfig(stopwords, self.stem_enabled, self.min_token_len, self.keep_hashtag_body)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return PipelineConfig(
            prep, PruneBounds(self.min_df_ratio, self.max_df_ratio), self.alpha, self.weighting
        )


def _convert(name, kind, raw):
    raw = raw.strip()
    try:
        if kind is bool or kind == "bool":
            lowered = raw.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind is int or kind == "int":
            return int(raw)
        if kind is float or kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"config key {name!r}: cannot parse {raw!r}") from None
    return raw or None


def parse_config_text(text, source="<config>"):
    """Parse flat ``key = value`` lines; unknown keys are an error."""
    types = {f.name: f.type for f in fields(RunConfig)}
    values = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{line_no}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"{source}:{line_no}: unknown config key {key!r}")
        kind = types[key]
        if key == "stopword_path":
            kind = str
        values[key] = _convert(key, kind, raw)
    return values


def load_run_config(args):
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    values = {}
    if path:
        try:
            text = read_text(path)
        except InputError as exc:
            raise ConfigError(f"config file: {exc}") from None
        values = parse_config_text(text, path)
    overrides = {
        "stopword_path": getattr(args, "stopwords", None),
        "min_df_ratio": getattr(args, "min_df", None),
        "max_df_ratio": getattr(args, "max_df", None),
        "alpha": getattr(args, "alpha", None),
        "k": getattr(args, "k", None),
        "seed": getattr(args, "seed", None),
        "min_token_len": getattr(args, "min_token_len", None),
        "weighting": getattr(args, "weighting", None),
    }
    if getattr(args, "no_stem", False):
        overrides["stem_enabled"] = False
    values.update({k: v for k, v in overrides.items() if v is not None})
    return replace(RunConfig(), **values).validate()


def _write_trace(path, texts, prep):
    lines = []
    for doc_id, text in texts:
        record = {"id": doc_id, **preprocess_trace(text, prep)}
        lines.append(json.dumps(record, ensure_ascii=False))
    atomic_write_text(path, "".join(line + "\n" for line in lines))


def _emit_json(obj, output):
    if output:
        atomic_write_text(output, dumps(obj))
    else:
        sys.stdout.write(dumps(obj))


def model_document(model, prep):
    data = model.to_dict()
    data["preprocessing"] = {
        "stem_enabled": prep.stem_enabled,
        "min_token_len": prep.min_token_len,
        "keep_hashtag_body": prep.keep_hashtag_body,
        "stopwords": sorted(prep.stopwords),
    }
    return data


def load_model_file(path):
    text = read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: model is not valid JSON (line {exc.lineno}, col {exc.colno}: {exc.msg})")
    if not isinstance(data, dict):
        raise InputError(f"{path}: model JSON must be an object")
    try:
        model = NbModel.from_dict(data)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None
    prep_data = data.get("preprocessing")
    if prep_data is None:
        return model, PrepConfig()
    try:
        prep = PrepConfig(
            frozenset(prep_data["stopwords"]),
            bool(prep_data["stem_enabled"]),
            int(prep_data["min_token_len"]),
            bool(prep_data.get("keep_hashtag_body", True)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: invalid preprocessing block: {exc!r}") from None
    return model, prep


def cmd_ingest(args):
    keywords = [k.strip() for group in args.keywords or [] for k in group.split(",") if k.strip()]
    if not keywords:
        raise ConfigError("at least one --keywords value is required")
    corpus, report = ingest_many(args.inputs)
    filtered = filter_by_keywords(corpus, keywords)
    deduped, removed = deduplicate(filtered)
    report.kept = len(deduped)
    report.duplicates_removed = removed
    write_jsonl(deduped, args.output)
    summary = report.to_dict()
    summary["filtered_out"] = len(corpus) - len(filtered)
    _emit_json(summary, args.report)
    for line in report.malformed_lines:
        log.warning("malformed record skipped: %s", line)
    return summary


def _load_corpus(args, pipe):
    corpus = load_labeled(args.corpus, args.labels)
    if args.trace:
        _write_trace(args.trace, [(d.id, d.text) for d in corpus], pipe.prep)
    return corpus


def cmd_train(args):
    cfg = load_run_config(args)
    pipe = cfg.pipeline()
    corpus = _load_corpus(args, pipe)
    tokens = [preprocess(doc.text, pipe.prep) for doc in corpus]
    model = fit_model(tokens, [d.label for d in corpus], pipe.bounds, pipe.alpha, pipe.weighting)
    atomic_write_text(args.output, dumps(model_document(model, pipe.prep)))
    full = build_vocabulary(tokens) if tokens else None
    print(f"trained on {len(corpus)} documents")
    print(f"vocabulary: {len(full) if full else 0} terms, {len(model.vocab)} after pruning "
          f"[{cfg.min_df_ratio}, {cfg.max_df_ratio}]")
    print(f"model written to {args.output}")
    return model


def cmd_evaluate(args):
    cfg = load_run_config(args)
    pipe = cfg.pipeline()
    corpus = _load_corpus(args, pipe)
    result = cross_validate(corpus, cfg.k, cfg.seed, pipe, jobs=args.jobs)
    report = {"n_documents": len(corpus), **result.to_dict()}
    sys.stdout.write(f"{cfg.k}-fold cross-validation, seed {cfg.seed}, {len(corpus)} documents\n\n")
    sys.stdout.write(render_matrix(result.matrix, result.metrics))
    if args.output:
        atomic_write_text(args.output, dumps(report))
        sys.stdout.write(f"\nreport written to {args.output}\n")
    else:
        sys.stdout.write("\n" + dumps(report))
    return report


def cmd_classify(args):
    model, prep = load_model_file(args.model)
    rows = load_unlabeled(args.corpus)
    if args.trace:
        _write_trace(args.trace, [(doc_id, text) for doc_id, text, _ in rows], prep)
    lines = []
    for doc_id, text, brand in rows:
        pred = classify(model, preprocess(text, prep))
        record = {
            "id": doc_id,
            "brand": brand,
            "label": pred.label.value,
            "posterior": pred.posterior[pred.label],
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    atomic_write_text(args.output, "".join(line + "\n" for line in lines))
    print(f"classified {len(lines)} documents -> {args.output}")
    return lines


def _read_predictions(path):
    pairs = []
    for line_no, record in iter_jsonl(path):
        if isinstance(record, MalformedRecord):
            raise InputError(f"{path}: {record}")
        try:
            label = Label.parse(record["label"])
        except (KeyError, ValueError) as exc:
            raise InputError(f"{path}: line {line_no}: bad or missing label ({exc})") from None
        brand = record.get("brand")
        if brand is not None and not isinstance(brand, str):
            raise InputError(f"{path}: line {line_no}: brand must be a string")
        pairs.append((brand, label))
    return pairs


def _parse_tested(items):
    tested = {}
    for item in items or []:
        brand, sep, count = item.rpartition("=")
        if not sep or not brand:
            raise ConfigError(f"--tested expects BRAND=N, got {item!r}")
        try:
            tested[brand] = int(count)
        except ValueError:
            raise ConfigError(f"--tested expects an integer count, got {item!r}") from None
    return tested


def cmd_compare(args):
    pairs = []
    for path in args.predictions:
        pairs.extend(_read_predictions(path))
    tested = _parse_tested(args.tested)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        summaries = summarize_brand(pairs, brands=args.brands or (), tested=tested)
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")
    ranked = rank_by_satisfaction(summaries)
    if ranked:
        sys.stdout.write(render_table(ranked))
    else:
        sys.stdout.write("no classified documents\n")
    payload = [s.to_dict() for s in ranked]
    if args.output:
        atomic_write_text(args.output, dumps(payload))
    else:
        sys.stdout.write("\n" + dumps(payload))
    return ranked


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ConfigError.exit_code, f"{self.prog}: error: {message}\n")


def _add_run_flags(p):
    p.add_argument("--config", help=f"key = value config file (falls back to ${CONFIG_ENV})")
    p.add_argument("--seed", type=int)
    p.add_argument("--k", type=int, help="number of folds (default 10)")
    p.add_argument("--alpha", type=float, help="additive smoothing (default 1.0)")
    p.add_argument("--min-df", type=float, help="lower document-frequency ratio (default 0.0099)")
    p.add_argument("--max-df", type=float, help="upper document-frequency ratio (default 0.90)")
    p.add_argument("--stopwords", help="stopword file replacing the bundled list")
    p.add_argument("--min-token-len", type=int)
    p.add_argument("--no-stem", action="store_true", help="disable affix stripping")
    p.add_argument("--weighting", choices=WEIGHTINGS, help="NB evidence: raw counts or TF-IDF weights")
    p.add_argument("--labels", help="id,label CSV overriding labels in the corpus")
    p.add_argument("--trace", help="write per-document preprocessing stages as JSONL")


def build_parser():
    parser = _Parser(prog="sentimin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="read dumps, filter by keyword, drop duplicates")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--keywords", "-k", action="append", help="comma-separated; repeatable")
    p.add_argument("--output", required=True, help="normalized corpus JSONL")
    p.add_argument("--report", help="ingest report JSON (default: stdout)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="fit a model on a labeled corpus")
    p.add_argument("corpus")
    p.add_argument("--output", required=True, help="model JSON")
    _add_run_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="stratified k-fold cross-validation")
    p.add_argument("corpus")
    p.add_argument("--output", help="evaluation report JSON (default: stdout)")
    p.add_argument("--jobs", type=int, default=1, help="folds run in parallel processes")
    _add_run_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("classify", help="label documents with a trained model")
    p.add_argument("model")
    p.add_argument("corpus")
    p.add_argument("--output", required=True, help="predictions JSONL")
    p.add_argument("--trace", help="write per-document preprocessing stages as JSONL")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compare", help="per-brand sentiment comparison")
    p.add_argument("predictions", nargs="+")
    p.add_argument("--brands", nargs="*", help="brands expected in the comparison")
    p.add_argument("--tested", action="append", help="BRAND=N documents sent to the classifier")
    p.add_argument("--output", help="comparison JSON (default: stdout)")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except SentiminError as exc:
        sys.stderr.write(f"sentimin {args.command}: {exc}\n")
        return exc.exit_code
    except ValueError as exc:
        sys.stderr.write(f"sentimin {args.command}: {exc}\n")
        return ConfigError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
