import json
import os
import tempfile
from pathlib import Path

from .errors import InputError, MalformedRecord


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` through a temp file + rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def dumps(obj):
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def read_text(path):
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def iter_jsonl(path):
    """Yield ``(line_no, record_or_error)`` for every non-blank line.

    Parse failures are yielded as :class:`MalformedRecord` instances instead
    of being raised so callers can decide whether to collect or abort.
    """
    for line_no, line in enumerate(read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            yield line_no, MalformedRecord(line_no, f"invalid JSON ({exc.msg})")
            continue
        if not isinstance(record, dict):
            yield line_no, MalformedRecord(line_no, "record is not a JSON object")
            continue
        yield line_no, record
