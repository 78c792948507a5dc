"""
Report Store: atomic report files and a run-history ledger.

Reports are written to a temp file in the target directory and renamed into
place, so a crashed run never leaves a half-written report. Each run appends
a summary entry to run_history.json next to its report.
"""

import csv
import io
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from config import MAX_HISTORY_RUNS
from errors import UsageError

HISTORY_NAME = "run_history.json"


def _default(obj):
    """JSON fallback for complex and numpy scalars/arrays."""
    if isinstance(obj, (complex, np.complexfloating)):
        return [obj.real, obj.imag]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError("cannot serialize {!r}".format(type(obj).__name__))


def write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".{}.".format(path.name), dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path


def to_json(payload):
    return json.dumps(payload, indent=2, default=_default) + "\n"


def write_json(path, payload):
    return write_text(path, to_json(payload))


def write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header is not None:
        writer.writerow(header)
    writer.writerows(rows)
    return write_text(path, buf.getvalue())


_REQUIRED = object()


def load_json(path, default=_REQUIRED):
    """Parsed JSON at path.

    Missing or unreadable files raise UsageError, unless a default is given,
    in which case the default comes back instead.
    """
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        if default is not _REQUIRED:
            return default
        raise UsageError("file not found: {}".format(path))
    except (json.JSONDecodeError, OSError) as e:
        if default is not _REQUIRED:
            return default
        raise UsageError("{} is not valid JSON: {}".format(path, e))


def record_run(report_path, command, status, summary, deterministic=False):
    """Append one entry to the history ledger beside report_path."""
    history_path = Path(report_path).parent / HISTORY_NAME
    history = load_json(history_path, default=None)
    if not isinstance(history, dict) or not isinstance(history.get("runs"), list):
        history = {"runs": []}
    entry = {
        "command": command,
        "report": Path(report_path).name,
        "status": status,
        "summary": summary,
    }
    if not deterministic:
        entry["timestamp"] = datetime.now(timezone.utc).isoformat()
    history["runs"].append(entry)

    if len(history["runs"]) > MAX_HISTORY_RUNS:
        history["runs"] = history["runs"][-MAX_HISTORY_RUNS:]
    write_json(history_path, history)
    return history_path
