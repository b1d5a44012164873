"""Deterministic, atomic CSV/JSON output."""

import csv
import io
import json
import os
import tempfile


def fmt(x):
    """Fixed 9-significant-digit formatting, independent of locale."""
    if isinstance(x, str):
        return x
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    v = float(x)
    if v == 0.0:
        v = 0.0  # drop negative zero
    return format(v, ".9g")


def atomic_write(path, text):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in _values(row, header)])
    atomic_write(path, buf.getvalue())


def _values(row, header):
    if isinstance(row, dict):
        return [row[h] for h in header]
    return list(row)


def write_json(path, obj):
    def conv(o):
        if isinstance(o, dict):
            return {k: conv(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [conv(v) for v in o]
        if isinstance(o, float):
            return float(fmt(o))
        if hasattr(o, "item"):
            return conv(o.item())
        return o

    atomic_write(path, json.dumps(conv(obj), indent=2, sort_keys=True) + "\n")


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
