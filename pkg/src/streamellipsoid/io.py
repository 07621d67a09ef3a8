"""Reading point streams from CSV or JSON-lines files, strictly front to back."""

import csv
import json
import math
import os

import numpy as np

from .errors import ConfigError, DimensionMismatch, EmptyStream, ParseError

FORMATS = ("csv", "jsonl")


def infer_format(path):
    ext = os.path.splitext(str(path))[1].lower()
    if ext in (".jsonl", ".ndjson", ".json"):
        return "jsonl"
    if ext in (".csv", ".txt"):
        return "csv"
    raise ConfigError(f"cannot infer the format of {path!s}; pass --format")


class ForwardReader:
    """Line iterator over a text stream that offers no way back.

    Only ``__iter__``/``__next__`` are exposed; the underlying handle is
    private, so a consumer cannot seek or re-read.
    """

    def __init__(self, fh):
        self._fh = fh
        self.line_no = 0

    def __iter__(self):
        return self

    def __next__(self):
        line = self._fh.readline()
        if not line:
            raise StopIteration
        self.line_no += 1
        return line


def _parse_csv_line(line, line_no):
    row = next(csv.reader([line]))
    vals = []
    for col, cell in enumerate(row, start=1):
        try:
            v = float(cell)
        except ValueError:
            raise ParseError(line_no, f"column {col}: not a number: {cell.strip()!r}") from None
        if not math.isfinite(v):
            raise ParseError(line_no, f"column {col}: non-finite value")
        vals.append(v)
    return vals


def _parse_jsonl_line(line, line_no):
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(line_no, f"invalid JSON: {exc.msg}") from None
    if not isinstance(rec, list) or not rec:
        raise ParseError(line_no, "expected a non-empty JSON array")
    vals = []
    for col, v in enumerate(rec, start=1):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(line_no, f"column {col}: not a number: {v!r}")
        if not math.isfinite(v):
            raise ParseError(line_no, f"column {col}: non-finite value")
        vals.append(float(v))
    return vals


def iter_lines(lines, fmt, d=None):
    """Yield points from an iterable of text lines; blank lines are skipped."""
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    parse = _parse_csv_line if fmt == "csv" else _parse_jsonl_line
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        vals = parse(line, line_no)
        if d is None:
            d = len(vals)
        elif len(vals) != d:
            raise DimensionMismatch(f"expected {d} coordinates, got {len(vals)}", line=line_no)
        yield np.array(vals)


def iter_stream(path, fmt=None, d=None):
    """Yield the points of a file one at a time, in a single forward pass."""
    fmt = fmt or infer_format(path)
    with open(path, encoding="utf-8") as fh:
        yield from iter_lines(ForwardReader(fh), fmt, d)


def parse_stream(path, fmt=None, d=None):
    """All points of a file as an ``(n, d)`` array."""
    pts = list(iter_stream(path, fmt, d))
    if not pts:
        raise EmptyStream(f"{path!s} contains no points")
    return np.vstack(pts)


def parse_text(text, fmt, d=None):
    pts = list(iter_lines(text.splitlines(), fmt, d))
    if not pts:
        raise EmptyStream("no points")
    return np.vstack(pts)


def write_stream(path, points, fmt=None):
    fmt = fmt or infer_format(path)
    with open(path, "w", encoding="utf-8") as fh:
        for p in np.asarray(points, dtype=float):
            if fmt == "csv":
                fh.write(",".join(repr(float(v)) for v in p) + "\n")
            else:
                fh.write(json.dumps([float(v) for v in p]) + "\n")
