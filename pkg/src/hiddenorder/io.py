"""Reading and writing series and portrait files.

Three input layouts are understood:

``lines``
    one value per line; blank lines and ``#`` comments are skipped.
``columns``
    two columns ``time,value`` separated by a comma, tab or spaces; an
    optional non-numeric header line is skipped.
``records``
    JSON lines ``{"state": "on"|"off", "duration": seconds}``; the dwell
    durations become the series.
"""
from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

from .embedding import PhasePortrait
from .errors import EmptyInput, ParseError
from .series import EventSeries

FORMATS = ("auto", "lines", "columns", "records")
DWELL_SELECTIONS = ("all", "on", "off")
_SPLIT = re.compile(r"[,\t ]+")


def _parse_float(token, lineno, path):
    try:
        x = float(token)
    except ValueError:
        raise ParseError(f"cannot parse {token!r} as a number", lineno, path) from None
    if not math.isfinite(x):
        raise ParseError(f"non-finite value {token!r}", lineno, path)
    return x


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _header_fields(text):
    meta = {}
    for raw in text.splitlines():
        if not raw.startswith("#"):
            continue
        key, sep, value = raw[1:].partition(":")
        if sep:
            meta[key.strip()] = value.strip()
    return meta


def guess_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".jsonl", ".ndjson"):
        return "records"
    if suffix in (".csv", ".tsv"):
        return "columns"
    return "lines"


def ingest_series(path, format: str = "auto", dwell: str = "all") -> EventSeries:
    """Load an EventSeries; errors name the offending line."""
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}")
    if dwell not in DWELL_SELECTIONS:
        raise ValueError(f"unknown dwell selection {dwell!r}")
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path=path) from None
    if format == "auto":
        format = guess_format(path)
    meta = _header_fields(text)
    times = None

    if format == "lines":
        values = [_parse_float(line, n, path) for n, line in _content_lines(text)]
    elif format == "columns":
        values, stamps = [], []
        for i, (n, line) in enumerate(_content_lines(text)):
            fields = _SPLIT.split(line)
            if len(fields) != 2:
                raise ParseError(f"expected 2 columns, found {len(fields)}", n, path)
            if i == 0:
                try:
                    float(fields[0]), float(fields[1])
                except ValueError:
                    continue  # header row
            stamps.append(_parse_float(fields[0], n, path))
            values.append(_parse_float(fields[1], n, path))
        times = stamps
    else:
        values = []
        for n, line in _content_lines(text):
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON record ({exc.msg})", n, path) from None
            if not isinstance(rec, dict) or "state" not in rec or "duration" not in rec:
                raise ParseError("record needs 'state' and 'duration' fields", n, path)
            state = rec["state"]
            if state not in ("on", "off"):
                raise ParseError(f"state must be 'on' or 'off', got {state!r}", n, path)
            if isinstance(rec["duration"], bool) or not isinstance(rec["duration"], (int, float)):
                raise ParseError("duration must be a number", n, path)
            duration = _parse_float(rec["duration"], n, path)
            if duration < 0:
                raise ParseError("duration must be non-negative", n, path)
            if dwell == "all" or dwell == state:
                values.append(duration)

    if not values:
        raise EmptyInput(f"{path}: no data values")
    seed = meta.get("seed")
    return EventSeries(np.array(values), source_label=meta.get("source_label", path.name),
                       seed=int(seed) if seed not in (None, "", "None") else None,
                       times=times)


def format_value(x: float) -> str:
    """17 significant digits: lossless for binary64."""
    return f"{x:.17g}"


def write_series(path, series: EventSeries) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["# hiddenorder series",
             f"# source_label: {series.source_label}",
             f"# seed: {series.seed}",
             f"# length: {series.length}"]
    lines.extend(format_value(v) for v in series.values)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_portrait(path, portrait: PhasePortrait) -> Path:
    """CSV with one delay vector per row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lag = portrait.config.lag
    header = ",".join(f"q(i+{c * lag})" if c else "q(i)" for c in range(portrait.dimension))
    rows = (",".join(format_value(v) for v in row) for row in portrait.points)
    path.write_text(header + "\n" + "\n".join(rows) + "\n")
    return path
