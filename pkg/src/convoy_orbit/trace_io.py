"""Trace files in CSV or JSON-lines form.

Both formats start with a header carrying the full scenario, the time step,
the tool version and the unit convention, which is enough to rerun the
scenario bit-identically. Floats are written as the shortest decimal that
round-trips, so reading a file back reproduces the in-memory trace exactly.

CSV layout: ``#``-prefixed JSON header lines, then the column row
``t,x_A,...,gamma_TN``, then one row per tick.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Union

import numpy as np

from . import __version__
from .scenario import config_from_dict, config_to_dict
from .simulation import SimTrace, trace_columns

UNITS = "angles in radians, lengths in meters, times in seconds, speeds in m/s"
FORMATS = ("csv", "jsonl")


class TraceFileError(OSError):
    pass


def trace_header(trace: SimTrace) -> dict:
    return {
        "tool": "convoy_orbit",
        "version": __version__,
        "units": UNITS,
        "dt": trace.config.dt,
        "n_targets": trace.n_targets,
        "columns": list(trace.columns),
        "aborted": trace.aborted,
        "scenario": config_to_dict(trace.config),
    }


def _num(v: float) -> str:
    return repr(float(v))


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def format_trace(trace: SimTrace, fmt: str = "csv") -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown trace format {fmt!r}; expected one of {FORMATS}")
    header = trace_header(trace)
    names = list(trace.columns)
    data = np.column_stack([trace.columns[n] for n in names]) if len(trace) else np.empty((0, len(names)))
    buf = io.StringIO()
    if fmt == "csv":
        buf.write("# " + _dumps(header) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(names)
        for row in data:
            writer.writerow([_num(v) for v in row])
    else:
        buf.write(_dumps({"header": header}) + "\n")
        for row in data:
            # row values are python floats; json emits repr, which round-trips
            buf.write(_dumps(dict(zip(names, map(float, row)))) + "\n")
    return buf.getvalue()


def write_trace(trace: SimTrace, path: Union[str, Path], fmt: str = "csv") -> Path:
    path = Path(path)
    text = format_trace(trace, fmt)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise TraceFileError(f"cannot write trace to {path}: {exc.strerror or exc}") from exc
    return path


def _build(header: dict, rows: list[list[float]]) -> SimTrace:
    cfg = config_from_dict(header["scenario"])
    names = trace_columns(cfg.n_targets)
    if list(names) != header["columns"]:
        raise TraceFileError(f"header columns {header['columns']} do not match scenario")
    data = np.array(rows, dtype=np.float64).reshape(len(rows), len(names))
    cols = {n: data[:, j].copy() for j, n in enumerate(names)}
    return SimTrace(cfg, cols, header.get("aborted"))


def parse_trace(text: str) -> SimTrace:
    lines = text.splitlines()
    if not lines:
        raise TraceFileError("empty trace file")
    if lines[0].startswith("# "):
        header = json.loads(lines[0][2:])
        reader = csv.reader(lines[1:])
        names = next(reader)
        if names != header["columns"]:
            raise TraceFileError("CSV column row does not match the header")
        rows = [[float(v) for v in r] for r in reader if r]
        return _build(header, rows)
    first = json.loads(lines[0])
    if "header" not in first:
        raise TraceFileError("unrecognized trace format")
    header = first["header"]
    rows = []
    for line in lines[1:]:
        if line.strip():
            obj = json.loads(line)
            rows.append([float(obj[n]) for n in header["columns"]])
    return _build(header, rows)


def read_trace(path: Union[str, Path]) -> SimTrace:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TraceFileError(f"cannot read trace {path}: {exc.strerror or exc}") from exc
    return parse_trace(text)
