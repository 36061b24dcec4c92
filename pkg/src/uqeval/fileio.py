"""Prediction file readers and report/curve writers.

CSV schema: ``id,y_true,mean_0,var_0,...,mean_{M-1},var_{M-1}``.
JSONL schema: ``{"id": ..., "y_true": ..., "members": [[mean, var], ...]}``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from typing import BinaryIO, Optional, Union

from uqeval.data import EvaluationSet, PredictionRecord
from uqeval.errors import ParseError, SchemaError

# dot-decimal only; nan/inf are accepted here and rejected by validation
_NUMBER = re.compile(
    r"[+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|nan|inf|infinity)\Z", re.IGNORECASE
)


def _text(source: Union[BinaryIO, bytes, str]) -> io.TextIOBase:
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def _number(cell: str, row: int, column: str) -> float:
    cell = cell.strip()
    if not _NUMBER.match(cell):
        raise ParseError(
            f"row {row}, column {column}: cannot parse {cell!r} as a number",
            row=row,
            column=column,
        )
    return float(cell)


def member_columns(m: int) -> list:
    cols = []
    for i in range(m):
        cols += [f"mean_{i}", f"var_{i}"]
    return cols


def read_csv(source) -> list:
    reader = csv.reader(_text(source))
    header = next(reader, None)
    if header is None:
        raise SchemaError("CSV input has no header row")
    header = [h.strip() for h in header]
    if header[:2] != ["id", "y_true"]:
        raise SchemaError(f"header must start with id,y_true; got {header[:2]}")
    rest = header[2:]
    if not rest or len(rest) % 2:
        raise SchemaError(f"expected (mean_i, var_i) column pairs; got {rest}")
    m = len(rest) // 2
    if rest != member_columns(m):
        raise SchemaError(f"member columns must be {member_columns(m)}; got {rest}")

    records = []
    for row_no, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != len(header):
            raise SchemaError(
                f"row {row_no} has {len(row)} cells, header has {len(header)}"
            )
        y = _number(row[1], row_no, "y_true")
        members = tuple(
            (
                _number(row[2 + 2 * i], row_no, f"mean_{i}"),
                _number(row[3 + 2 * i], row_no, f"var_{i}"),
            )
            for i in range(m)
        )
        records.append(PredictionRecord(row[0].strip(), y, members))
    return records


def _json_number(value, line: int, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"line {line}: {key} must be a number, got {value!r}", row=line, column=key)
    return float(value)


def read_jsonl(source) -> list:
    records = []
    for line_no, line in enumerate(_text(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {line_no}: invalid JSON ({exc.msg})", row=line_no) from None
        if not isinstance(obj, dict):
            raise SchemaError(f"line {line_no}: expected a JSON object")
        missing = [k for k in ("id", "y_true", "members") if k not in obj]
        if missing:
            raise SchemaError(f"line {line_no}: missing key(s) {', '.join(missing)}")
        members = obj["members"]
        if not isinstance(members, list):
            raise SchemaError(f"line {line_no}: members must be a list")
        pairs = []
        for j, pair in enumerate(members):
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(f"line {line_no}: member {j} must be [mean, var]")
            pairs.append(
                (
                    _json_number(pair[0], line_no, f"members[{j}][0]"),
                    _json_number(pair[1], line_no, f"members[{j}][1]"),
                )
            )
        records.append(
            PredictionRecord(
                str(obj["id"]), _json_number(obj["y_true"], line_no, "y_true"), tuple(pairs)
            )
        )
    return records


def read_predictions(path) -> list:
    """Dispatch on extension: ``.jsonl``/``.json`` as JSONL, anything else as CSV."""
    path = str(path)
    with open(path, "rb") as fh:
        if path.endswith((".jsonl", ".json")):
            return read_jsonl(fh)
        return read_csv(fh)


def _fmt(x: float) -> str:
    # shortest repr that round-trips (at most 17 significant digits)
    return repr(float(x))


def write_csv(es: EvaluationSet) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "y_true"] + member_columns(es.member_count))
    for i, rid in enumerate(es.ids):
        row = [rid, _fmt(es.y_true[i])]
        for mu, var in zip(es.means[i], es.variances[i]):
            row += [_fmt(mu), _fmt(var)]
        writer.writerow(row)
    return buf.getvalue()


def write_jsonl(es: EvaluationSet) -> str:
    lines = []
    for r in es:
        lines.append(
            json.dumps({"id": r.id, "y_true": r.y_true, "members": [list(p) for p in r.members]},
                       separators=(",", ":"))
        )
    return "\n".join(lines) + "\n"


@dataclass
class BinRow:
    rmse: float
    rmv: float
    lo_sigma: float
    hi_sigma: float
    size: int


@dataclass
class MetricReport:
    dataset: str
    member_count: int
    measures: dict  # measure name -> {"r_auc", "f1_auc", "f1_at_95", "mwse"}
    ence: float
    cv: float
    lence: float
    bins: list  # BinRow
    mwse: float
    config: dict = field(default_factory=dict)


def _encode(obj):
    if isinstance(obj, float):
        if math.isinf(obj) and obj > 0:
            return "inf"
        return obj
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def report_dict(report: MetricReport) -> dict:
    return {
        "dataset": report.dataset,
        "M": report.member_count,
        "config": dict(report.config),
        "calibration": {
            "ence": report.ence,
            "cv": report.cv,
            "lence": report.lence,
            "bin_count": len(report.bins),
            "bins": [
                {
                    "rmse": b.rmse,
                    "rmv": b.rmv,
                    "lo_sigma": b.lo_sigma,
                    "hi_sigma": b.hi_sigma,
                    "size": b.size,
                }
                for b in report.bins
            ],
        },
        "mwse": report.mwse,
        "measures": {name: dict(summary) for name, summary in report.measures.items()},
    }


def write_report(report: MetricReport) -> str:
    """Serialize to JSON: fixed key order, round-trip reals, +inf as ``"inf"``."""
    doc = _encode(report_dict(report))
    return json.dumps(doc, indent=2, separators=(",", ":"), allow_nan=False) + "\n"


def write_curve(curve) -> str:
    lines = ["fraction,value"]
    for f, v in sorted(zip(curve.fractions.tolist(), curve.values.tolist())):
        lines.append(f"{_fmt(f)},{_fmt(v)}")
    lines.append(f"# auc={_fmt(curve.auc)}")
    return "\n".join(lines) + "\n"


def read_curve(text: str):
    """Parse a curve CSV back into ``(fractions, values, auc)``."""
    fractions, values, auc = [], [], None
    for line in text.splitlines()[1:]:
        if line.startswith("# auc="):
            auc = float(line[len("# auc="):])
        elif line:
            f, v = line.split(",")
            fractions.append(float(f))
            values.append(float(v))
    return fractions, values, auc
