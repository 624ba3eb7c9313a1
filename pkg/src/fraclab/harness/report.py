"""CSV and JSON serialisation of sweep reports."""

from __future__ import annotations

import csv
import io
import json

from fraclab.errors import ConfigInvalid
from fraclab.report import SweepReport


def _cell(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(report: SweepReport, fmt: str = "csv") -> bytes:
    """CSV (header plus one line per row, RFC 4180 quoting) or a JSON object ``{metadata, columns, rows}``."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue().encode()
    if fmt == "json":
        obj = {"metadata": report.metadata, "columns": list(report.columns), "rows": [list(r) for r in report.rows]}
        return (json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n").encode()
    raise ConfigInvalid(f"unknown format {fmt!r}")


def _number(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse(data: bytes, fmt: str = "csv") -> SweepReport:
    text = data.decode()
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ConfigInvalid("empty CSV")
        return SweepReport(tuple(rows[0]), tuple(tuple(_number(c) for c in r) for r in rows[1:]))
    if fmt == "json":
        obj = json.loads(text)
        return SweepReport(tuple(obj["columns"]), tuple(tuple(r) for r in obj["rows"]), obj["metadata"])
    raise ConfigInvalid(f"unknown format {fmt!r}")
