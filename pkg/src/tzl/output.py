"""CSV and JSON-lines emitters with a provenance header."""

from __future__ import annotations

import csv
import io
import json
import math

SIG_DIGITS = 12


def fmt_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return str(v)
        return format(v, f".{SIG_DIGITS}g")
    if v is None:
        return ""
    if isinstance(v, (list, tuple, set, frozenset)):
        return " ".join(fmt_value(x) for x in v)
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        return float(format(v, f".{SIG_DIGITS}g")) if math.isfinite(v) else str(v)
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    return v


def render(records: list[dict], fmt: str, provenance: dict) -> str:
    buf = io.StringIO()
    if fmt == "json":
        buf.write(json.dumps({"provenance": provenance}, sort_keys=True) + "\n")
        for rec in records:
            buf.write(json.dumps({k: _json_value(v) for k, v in rec.items()}) + "\n")
        return buf.getvalue()
    for key, value in provenance.items():
        buf.write(f"# {key}: {value}\n")
    if records:
        columns = list(records[0])
        for rec in records[1:]:
            columns += [c for c in rec if c not in columns]
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: fmt_value(rec.get(k)) for k in columns})
    return buf.getvalue()
