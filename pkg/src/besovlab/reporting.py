"""
Report files: one JSON document per report and one CSV table per measured
quantity, each carrying the full resolved configuration.

CSV tables have the fixed columns index, measured, threshold, pass and are
preceded by two comment lines, `# config: {...}` and `# report: ...`, so
`numpy.genfromtxt(path, delimiter=",", skip_header=2, names=True,
dtype=None)` reads them directly.  Every file is written to a temporary sibling and renamed into
place.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import tempfile
from pathlib import Path

from .experiments import ExperimentReport

__all__ = ["atomic_write", "report_stem", "report_to_json", "quantity_csv", "write_report"]

CSV_COLUMNS = ("index", "measured", "threshold", "pass")


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.=+-]+", "-", str(text)).strip("-")


def report_stem(report: ExperimentReport) -> str:
    """File stem: experiment name plus the parameters that distinguish runs."""
    p = report.parameters
    parts = [report.name]
    if "model" in p:
        parts.append(p["model"])
    if report.name == "localization":
        parts.append(f"k{p['k']}-n{p['n']}" + ("" if p.get("i") is None else f"-i{p['i']}"))
    if report.name == "ch-lower-bound":
        parts.append(f"p{p['p']:g}")
    return _slug("_".join(parts))


def _finite(x):
    """JSON has no inf/nan; spell them as strings."""
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_finite(v) for v in x]
    return x


def report_to_json(report: ExperimentReport, config: dict) -> str:
    doc = {"config": config, **report.to_dict()}
    return json.dumps(_finite(doc), indent=2, default=float) + "\n"


def _fmt_threshold(t) -> str:
    if t is None:
        return ""
    if isinstance(t, (tuple, list)):
        return f"[{t[0]!r}, {t[1]!r}]"
    return repr(t)


def quantity_csv(report: ExperimentReport, quantity: str, config: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(_finite(config), sort_keys=True)}\n")
    buf.write(f"# report: {report.name} quantity: {quantity} verdict: {'pass' if report.verdict else 'fail'}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.rows_for(quantity):
        passed = "" if r.passed is None else str(r.passed).lower()
        w.writerow([r.index, repr(r.measured), _fmt_threshold(r.threshold), passed])
    return buf.getvalue()


def write_report(report: ExperimentReport, config: dict, out_dir, fmt: str = "both") -> list[Path]:
    """Write the report in `fmt` ("csv", "json" or "both"); returns the paths."""
    out_dir = Path(out_dir)
    stem = report_stem(report)
    paths = []
    if fmt in ("json", "both"):
        paths.append(atomic_write(out_dir / f"{stem}.json", report_to_json(report, config)))
    if fmt in ("csv", "both"):
        for q in report.quantities():
            paths.append(atomic_write(out_dir / f"{stem}__{_slug(q)}.csv", quantity_csv(report, q, config)))
    return paths
