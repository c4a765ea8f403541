"""Result emission as json-lines or CSV with a fixed field order.

CSV header (one column per name, in this order)::

    aggregate, run, phase, commit_flag, flag_a, flag_b, c, c_hat, c_match,
    distance, transcript_digest, trials, success_rate, erase_rate,
    c_agreement, advantage, advantage_sigma, advantage_bound, equivocation,
    exact_accept, checks_passed, config_digest

Per-run rows leave the aggregate columns empty.  The aggregate row has
``aggregate=true`` and leaves the per-run columns empty.  A report with no
runs and no aggregate produces the header alone.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

RUN_FIELDS = ("run", "phase", "commit_flag", "flag_a", "flag_b", "c", "c_hat", "c_match",
              "distance", "transcript_digest")
AGGREGATE_FIELDS = ("trials", "success_rate", "erase_rate", "c_agreement", "advantage",
                    "advantage_sigma", "advantage_bound", "equivocation", "exact_accept",
                    "checks_passed", "config_digest")
CSV_FIELDS = ("aggregate",) + RUN_FIELDS + AGGREGATE_FIELDS


@dataclass
class ScenarioReport:
    records: List[Dict[str, Any]] = field(default_factory=list)
    aggregate: Optional[Dict[str, Any]] = None
    checks: Dict[str, bool] = field(default_factory=dict)
    transcripts: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _ordered(rec: Dict[str, Any], names, aggregate: bool) -> Dict[str, Any]:
    out: Dict[str, Any] = {"aggregate": aggregate}
    for name in names:
        out[name] = rec.get(name)
    return out


def render_jsonl(report: ScenarioReport) -> str:
    lines = [json.dumps(_ordered(r, RUN_FIELDS, False)) for r in report.records]
    if report.aggregate is not None:
        lines.append(json.dumps(_ordered(report.aggregate, AGGREGATE_FIELDS, True)))
    return "".join(line + "\n" for line in lines)


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(report: ScenarioReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    rows = [_ordered(r, RUN_FIELDS, False) for r in report.records]
    if report.aggregate is not None:
        rows.append(_ordered(report.aggregate, AGGREGATE_FIELDS, True))
    for row in rows:
        writer.writerow([_cell(row.get(name)) for name in CSV_FIELDS])
    return buf.getvalue()


def emit_results(report: ScenarioReport, path: Union[str, Path], fmt: str = "json-lines") -> Path:
    """Write ``report`` to ``path``; raises OSError when the path is unwritable."""
    if fmt == "json-lines":
        text = render_jsonl(report)
    elif fmt == "csv":
        text = render_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def format_table(rows: List[Dict[str, Any]], columns) -> str:
    """Left-aligned text table."""
    cells = [[str(c) for c in columns]] + [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "\n".join("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells)
