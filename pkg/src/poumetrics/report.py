"""Result assembly and serialization.

One analysis run produces a ranked list of per-POU rows plus per-group
statistics.  Rows are ordered ascending by the overall value with name
as tie-breaker, so equal inputs always serialize byte-identically.

Columns m1..m6 are the raw metric values (program length, cyclomatic
complexity, information flow, vocabulary, difficulty, declaration
weight); c1..c6 are the same metrics as a percentage of their group
median; oc_rel is the weighted overall value.  Exact rational cells are
rendered with four fractional digits, ties rounded to even.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .aggregate import GroupStats, PouResult, SampleEntry, aggregate
from .config import AnalysisConfig, Grouping
from .errors import SKIP_CODES, AnalysisWarning, NoPousFound
from .load import load_sample
from .metrics import METRIC_KEYS, compute_vector

METRIC_COLUMNS = tuple("m%d" % (i + 1) for i in range(len(METRIC_KEYS)))
RELATIVE_COLUMNS = tuple("c%d" % (i + 1) for i in range(len(METRIC_KEYS)))
CSV_HEADER = ("name", "kind", "language") + METRIC_COLUMNS + RELATIVE_COLUMNS + ("oc_rel", "tag")


def fmt4(value: Fraction) -> str:
    """Render an exact rational with 4 fractional digits, half to even."""
    scaled = Fraction(value) * 10000
    q, r = divmod(scaled.numerator, scaled.denominator)
    double = 2 * r
    if double > scaled.denominator or (double == scaled.denominator and q % 2 == 1):
        q += 1
    sign = "-" if q < 0 else ""
    q = abs(q)
    return "%s%d.%04d" % (sign, q // 10000, q % 10000)


def _raw_cells(result: PouResult) -> list:
    cells = []
    for key, value in zip(METRIC_KEYS, result.vector.as_tuple()):
        if key == "difficulty":
            cells.append(fmt4(value))
        else:
            cells.append(int(value))
    return cells


def _relative_cells(result: PouResult) -> list:
    return [None if rel is None else fmt4(rel * result.scale) for rel in result.relative]


@dataclass
class RunResult:
    results: list[PouResult] = field(default_factory=list)
    stats: list[GroupStats] = field(default_factory=list)
    warnings: list[AnalysisWarning] = field(default_factory=list)
    grouping: str = Grouping.WHOLE_SAMPLE.value

    @property
    def exit_code(self) -> int:
        if any(w.code in SKIP_CODES for w in self.warnings):
            return 2
        return 0


def analyze_paths(paths, cfg: AnalysisConfig | None = None) -> RunResult:
    """Load every POU under `paths`, compute metrics and rank them."""
    cfg = cfg or AnalysisConfig()
    sample = load_sample(paths, cfg.array_sub_cap)
    if not sample.pous:
        raise NoPousFound("no POUs found under: %s" % ", ".join(str(p) for p in paths))
    entries = [
        SampleEntry(
            name=pou.name,
            kind=pou.kind,
            language=pou.language,
            vector=compute_vector(pou, cfg.weight_table),
            tag=cfg.annotations.get(pou.name.casefold(), ""),
        )
        for pou in sample.pous
    ]
    results, stats, agg_warnings = aggregate(entries, cfg.grouping, cfg.profiles, cfg.normalize)
    return RunResult(
        results=results,
        stats=stats,
        warnings=sample.warnings + agg_warnings,
        grouping=cfg.grouping.value,
    )


# ------------------------- serialization -------------------------


def report_object(run: RunResult) -> dict:
    """The report as plain data, ready for json.dump."""
    meta = {
        "tool": "poumetrics",
        "version": __version__,
        "pou_count": len(run.results),
        "grouping": run.grouping,
    }
    pous = []
    for result in run.results:
        row = {"name": result.name, "kind": result.kind.value, "language": result.language.value}
        row.update(zip(METRIC_COLUMNS, _raw_cells(result)))
        row.update(zip(RELATIVE_COLUMNS, _relative_cells(result)))
        row["oc_rel"] = fmt4(result.oc_rel)
        row["group"] = result.group
        row["tag"] = result.tag
        pous.append(row)

    groups = [
        {
            "label": stats.label,
            "size": stats.size,
            "medians": {col: fmt4(m) for col, m in zip(METRIC_COLUMNS, stats.medians)},
            "excluded": [METRIC_COLUMNS[i] for i in sorted(stats.excluded)],
        }
        for stats in run.stats
    ]
    warnings = [
        {"code": w.code, "message": w.message, "path": w.path, "pou": w.pou}
        for w in run.warnings
    ]
    return {"run": meta, "pous": pous, "groups": groups, "warnings": warnings}


def emit_json(run: RunResult) -> str:
    return json.dumps(report_object(run), indent=2) + "\n"


def emit_csv(run: RunResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_HEADER)
    for result in run.results:
        relative = ["" if cell is None else cell for cell in _relative_cells(result)]
        writer.writerow(
            [result.name, result.kind.value, result.language.value]
            + [str(c) for c in _raw_cells(result)]
            + relative
            + [fmt4(result.oc_rel), result.tag]
        )
    return buf.getvalue()


def render_table(run: RunResult, top: int | None = None) -> str:
    """Plain-text ranking, most complex first, for terminal output."""
    ranked = list(reversed(run.results))
    if top is not None:
        ranked = ranked[:top]
    header = ("#", "name", "language", "oc_rel", "tag")
    rows = [
        (str(i + 1), r.name, r.language.value, fmt4(r.oc_rel), r.tag)
        for i, r in enumerate(ranked)
    ]
    widths = [max(len(h), *(len(row[col]) for row in rows)) if rows else len(h) for col, h in enumerate(header)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"
