"""Stacked-bar SVG rendering of a ranked sample.

Each POU gets one horizontal bar; the bar's segments are the weighted
per-metric contributions, so segment lengths sum to the reported overall
value.  Segments are colored by complexity class; the two vocabulary and
difficulty segments share the class hue in two shades.  Output is plain
deterministic text: same results, same bytes.
"""

from __future__ import annotations

from .aggregate import PouResult
from .metrics import METRIC_CLASSES, METRIC_KEYS

# One fill per metric, grouped visually by complexity class.
METRIC_FILLS = (
    "#4e79a7",  # program length: size
    "#f28e2b",  # cyclomatic: control flow
    "#e15759",  # information flow
    "#76b7b2",  # vocabulary: software science, light shade
    "#4c908c",  # difficulty: software science, dark shade
    "#59a14f",  # declaration weight: data structure
)

_PX_PER_PERCENT = 3.0
_BAR_HEIGHT = 18
_BAR_GAP = 8
_LEFT_MARGIN = 220
_TOP_MARGIN = 20
_LEGEND_HEIGHT = 70
_RIGHT_PAD = 40


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _num(value: float) -> str:
    return "%.4f" % value


def render_chart(results: list[PouResult]) -> str:
    """Render the ranked results as a standalone SVG document."""
    rows = list(results)
    max_total = max((float(r.oc_rel) for r in rows), default=0.0)
    span = max(max_total, 100.0)
    width = _LEFT_MARGIN + span * _PX_PER_PERCENT + _RIGHT_PAD
    height = _TOP_MARGIN + len(rows) * (_BAR_HEIGHT + _BAR_GAP) + _LEGEND_HEIGHT

    out: list[str] = []
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" '
        'viewBox="0 0 %s %s" font-family="sans-serif" font-size="12">'
        % (_num(width), _num(height), _num(width), _num(height))
    )
    out.append('<rect x="0" y="0" width="%s" height="%s" fill="#ffffff"/>' % (_num(width), _num(height)))

    bars_bottom = _TOP_MARGIN + len(rows) * (_BAR_HEIGHT + _BAR_GAP)
    for row_index, result in enumerate(rows):
        y = _TOP_MARGIN + row_index * (_BAR_HEIGHT + _BAR_GAP)
        label = result.name if not result.tag else "%s [%s]" % (result.name, result.tag)
        out.append(
            '<text x="%s" y="%s" text-anchor="end">%s</text>'
            % (_num(_LEFT_MARGIN - 8), _num(y + _BAR_HEIGHT - 5), _esc(label))
        )
        x = float(_LEFT_MARGIN)
        for metric_index, key in enumerate(METRIC_KEYS):
            seg = float(result.segment(metric_index)) * _PX_PER_PERCENT
            if seg <= 0:
                continue
            out.append(
                '<rect data-pou="%s" data-metric="%s" x="%s" y="%s" width="%s" height="%s" fill="%s"/>'
                % (
                    _esc(result.name),
                    key,
                    _num(x),
                    _num(y),
                    _num(seg),
                    _num(_BAR_HEIGHT),
                    METRIC_FILLS[metric_index],
                )
            )
            x += seg
        out.append(
            '<text x="%s" y="%s">%s</text>'
            % (_num(x + 6), _num(y + _BAR_HEIGHT - 5), _esc("%.1f" % float(result.oc_rel)))
        )

    # Reference line where a bar exactly matches the group medians.
    ref_x = _LEFT_MARGIN + 100.0 * _PX_PER_PERCENT
    out.append(
        '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#555555" stroke-dasharray="4 3"/>'
        % (_num(ref_x), _num(float(_TOP_MARGIN - 6)), _num(ref_x), _num(float(bars_bottom)))
    )
    out.append(
        '<text x="%s" y="%s" text-anchor="middle" fill="#555555">100</text>'
        % (_num(ref_x), _num(float(bars_bottom + 14)))
    )

    legend_y = bars_bottom + 28
    x = float(_LEFT_MARGIN)
    drawn: set[str] = set()
    for metric_index, key in enumerate(METRIC_KEYS):
        cls = METRIC_CLASSES[key]
        label = cls if cls not in drawn else None
        drawn.add(cls)
        out.append(
            '<rect x="%s" y="%s" width="12" height="12" fill="%s"/>'
            % (_num(x), _num(float(legend_y)), METRIC_FILLS[metric_index])
        )
        x += 16.0
        if label is not None:
            out.append(
                '<text x="%s" y="%s">%s</text>' % (_num(x), _num(float(legend_y + 11)), _esc(label))
            )
            x += 9.0 * len(label) + 18.0
    out.append("</svg>")
    return "\n".join(out) + "\n"
