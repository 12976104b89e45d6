"""Static SVG rendering of solved runs: no plotting dependencies, diffable output."""

from __future__ import annotations

from xml.sax.saxutils import escape

_PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
]

_WIDTH = 720.0
_MARGIN = 40.0
_LEGEND_ROW = 16.0


def render_record(record: dict) -> str:
    """Render a run record (see cli.RunRecord JSON) to an SVG document.

    Depots draw as squares, targets as circles with area keyed to dwell
    time, and each non-empty route as one closed polyline.
    """
    targets = record["targets"]
    depots = record["depots"]
    routes = record["routes"]

    xs = [p[0] for p in targets + depots]
    ys = [p[1] for p in targets + depots]
    span_x = max(xs) - min(xs) or 1.0
    span_y = max(ys) - min(ys) or 1.0
    scale = (_WIDTH - 2 * _MARGIN) / max(span_x, span_y)
    height = 2 * _MARGIN + span_y * scale + _LEGEND_ROW * (len(routes) + 1)

    def sx(x: float) -> float:
        return _MARGIN + (x - min(xs)) * scale

    def sy(y: float) -> float:
        # flip: SVG y grows downward
        return _MARGIN + (max(ys) - y) * scale

    dwell_by_target = {}
    for route in routes:
        for t, d in zip(route["order"], route["dwells"]):
            dwell_by_target[t] = d
    max_dwell = max(dwell_by_target.values(), default=0.0)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {_WIDTH:.0f} {height:.0f}">',
        f'<title>{escape(str(record.get("instance", "")))}</title>',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for k, route in enumerate(routes):
        color = _PALETTE[k % len(_PALETTE)]
        if route["order"]:
            pts = [route["depot"]] + [targets[t] for t in route["order"]] + [route["depot"]]
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
    for t, (x, y) in enumerate(targets):
        d = dwell_by_target.get(t, 0.0)
        r = 2.5 + (4.5 * d / max_dwell if max_dwell > 0 else 0.0)
        parts.append(
            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="{r:.2f}" '
            f'fill="#444" fill-opacity="0.5" stroke="#222" stroke-width="0.5"/>'
        )
    for k, route in enumerate(routes):
        color = _PALETTE[k % len(_PALETTE)]
        x, y = route["depot"]
        parts.append(
            f'<rect x="{sx(x) - 5:.2f}" y="{sy(y) - 5:.2f}" width="10" height="10" '
            f'fill="{color}" stroke="black" stroke-width="1"/>'
        )
    legend_y = 2 * _MARGIN + span_y * scale
    for k, route in enumerate(routes):
        color = _PALETTE[k % len(_PALETTE)]
        y = legend_y + _LEGEND_ROW * (k + 1)
        parts.append(f'<rect x="{_MARGIN:.0f}" y="{y - 9:.2f}" width="10" height="10" fill="{color}"/>')
        parts.append(
            f'<text x="{_MARGIN + 16:.0f}" y="{y:.2f}" font-size="12" font-family="sans-serif">'
            f'vehicle {route["vehicle"]}: {len(route["order"])} targets, '
            f'objective {route["objective"]:.6g}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
