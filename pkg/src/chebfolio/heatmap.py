"""Static SVG heatmaps of labelled matrices."""

from __future__ import annotations

from xml.sax.saxutils import escape

from chebfolio.report import display3

CELL = 44
LABEL_W = 90
TITLE_H = 28
GAP = 40


def _color(v):
    """Diverging blue-white-red ramp on [-1, 1]."""
    v = max(-1.0, min(1.0, float(v)))
    if v >= 0:
        r, g, b = 255, round(255 * (1 - v)), round(255 * (1 - v))
    else:
        r, g, b = round(255 * (1 + v)), round(255 * (1 + v)), 255
    return f"#{r:02x}{g:02x}{b:02x}"


def _panel(matrix, title, x0):
    labels = matrix.labels
    m = len(labels)
    parts = [
        f'<text x="{x0 + LABEL_W}" y="18" font-size="14" font-weight="bold">{escape(title)}</text>'
    ]
    top = TITLE_H + LABEL_W
    for j, lab in enumerate(labels):
        cx = x0 + LABEL_W + j * CELL + CELL // 2
        parts.append(
            f'<text x="{cx}" y="{top - 6}" font-size="11" text-anchor="start" '
            f'transform="rotate(-60 {cx} {top - 6})">{escape(lab)}</text>'
        )
    for i, lab in enumerate(labels):
        y = top + i * CELL
        parts.append(
            f'<text x="{x0 + LABEL_W - 6}" y="{y + CELL // 2 + 4}" font-size="11" '
            f'text-anchor="end">{escape(lab)}</text>'
        )
        for j in range(m):
            v = matrix.entries[i, j]
            x = x0 + LABEL_W + j * CELL
            parts.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                f'fill="{_color(v)}" stroke="#888" stroke-width="0.5"/>'
            )
            parts.append(
                f'<text x="{x + CELL // 2}" y="{y + CELL // 2 + 4}" font-size="10" '
                f'text-anchor="middle">{display3(v)}</text>'
            )
    width = LABEL_W + m * CELL
    return parts, width, top + m * CELL


def render_svg(panels):
    """Render ``[(title, LabeledMatrix), ...]`` side by side into one SVG string."""
    body = []
    x0 = 10
    height = 0
    for title, matrix in panels:
        parts, w, h = _panel(matrix, title, x0)
        body.extend(parts)
        x0 += w + GAP
        height = max(height, h)
    width = x0 - GAP + 10
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height + 10}" '
        f'font-family="sans-serif">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"
