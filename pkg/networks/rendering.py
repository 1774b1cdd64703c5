"""
Knuth-diagram rendering: channels are horizontal lines, comparators vertical
connectors. Comparators of one layer whose spans overlap are spread over
several columns, so each layer becomes a column group.
"""

from django.template.loader import render_to_string
from reportlab.graphics import renderPDF
from reportlab.graphics.shapes import Circle, Drawing, Line, Rect, String
from reportlab.lib import colors

FORMATS = ("text", "svg", "pdf")

SPACING = 24
MARGIN = 20


def layer_columns(layer):
    """Assign each comparator of a layer to the first column where its span fits."""
    columns = []
    placed = []
    for comparator in layer:
        for index, spans in enumerate(columns):
            if all(comparator.bottom < top or comparator.top > bottom for top, bottom in spans):
                spans.append((comparator.top, comparator.bottom))
                placed.append((index, comparator))
                break
        else:
            columns.append([(comparator.top, comparator.bottom)])
            placed.append((len(columns) - 1, comparator))
    return max(1, len(columns)), placed


def layout(net):
    """
    Column positions of every comparator: a list of ``(column, comparator)``
    plus the start column and width of each layer group.
    """
    items, groups = [], []
    column = 0
    for layer in net.layers:
        width, placed = layer_columns(layer)
        groups.append((column, width))
        items.extend((column + offset, comparator) for offset, comparator in placed)
        column += width + 1
    return items, groups, max(0, column - 1)


def render_text(net):
    items, groups, columns = layout(net)
    rows = max(0, 2 * net.channels - 1)
    width = 2 * columns + 2
    grid = [[("-" if r % 2 == 0 else " ") for _ in range(width)] for r in range(rows)]
    for column, comparator in items:
        x = 2 * column + 1
        top, bottom = 2 * (comparator.top - 1), 2 * (comparator.bottom - 1)
        for r in range(top, bottom + 1):
            grid[r][x] = "+" if r % 2 == 0 else "|"
        grid[top][x] = grid[bottom][x] = "o"
    label = len(str(net.channels))
    lines = []
    for r, row in enumerate(grid):
        prefix = str(r // 2 + 1).rjust(label) if r % 2 == 0 else " " * label
        lines.append(f"{prefix} {''.join(row)}".rstrip())
    lines.append(f"{net.channels} channels, depth {net.depth}, size {net.size}")
    return "\n".join(lines) + "\n"


def render_svg(net, title=""):
    items, groups, columns = layout(net)
    context = {
        "title": title or f"{net.channels} channels, depth {net.depth}",
        "spacing": SPACING,
        "margin": MARGIN,
        "width": 2 * MARGIN + max(1, columns + 1) * SPACING,
        "height": 2 * MARGIN + max(0, net.channels - 1) * SPACING,
        "channels": range(net.channels),
        "groups": [{"start": start, "width": width} for start, width in groups],
        "comparators": [
            {
                "column": column + 1,
                "top": comparator.top - 1,
                "bottom": comparator.bottom - 1,
                "min_end": comparator.lo - 1,
                "twisted": not comparator.is_standard,
            }
            for column, comparator in items
        ],
    }
    return render_to_string("networks/diagram.svg", context)


def render_pdf(net, title=""):
    items, groups, columns = layout(net)
    width = 2 * MARGIN + max(1, columns + 1) * SPACING
    height = 2 * MARGIN + max(0, net.channels - 1) * SPACING + SPACING

    def y(channel):
        return height - MARGIN - SPACING - (channel - 1) * SPACING

    drawing = Drawing(width, height)
    drawing.add(String(MARGIN, height - MARGIN, title or f"{net.channels} channels, depth {net.depth}",
                       fontName="Helvetica", fontSize=10, fillColor=colors.HexColor("#1e293b")))
    for index, (start, span) in enumerate(groups):
        if index % 2:
            drawing.add(Rect(MARGIN + (start + 0.5) * SPACING, MARGIN / 2, span * SPACING,
                             height - MARGIN - SPACING / 2, fillColor=colors.HexColor("#f1f5f9"),
                             strokeColor=None))
    for channel in range(1, net.channels + 1):
        drawing.add(Line(MARGIN, y(channel), width - MARGIN, y(channel), strokeColor=colors.HexColor("#334155")))
    for column, comparator in items:
        x = MARGIN + (column + 1) * SPACING
        drawing.add(Line(x, y(comparator.top), x, y(comparator.bottom), strokeWidth=1.5))
        for channel in comparator.channels:
            drawing.add(Circle(x, y(channel), 3, fillColor=colors.black))
    return renderPDF.drawToString(drawing)


def render(net, fmt="text", title=""):
    """Render ``net`` as ``text``, ``svg`` (str) or ``pdf`` (bytes)."""
    if fmt == "text":
        return render_text(net)
    if fmt == "svg":
        return render_svg(net, title)
    if fmt == "pdf":
        return render_pdf(net, title)
    raise ValueError(f"unknown format {fmt!r}, expected one of {', '.join(FORMATS)}")
