"""Deterministic SVG rendering of biplot scenes.

Output is plain SVG 1.1 text built with fixed number formatting, so the
same scene always renders to identical bytes. The viewport is 800x800
with a 10% margin and equal aspect ratio; axis polylines are clipped to
the scene's display range of grid offsets, not the full tracing grid.
"""

import numpy as np

VIEW = 800.0
MARGIN = 0.10

_POINT_STYLE = 'fill="#3b6fa0" stroke="none"'
_AXIS_STYLE = 'fill="none" stroke="#a03b3b" stroke-width="1.5"'
_AXIS_DOT_STYLE = 'fill="#a03b3b" stroke="none"'
_ATTR_STYLE = 'fill="#c07820" stroke="none"'


def _fmt(v):
    return f"{v:.2f}"


def _clipped_points(trace, display_range):
    lo, hi = display_range
    mask = (trace.grid.values >= lo) & (trace.grid.values <= hi)
    return trace.points[mask]


def _scene_drawables(scene):
    groups = [scene.embedding.coordinates]
    for trace in scene.traces:
        pts = _clipped_points(trace, scene.display_range)
        if pts.size:
            groups.append(pts)
    if scene.attr_points is not None and len(scene.attr_points):
        groups.append(np.asarray(scene.attr_points))
    return np.vstack(groups)


def _make_transform(all_xy):
    lo = all_xy.min(axis=0)
    hi = all_xy.max(axis=0)
    center = 0.5 * (lo + hi)
    extent = float(np.max(hi - lo))
    if extent < 1e-12:
        extent = 1.0
    scale = VIEW * (1.0 - 2.0 * MARGIN) / extent

    def to_screen(xy):
        x = VIEW / 2.0 + (xy[0] - center[0]) * scale
        y = VIEW / 2.0 - (xy[1] - center[1]) * scale
        return x, y

    return to_screen


def _arrowhead(tip, prev, to_screen):
    tx, ty = to_screen(tip)
    px, py = to_screen(prev)
    dx, dy = tx - px, ty - py
    norm = (dx * dx + dy * dy) ** 0.5
    if norm < 1e-9:
        return ""
    ux, uy = dx / norm, dy / norm
    size = 9.0
    left = (tx - size * ux + 0.5 * size * uy, ty - size * uy - 0.5 * size * ux)
    right = (tx - size * ux - 0.5 * size * uy, ty - size * uy + 0.5 * size * ux)
    pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in ((tx, ty), left, right))
    return f'  <polygon points="{pts}" fill="#a03b3b"/>\n'


def _axis_name(scene, k):
    if scene.attribute_names is not None:
        return scene.attribute_names[k]
    return f"x{k + 1}"


def render_svg(scene):
    """Render a BiplotScene to SVG text."""
    to_screen = _make_transform(_scene_drawables(scene))
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{int(VIEW)}" height="{int(VIEW)}" viewBox="0 0 {int(VIEW)} {int(VIEW)}">\n',
        f'  <rect width="{int(VIEW)}" height="{int(VIEW)}" fill="white"/>\n',
    ]

    for trace in scene.traces:
        pts = _clipped_points(trace, scene.display_range)
        if not len(pts):
            continue
        name = _axis_name(scene, trace.attribute_index)
        spread = float(np.max(pts.max(axis=0) - pts.min(axis=0))) if len(pts) > 1 else 0.0
        ex, ey = to_screen(pts[-1])
        if spread < 1e-8:
            # Degenerate trace (all grid offsets solved to one location).
            parts.append(f'  <circle cx="{_fmt(ex)}" cy="{_fmt(ey)}" r="4" {_AXIS_DOT_STYLE}/>\n')
        else:
            coords = " ".join(
                f"{_fmt(sx)},{_fmt(sy)}" for sx, sy in (to_screen(q) for q in pts)
            )
            parts.append(f'  <polyline points="{coords}" {_AXIS_STYLE}/>\n')
            parts.append(_arrowhead(pts[-1], pts[-2], to_screen))
        parts.append(
            f'  <text x="{_fmt(ex + 8)}" y="{_fmt(ey - 8)}" font-size="12" '
            f'fill="#a03b3b">{name}</text>\n'
        )

    if scene.attr_points is not None:
        for k, row in enumerate(np.asarray(scene.attr_points)):
            sx, sy = to_screen(row)
            parts.append(
                f'  <rect x="{_fmt(sx - 4)}" y="{_fmt(sy - 4)}" width="8" height="8" {_ATTR_STYLE}/>\n'
            )
            parts.append(
                f'  <text x="{_fmt(sx + 8)}" y="{_fmt(sy - 8)}" font-size="12" '
                f'fill="#c07820">{_axis_name(scene, k)}</text>\n'
            )

    for i, xy in enumerate(scene.embedding.coordinates):
        sx, sy = to_screen(xy)
        label = scene.ids[i] if scene.ids is not None else str(i + 1)
        parts.append(f'  <circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="4" {_POINT_STYLE}/>\n')
        parts.append(
            f'  <text x="{_fmt(sx + 6)}" y="{_fmt(sy + 12)}" font-size="11" '
            f'fill="#333333">{label}</text>\n'
        )

    if scene.removed:
        y = VIEW - 14.0 * len(scene.removed) - 10.0
        parts.append(
            f'  <text x="12" y="{_fmt(y)}" font-size="11" fill="#555555">removed axes:</text>\n'
        )
        for j, (k, g) in enumerate(scene.removed):
            parts.append(
                f'  <text x="12" y="{_fmt(y + 14.0 * (j + 1))}" font-size="11" '
                f'fill="#555555">{_axis_name(scene, k)} (G={g:.4g})</text>\n'
            )

    parts.append("</svg>\n")
    return "".join(parts)
