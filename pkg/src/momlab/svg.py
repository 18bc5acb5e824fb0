"""Hand-emitted log-log SVG plots of error-quantile curves.

Output is deterministic byte-for-byte given the same input rows and version
string: floats are formatted with fixed precision and curves are drawn in
sorted key order.
"""

import math

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 160, 40, 55

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _tick_label(exp: int) -> str:
    return f"1e{exp}"


def render_loglog_svg(points_by_curve: dict, title: str, reference_slope, version: str) -> str:
    """Render dashed curves of (alpha, value) points plus a solid reference line.

    points_by_curve maps a curve name to a list of (alpha, value) pairs; pairs
    with value <= 0 are dropped (no log).  The reference line, when a slope is
    given, is anchored at the last point of the first curve.
    """
    curves = []
    for name in sorted(points_by_curve):
        pts = [(a, v) for a, v in points_by_curve[name] if a > 0 and v > 0]
        if pts:
            curves.append((name, sorted(pts)))
    if not curves:
        raise ValueError("nothing to plot: no positive points")

    xs = [math.log10(a) for _, pts in curves for a, _ in pts]
    ys = [math.log10(v) for _, pts in curves for _, v in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if reference_slope is not None:
        a0, v0 = curves[0][1][-1]
        ref = [(a, v0 * (a / a0) ** reference_slope) for a, _ in curves[0][1]]
        ys += [math.log10(v) for _, v in ref]
        y_lo, y_hi = min(ys), max(ys)
    x_pad = 0.05 * max(x_hi - x_lo, 1e-9)
    y_pad = 0.05 * max(y_hi - y_lo, 1e-9)
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(a: float) -> float:
        return MARGIN_L + (math.log10(a) - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return MARGIN_T + (y_hi - math.log10(v)) / (y_hi - y_lo) * plot_h

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    out.append(f"<!-- momlab {version} -->")
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    out.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )

    font = 'font-family="monospace" font-size="12"'
    for exp in range(math.ceil(x_lo), math.floor(x_hi) + 1):
        x = MARGIN_L + (exp - x_lo) / (x_hi - x_lo) * plot_w
        out.append(
            f'<line x1="{_fmt(x)}" y1="{MARGIN_T}" x2="{_fmt(x)}" y2="{MARGIN_T + plot_h}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(x)}" y="{MARGIN_T + plot_h + 18}" text-anchor="middle" {font}>'
            f"{_tick_label(exp)}</text>"
        )
    for exp in range(math.ceil(y_lo), math.floor(y_hi) + 1):
        y = MARGIN_T + (y_hi - exp) / (y_hi - y_lo) * plot_h
        out.append(
            f'<line x1="{MARGIN_L}" y1="{_fmt(y)}" x2="{MARGIN_L + plot_w}" y2="{_fmt(y)}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{_fmt(y + 4)}" text-anchor="end" {font}>'
            f"{_tick_label(exp)}</text>"
        )
    out.append(
        f'<text x="{MARGIN_L + plot_w / 2:.0f}" y="{HEIGHT - 12}" text-anchor="middle" {font}>'
        "contamination fraction</text>"
    )
    out.append(
        f'<text x="18" y="{MARGIN_T + plot_h / 2:.0f}" text-anchor="middle" {font} '
        f'transform="rotate(-90 18 {MARGIN_T + plot_h / 2:.0f})">estimation error</text>'
    )
    out.append(
        f'<text x="{MARGIN_L}" y="{MARGIN_T - 14}" font-family="monospace" font-size="14">{title}</text>'
    )

    if reference_slope is not None:
        path = " ".join(f"{_fmt(px(a))},{_fmt(py(v))}" for a, v in ref)
        out.append(f'<polyline points="{path}" fill="none" stroke="black" stroke-width="1.6"/>')

    legend_y = MARGIN_T + 10
    for idx, (name, pts) in enumerate(curves):
        color = PALETTE[idx % len(PALETTE)]
        path = " ".join(f"{_fmt(px(a))},{_fmt(py(v))}" for a, v in pts)
        out.append(
            f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.6" '
            f'stroke-dasharray="6,3"/>'
        )
        lx = WIDTH - MARGIN_R + 10
        out.append(
            f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 22}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="1.6" stroke-dasharray="6,3"/>'
        )
        out.append(
            f'<text x="{lx + 27}" y="{legend_y + 4}" font-family="monospace" font-size="10">{name}</text>'
        )
        legend_y += 16
    if reference_slope is not None:
        lx = WIDTH - MARGIN_R + 10
        out.append(
            f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 22}" y2="{legend_y}" '
            f'stroke="black" stroke-width="1.6"/>'
        )
        out.append(
            f'<text x="{lx + 27}" y="{legend_y + 4}" font-family="monospace" font-size="10">'
            f"slope {reference_slope:.3g}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
