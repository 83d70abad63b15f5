"""Minimal self-contained SVG plots; no plotting toolkit required.

Two chart types cover the experiment outputs: line charts for worst-shard
fraction over time and paired bars for achieved-versus-target comparisons.
"""
from __future__ import annotations

__all__ = ["line_chart", "achieved_vs_target_chart"]

_WIDTH, _HEIGHT = 720, 440
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 20, 34, 48
_COLORS = ("#1f6fb2", "#d1495b", "#3a9d23", "#8d5ab9", "#c78a00", "#3aaea6")


def _fmt(value: float) -> str:
    text = f"{value:.6g}"
    return text


def _axis_ticks(lo: float, hi: float, count: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / count
    return [lo + i * step for i in range(count + 1)]


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
            f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
            f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
            f'<text x="{_WIDTH / 2}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>',
            f'<text x="{_WIDTH / 2}" y="{_HEIGHT - 10}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{xlabel}</text>',
            f'<text x="16" y="{_HEIGHT / 2}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 16 {_HEIGHT / 2})">{ylabel}</text>',
        ]

    def add(self, fragment: str) -> None:
        self.parts.append(fragment)

    def write(self, path) -> None:
        self.parts.append("</svg>")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.parts))


def _scales(xlo, xhi, ylo, yhi):
    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(x):
        return _MARGIN_L + (x - xlo) / (xhi - xlo or 1) * plot_w

    def sy(y):
        return _HEIGHT - _MARGIN_B - (y - ylo) / (yhi - ylo or 1) * plot_h

    return sx, sy


def _draw_axes(canvas, sx, sy, xticks, yticks):
    x0, x1 = sx(xticks[0]), sx(xticks[-1])
    y0, y1 = sy(yticks[0]), sy(yticks[-1])
    canvas.add(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    canvas.add(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    for t in xticks:
        px = sx(t)
        canvas.add(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{y0 + 4}" stroke="black"/>')
        canvas.add(
            f'<text x="{px}" y="{y0 + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>'
        )
    for t in yticks:
        py = sy(t)
        canvas.add(f'<line x1="{x0 - 4}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>')
        canvas.add(
            f'<text x="{x0 - 8}" y="{py + 4}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>'
        )


def line_chart(series: dict, path, title: str, xlabel: str = "round",
               ylabel: str = "fraction") -> None:
    """series maps label -> (xs, ys); writes an SVG file."""
    if not series:
        raise ValueError("nothing to plot")
    all_x = [x for xs, _ in series.values() for x in xs]
    all_y = [y for _, ys in series.values() for y in ys]
    if not all_x:
        raise ValueError("empty series")
    xlo, xhi = min(all_x), max(all_x)
    ylo, yhi = min(0.0, min(all_y)), max(all_y) * 1.05 or 1.0
    sx, sy = _scales(xlo, xhi, ylo, yhi)
    canvas = _Canvas(title, xlabel, ylabel)
    _draw_axes(canvas, sx, sy, _axis_ticks(xlo, xhi), _axis_ticks(ylo, yhi))
    for idx, (label, (xs, ys)) in enumerate(series.items()):
        color = _COLORS[idx % len(_COLORS)]
        points = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in zip(xs, ys))
        canvas.add(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = _MARGIN_T + 16 * idx
        canvas.add(
            f'<line x1="{_WIDTH - 150}" y1="{ly}" x2="{_WIDTH - 126}" y2="{ly}" '
            f'stroke="{color}" stroke-width="3"/>'
        )
        canvas.add(
            f'<text x="{_WIDTH - 120}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )
    canvas.write(path)


def achieved_vs_target_chart(achieved, targets, path,
                             title: str = "achieved vs target") -> None:
    """Per-shard paired bars: the target next to the measured average."""
    if len(achieved) != len(targets) or not len(achieved):
        raise ValueError("achieved and targets must be equal-length, nonempty")
    count = len(achieved)
    ymax = max(max(achieved), max(targets)) * 1.1 or 1.0
    sx, sy = _scales(0, count, 0.0, ymax)
    canvas = _Canvas(title, "shard", "fraction")
    step = max(1, count // 10)
    _draw_axes(canvas, sx, sy, list(range(0, count + 1, step)), _axis_ticks(0.0, ymax))
    base = sy(0.0)
    slot = (sx(1) - sx(0))
    width = slot * 0.38
    for i, (a, t) in enumerate(zip(achieved, targets)):
        xt = sx(i) + slot * 0.08
        xa = xt + width
        canvas.add(
            f'<rect x="{xt:.1f}" y="{sy(t):.1f}" width="{width:.1f}" '
            f'height="{base - sy(t):.1f}" fill="#9dbbd8"/>'
        )
        canvas.add(
            f'<rect x="{xa:.1f}" y="{sy(a):.1f}" width="{width:.1f}" '
            f'height="{base - sy(a):.1f}" fill="#d1495b"/>'
        )
    canvas.add(
        f'<rect x="{_WIDTH - 150}" y="{_MARGIN_T - 8}" width="14" height="10" fill="#9dbbd8"/>'
        f'<text x="{_WIDTH - 130}" y="{_MARGIN_T + 1}" font-family="sans-serif" '
        f'font-size="11">target</text>'
    )
    canvas.add(
        f'<rect x="{_WIDTH - 150}" y="{_MARGIN_T + 10}" width="14" height="10" fill="#d1495b"/>'
        f'<text x="{_WIDTH - 130}" y="{_MARGIN_T + 19}" font-family="sans-serif" '
        f'font-size="11">achieved</text>'
    )
    canvas.write(path)
