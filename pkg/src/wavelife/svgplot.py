"""Minimal standalone SVG line charts with deterministic output."""

from __future__ import annotations

import math
from typing import Sequence

WIDTH, HEIGHT, PAD = 480, 360, 56
COLORS = ("#1f4e9c", "#c0392b", "#2e7d32", "#6a1b9a")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def line_chart(
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    xlabel: str = "",
    ylabel: str = "",
    title: str = "",
    logx: bool = False,
    logy: bool = False,
    markers: bool = True,
) -> str:
    """Render ``(label, xs, ys)`` series; log axes take log10 of the data."""
    tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    ty = (lambda v: math.log10(v)) if logy else (lambda v: v)
    pts = [[(tx(x), ty(y)) for x, y in zip(xs, ys)] for _, xs, ys in series]
    allx = [p[0] for s in pts for p in s] or [0.0, 1.0]
    ally = [p[1] for s in pts for p in s] or [0.0, 1.0]
    x0, x1, y0, y1 = min(allx), max(allx), min(ally), max(ally)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1

    def X(v):
        return PAD + (v - x0) / (x1 - x0) * (WIDTH - 2 * PAD)

    def Y(v):
        return HEIGHT - PAD - (v - y0) / (y1 - y0) * (HEIGHT - 2 * PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{PAD}" y1="{HEIGHT - PAD}" x2="{WIDTH - PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
    ]
    fmt_x = (lambda v: f"1e{v:.2f}") if logx else (lambda v: f"{v:.3g}")
    fmt_y = (lambda v: f"1e{v:.2f}") if logy else (lambda v: f"{v:.3g}")
    for v in _ticks(x0, x1):
        out.append(f'<line x1="{X(v):.2f}" y1="{HEIGHT - PAD}" x2="{X(v):.2f}" y2="{HEIGHT - PAD + 4}" stroke="black"/>')
        out.append(f'<text x="{X(v):.2f}" y="{HEIGHT - PAD + 16}" text-anchor="middle">{fmt_x(v)}</text>')
    for v in _ticks(y0, y1):
        out.append(f'<line x1="{PAD - 4}" y1="{Y(v):.2f}" x2="{PAD}" y2="{Y(v):.2f}" stroke="black"/>')
        out.append(f'<text x="{PAD - 6}" y="{Y(v) + 4:.2f}" text-anchor="end">{fmt_y(v)}</text>')
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="{PAD / 2:.2f}" text-anchor="middle" font-size="13">{title}</text>')
    if xlabel:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="{HEIGHT - 12}" text-anchor="middle">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="14" y="{HEIGHT / 2:.2f}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {HEIGHT / 2:.2f})">{ylabel}</text>')
    for k, ((label, _, _), s) in enumerate(zip(series, pts)):
        color = COLORS[k % len(COLORS)]
        path = " ".join(f"{X(a):.2f},{Y(b):.2f}" for a, b in s)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        if markers:
            out.extend(f'<circle cx="{X(a):.2f}" cy="{Y(b):.2f}" r="2.5" fill="{color}"/>' for a, b in s)
        out.append(f'<text x="{WIDTH - PAD - 4}" y="{PAD + 14 * (k + 1)}" text-anchor="end" fill="{color}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
