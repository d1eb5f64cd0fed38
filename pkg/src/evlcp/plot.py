"""Byte-stable log-log SVG plot of relative bounds against eps."""
import math
from collections import defaultdict

import numpy as np

from .errors import EmptyInput

WIDTH, HEIGHT = 800, 600
MARGIN = {"left": 90, "right": 170, "top": 50, "bottom": 70}
SERIES = (
    ("r", "r (median)", "#1f77b4", None),
    ("tau", "tau", "#d62728", "6,3"),
    ("upsilon", "upsilon", "#2ca02c", "2,3"),
    ("nu", "nu", "#9467bd", "8,3,2,3"),
)


def _series(records):
    by_eps = defaultdict(list)
    for rec in records:
        by_eps[rec.eps].append(rec)
    out = {}
    for key, *_ in SERIES:
        pts = []
        for eps in sorted(by_eps):
            vals = [getattr(r, key) for r in by_eps[eps]]
            vals = [v for v in vals if v is not None]
            if not vals or len(vals) < len(by_eps[eps]):
                continue
            pts.append((eps, float(np.median(vals))))
        out[key] = pts
    return out


def _log_range(values):
    lo, hi = math.log10(min(values)), math.log10(max(values))
    if hi - lo < 1e-9:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _ticks(lo, hi):
    first, last = math.ceil(lo), math.floor(hi)
    if last - first >= 1:
        return [float(10.0**e) for e in range(first, last + 1)]
    return [float(10.0 ** (lo + (hi - lo) * f)) for f in (0.1, 0.5, 0.9)]


def render_svg(records, title=None):
    if not records:
        raise EmptyInput("no records to plot")
    problems = sorted({r.problem for r in records})
    if len(problems) != 1:
        raise ValueError(f"records mix problems {problems}")
    series = _series(records)
    drawn = {k: v for k, v in series.items() if v and all(y > 0 for _, y in v)}
    xs = sorted({r.eps for r in records if r.eps > 0})
    ys = [y for pts in drawn.values() for _, y in pts]
    if not xs:
        raise EmptyInput("plot needs at least one positive eps")
    x0, x1 = _log_range(xs)
    y0, y1 = _log_range(ys) if ys else (-1.0, 0.0)
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(v):
        return MARGIN["left"] + pw * (math.log10(v) - x0) / (x1 - x0)

    def py(v):
        return MARGIN["top"] + ph * (1.0 - (math.log10(v) - y0) / (y1 - y0))

    n = records[0].n
    title = title or f"{problems[0]} (n = {n}): relative perturbation bounds"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" font-size="16">{_esc(title)}</text>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{MARGIN["top"] + ph}" x2="{X:.2f}" y2="{MARGIN["top"] + ph + 6}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{MARGIN["top"] + ph + 22}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{MARGIN["left"] - 6}" y1="{Y:.2f}" x2="{MARGIN["left"]}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN["left"] - 10}" y="{Y + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle">eps</text>')
    out.append(f'<text x="20" y="{MARGIN["top"] + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 20 {MARGIN["top"] + ph / 2:.1f})">RPB</text>')

    lx, ly = WIDTH - MARGIN["right"] + 15, MARGIN["top"] + 10
    for key, label, color, dash in SERIES:
        pts = drawn.get(key)
        if pts:
            coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"{dash_attr}/>')
            for x, y in pts:
                out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3.5" fill="{color}"/>')
            out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 28}" y2="{ly}" stroke="{color}" stroke-width="2"{dash_attr}/>')
            out.append(f'<text x="{lx + 34}" y="{ly + 4}">{_esc(label)}</text>')
        else:
            out.append(f'<text x="{lx + 34}" y="{ly + 4}" fill="#888888">{_esc(label)} (n/a)</text>')
        ly += 22
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_plot(records, path, title=None):
    svg = render_svg(records, title)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return path
