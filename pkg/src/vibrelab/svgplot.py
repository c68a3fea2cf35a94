"""Dependency-free SVG charts: time-series polylines and spectrum stems.

Write-only emission with fixed coordinate formatting, so identical data
always produces identical bytes. Long series are reduced to a per-bucket
min/max envelope that preserves peaks.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

_WIDTH = 900
_HEIGHT = 360
_MARGIN_LEFT = 72
_MARGIN_RIGHT = 16
_MARGIN_TOP = 34
_MARGIN_BOTTOM = 46
_MAX_POINTS = 4000


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:.6g}"


def _scaler(lo: float, hi: float, out_lo: float, out_hi: float):
    if hi == lo:
        hi = lo + 1.0
    k = (out_hi - out_lo) / (hi - lo)
    return lambda v: out_lo + (v - lo) * k


def _envelope(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if x.size <= _MAX_POINTS:
        return x, y
    buckets = _MAX_POINTS // 2
    edges = np.linspace(0, x.size, buckets + 1).astype(int)
    xs, ys = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if a == b:
            continue
        seg = y[a:b]
        lo = a + int(np.argmin(seg))
        hi = a + int(np.argmax(seg))
        for i in sorted((lo, hi)):
            xs.append(x[i])
            ys.append(y[i])
    return np.asarray(xs), np.asarray(ys)


def _frame(title: str, x_label: str, y_label: str, xs, ys, body: list[str]) -> str:
    x0, x1 = _MARGIN_LEFT, _WIDTH - _MARGIN_RIGHT
    y0, y1 = _HEIGHT - _MARGIN_BOTTOM, _MARGIN_TOP
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH // 2}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = xs[0] + frac * (xs[1] - xs[0])
        px = x0 + frac * (x1 - x0)
        lines.append(
            f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 4}" '
            'stroke="black"/>'
        )
        lines.append(
            f'<text x="{_fmt(px)}" y="{y0 + 17}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{_tick_label(xv)}</text>'
        )
        yv = ys[0] + frac * (ys[1] - ys[0])
        py = y0 - frac * (y0 - y1)
        lines.append(
            f'<line x1="{x0 - 4}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" '
            'stroke="black"/>'
        )
        lines.append(
            f'<text x="{x0 - 7}" y="{_fmt(py + 3)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_tick_label(yv)}</text>'
        )
    lines.append(
        f'<text x="{(x0 + x1) // 2}" y="{_HEIGHT - 8}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{x_label}</text>'
    )
    lines.append(
        f'<text x="16" y="{(y0 + y1) // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {(y0 + y1) // 2})">{y_label}</text>'
    )
    lines.extend(body)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _bounds(v: np.ndarray) -> tuple[float, float]:
    lo, hi = float(np.min(v)), float(np.max(v))
    if lo == hi:
        pad = 1.0 if lo == 0.0 else abs(lo) * 0.1
        return lo - pad, hi + pad
    return lo, hi


def line_chart(
    x,
    y,
    path: str | Path,
    *,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
) -> None:
    """Write a polyline chart of y against x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = _envelope(x, y)
    xb, yb = _bounds(x), _bounds(y)
    sx = _scaler(xb[0], xb[1], _MARGIN_LEFT, _WIDTH - _MARGIN_RIGHT)
    sy = _scaler(yb[0], yb[1], _HEIGHT - _MARGIN_BOTTOM, _MARGIN_TOP)
    pts = " ".join(f"{_fmt(sx(a))},{_fmt(sy(b))}" for a, b in zip(x, y))
    body = [
        f'<polyline points="{pts}" fill="none" stroke="#1f6fb2" '
        'stroke-width="1.2"/>'
    ]
    Path(path).write_text(_frame(title, x_label, y_label, xb, yb, body))


def stem_chart(
    x,
    y,
    path: str | Path,
    *,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
) -> None:
    """Write a stem chart (one vertical line per point, from zero)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = _envelope(x, y)
    xb = _bounds(x)
    yb = _bounds(np.append(y, 0.0))
    sx = _scaler(xb[0], xb[1], _MARGIN_LEFT, _WIDTH - _MARGIN_RIGHT)
    sy = _scaler(yb[0], yb[1], _HEIGHT - _MARGIN_BOTTOM, _MARGIN_TOP)
    base = _fmt(sy(0.0))
    body = [
        f'<line x1="{_fmt(sx(a))}" y1="{base}" x2="{_fmt(sx(a))}" '
        f'y2="{_fmt(sy(b))}" stroke="#b23a1f" stroke-width="1.2"/>'
        for a, b in zip(x, y)
    ]
    Path(path).write_text(_frame(title, x_label, y_label, xb, yb, body))
