"""Self-contained SVG plots, written as plain markup.

Coordinates are rounded to 0.1 px, so the files are as deterministic as the
data behind them.
"""

from __future__ import annotations

import html
import math
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from modalsparse.core.files import write_text
from modalsparse.experiments.sparsity_study import SparsityStudyResult
from modalsparse.frf.data import FrfSet
from modalsparse.modal.post import MacMatrix
from modalsparse.stabilization.diagram import StabilityDiagram

WIDTH, HEIGHT = 900, 480
PAD_L, PAD_R, PAD_T, PAD_B = 72, 64, 36, 52
CONSISTENT = "#2563EB"
INCONSISTENT = "#DC2626"
CURVE = "#6B7280"
AXIS = "#111827"
FONT = 'font-family="sans-serif" font-size="11"'


def _open(width: int = WIDTH, height: int = HEIGHT) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#FFFFFF"/>',
    ]


def _text(x: float, y: float, label: str, anchor: str = "middle", extra: str = "") -> str:
    return (
        f'<text x="{x:.1f}" y="{y:.1f}" text-anchor="{anchor}" fill="{AXIS}" {FONT}{extra}>'
        f"{html.escape(label)}</text>"
    )


def _nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    """Round-numbered ticks covering [lo, hi]."""
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    magnitude = 10 ** math.floor(math.log10(raw))
    step = next(m * magnitude for m in (1, 2, 5, 10) if m * magnitude >= raw)
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 1e-9 * step:
        ticks.append(round(value, 10))
        value += step
    return ticks


def _frame(parts: list[str]) -> None:
    x0, y0 = PAD_L, PAD_T
    w, h = WIDTH - PAD_L - PAD_R, HEIGHT - PAD_T - PAD_B
    parts.append(
        f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="{AXIS}" stroke-width="1"/>'
    )


def stability_diagram_svg(diagram: StabilityDiagram, frf: FrfSet) -> str:
    """Mean |H| on a log left axis, plotted poles by order on the right axis.

    '+' marks consistent poles, '×' the rest.
    """
    f_min, f_max = diagram.band
    plot_w = WIDTH - PAD_L - PAD_R
    plot_h = HEIGHT - PAD_T - PAD_B
    bottom = PAD_T + plot_h

    def x(f: float) -> float:
        return PAD_L + plot_w * (f - f_min) / (f_max - f_min)

    def y_order(order: float) -> float:
        return bottom - plot_h * order / max(diagram.n_p, 1)

    magnitude = frf.mean_magnitude()
    positive = magnitude[magnitude > 0]
    floor = float(positive.min()) if positive.size else 1.0
    log_mag = np.log10(np.maximum(magnitude, floor))
    lo, hi = float(log_mag.min()), float(log_mag.max())
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0

    def y_mag(value: float) -> float:
        return bottom - plot_h * (value - lo) / (hi - lo)

    parts = _open()
    _frame(parts)
    title = f"Stability diagram ({diagram.method.value}, n_p={diagram.n_p})"
    parts.append(_text(WIDTH / 2, 20, title, extra=' font-weight="bold"'))

    for tick in _nice_ticks(f_min, f_max):
        xx = x(tick)
        parts.append(f'<line x1="{xx:.1f}" y1="{bottom}" x2="{xx:.1f}" y2="{bottom + 5}" stroke="{AXIS}"/>')
        parts.append(_text(xx, bottom + 18, f"{tick:g}"))
    parts.append(_text(PAD_L + plot_w / 2, HEIGHT - 12, "Frequency [Hz]"))

    for tick in _nice_ticks(0, diagram.n_p, 6):
        yy = y_order(tick)
        right = PAD_L + plot_w
        parts.append(f'<line x1="{right}" y1="{yy:.1f}" x2="{right + 5}" y2="{yy:.1f}" stroke="{AXIS}"/>')
        parts.append(_text(right + 8, yy + 4, f"{tick:g}", anchor="start"))
    parts.append(_text(WIDTH - 14, PAD_T + plot_h / 2, "Model order", extra=f' transform="rotate(90 {WIDTH - 14} {PAD_T + plot_h / 2:.1f})"'))

    for decade in range(math.ceil(lo), math.floor(hi) + 1):
        yy = y_mag(decade)
        parts.append(f'<line x1="{PAD_L - 5}" y1="{yy:.1f}" x2="{PAD_L}" y2="{yy:.1f}" stroke="{AXIS}"/>')
        parts.append(_text(PAD_L - 8, yy + 4, f"1e{decade}", anchor="end"))
    parts.append(_text(16, PAD_T + plot_h / 2, "mean |H|", extra=f' transform="rotate(-90 16 {PAD_T + plot_h / 2:.1f})"'))

    points = " ".join(f"{x(f):.1f},{y_mag(v):.1f}" for f, v in zip(frf.grid.freqs_hz, log_mag))
    parts.append(f'<polyline points="{points}" fill="none" stroke="{CURVE}" stroke-width="1"/>')

    s = 3.5
    for order, entry in diagram.iter_entries():
        xx, yy = x(entry.pole.f_hz), y_order(order)
        if entry.consistent:
            path = f"M{xx - s:.1f},{yy:.1f}H{xx + s:.1f}M{xx:.1f},{yy - s:.1f}V{yy + s:.1f}"
            color = CONSISTENT
        else:
            path = f"M{xx - s:.1f},{yy - s:.1f}L{xx + s:.1f},{yy + s:.1f}M{xx - s:.1f},{yy + s:.1f}L{xx + s:.1f},{yy - s:.1f}"
            color = INCONSISTENT
        parts.append(f'<path d="{path}" stroke="{color}" stroke-width="1.2" fill="none"/>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def study_errorbar_svg(results: Sequence[SparsityStudyResult], degree: int) -> str:
    """Mean ± std of the inside percentage per nonzero count."""
    plot_w = WIDTH - PAD_L - PAD_R
    plot_h = HEIGHT - PAD_T - PAD_B
    bottom = PAD_T + plot_h
    n = max(len(results), 1)

    def x(index: int) -> float:
        return PAD_L + plot_w * (index + 0.5) / n

    def y(pct: float) -> float:
        return bottom - plot_h * min(max(pct, 0.0), 100.0) / 100.0

    parts = _open()
    _frame(parts)
    parts.append(_text(WIDTH / 2, 20, f"Roots inside |z| = 1, degree {degree}", extra=' font-weight="bold"'))
    for tick in range(0, 101, 20):
        yy = y(tick)
        parts.append(f'<line x1="{PAD_L - 5}" y1="{yy:.1f}" x2="{PAD_L}" y2="{yy:.1f}" stroke="{AXIS}"/>')
        parts.append(_text(PAD_L - 8, yy + 4, f"{tick}", anchor="end"))
    parts.append(_text(16, PAD_T + plot_h / 2, "inside [%]", extra=f' transform="rotate(-90 16 {PAD_T + plot_h / 2:.1f})"'))
    parts.append(_text(PAD_L + plot_w / 2, HEIGHT - 12, "Nonzero coefficients"))

    for index, result in enumerate(results):
        xx = x(index)
        mean, std = result.pct_inside_mean, result.pct_inside_std
        top, low = y(mean + std), y(mean - std)
        parts.append(f'<line x1="{xx:.1f}" y1="{top:.1f}" x2="{xx:.1f}" y2="{low:.1f}" stroke="{CONSISTENT}"/>')
        for cap in (top, low):
            parts.append(f'<line x1="{xx - 6:.1f}" y1="{cap:.1f}" x2="{xx + 6:.1f}" y2="{cap:.1f}" stroke="{CONSISTENT}"/>')
        parts.append(f'<circle cx="{xx:.1f}" cy="{y(mean):.1f}" r="3.5" fill="{CONSISTENT}"/>')
        parts.append(_text(xx, bottom + 18, str(result.nonzero_count)))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def mac_heatmap_svg(matrix: MacMatrix) -> str:
    """Grey-scale cells, black = 1, with the value printed in each."""
    n_a, n_b = matrix.values.shape
    cell = 48
    left, top = 48, 40
    width = left + cell * max(n_b, 1) + 16
    height = top + cell * max(n_a, 1) + 16
    parts = _open(width, height)
    parts.append(_text(width / 2, 20, "MAC", extra=' font-weight="bold"'))
    for j in range(n_b):
        parts.append(_text(left + cell * (j + 0.5), top - 6, f"b{j + 1}"))
    for i in range(n_a):
        parts.append(_text(left - 8, top + cell * (i + 0.5) + 4, f"a{i + 1}", anchor="end"))
        for j in range(n_b):
            value = float(matrix.values[i, j])
            shade = round(255 * (1.0 - value))
            ink = "#FFFFFF" if value > 0.5 else AXIS
            cx, cy = left + cell * j, top + cell * i
            parts.append(
                f'<rect x="{cx}" y="{cy}" width="{cell}" height="{cell}" '
                f'fill="rgb({shade},{shade},{shade})" stroke="#D1D5DB"/>'
            )
            parts.append(
                f'<text x="{cx + cell / 2:.1f}" y="{cy + cell / 2 + 4:.1f}" text-anchor="middle" '
                f'fill="{ink}" {FONT}>{value:.2f}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path: Path, markup: str) -> Path:
    return write_text(path, markup)
