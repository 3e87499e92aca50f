"""Plot-ready CSVs and small static SVG charts.

Every SVG is rendered from the CSV next to it and nothing else, so the two
never disagree.  Coordinates are written with fixed precision to keep the
output byte-stable.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .risk import DoseResponse, ScatterPoint, write_dose_response, write_scatter
from .seasonality import SeasonalAgreement

log = logging.getLogger(__name__)

WIDTH, HEIGHT, MARGIN = 480, 320, 48
SERIES_COLOURS = ("#1f77b4", "#d62728")


def _read(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _scale(values: Sequence[float], lo_px: float, hi_px: float):
    lo, hi = min(values), max(values)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    return lambda v: lo_px + (v - lo) / (hi - lo) * (hi_px - lo_px)


def _frame(title: str, x_label: str, y_label: str, body: list[str]) -> str:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN / 2}" y2="{HEIGHT - MARGIN}" '
        'stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN / 2}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">{escape(x_label)}</text>',
        f'<text x="14" y="{HEIGHT / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT / 2:.1f})">{escape(y_label)}</text>',
    ]
    return "\n".join(parts + body + ["</svg>"]) + "\n"


def scatter_svg(csv_path: str | Path) -> str:
    """One circle per CSV row: claim rate on x, switch rate on y."""
    rows = _read(csv_path)
    xs = [float(r["claim_rate"]) for r in rows]
    ys = [float(r["switch_rate"]) for r in rows]
    body = []
    if rows:
        sx = _scale(xs, MARGIN, WIDTH - MARGIN / 2)
        sy = _scale(ys, HEIGHT - MARGIN, MARGIN / 2)
        for r, x, y in zip(rows, xs, ys):
            body.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{SERIES_COLOURS[0]}">'
                        f'<title>{escape(r["ingredient"])}</title></circle>')
    return _frame("Ingredient rates", "claim rate", "switch rate", body)


def seasonal_svg(csv_path: str | Path) -> str:
    """Overlay one polyline per seasonal column."""
    rows = _read(csv_path)
    columns = [c for c in (rows[0].keys() if rows else ()) if c != "month"]
    values = {c: [float(r[c]) for r in rows] for c in columns}
    body = []
    if rows:
        sx = _scale(range(len(rows)), MARGIN, WIDTH - MARGIN / 2)
        for k, c in enumerate(columns):
            sy = _scale(values[c], HEIGHT - MARGIN, MARGIN / 2)
            pts = " ".join(f"{sx(i):.2f},{sy(v):.2f}" for i, v in enumerate(values[c]))
            colour = SERIES_COLOURS[k % len(SERIES_COLOURS)]
            body.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="2"/>')
            body.append(f'<text x="{WIDTH - MARGIN:.1f}" y="{MARGIN / 2 + 14 * (k + 1):.1f}" '
                        f'text-anchor="end" font-size="11" fill="{colour}">{escape(c)}</text>')
    return _frame("Seasonal components (each scaled to its own range)", "month", "seasonal", body)


def dose_svg(csv_path: str | Path) -> str:
    """One bar per wet-rate bin with a known rate."""
    rows = [r for r in _read(csv_path) if r["rate"]]
    body = []
    if rows:
        top = max(float(r["rate"]) for r in rows) or 1.0
        slot = (WIDTH - 1.5 * MARGIN) / len(rows)
        for i, r in enumerate(rows):
            h = float(r["rate"]) / top * (HEIGHT - 1.5 * MARGIN)
            x = MARGIN + i * slot + slot * 0.15
            body.append(f'<rect x="{x:.2f}" y="{HEIGHT - MARGIN - h:.2f}" width="{slot * 0.7:.2f}" '
                        f'height="{h:.2f}" fill="{SERIES_COLOURS[0]}"/>')
            body.append(f'<text x="{x + slot * 0.35:.2f}" y="{HEIGHT - MARGIN + 14}" text-anchor="middle" '
                        f'font-size="10">{escape(r["bin"])}</text>')
    return _frame("Switch rate by wet-food share", "wet share bin", "switch rate", body)


def write_seasonal(path: str | Path, agreement: SeasonalAgreement, months: Sequence[str],
                   names: tuple[str, str] = ("claims", "ec")) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("month",) + names)
        for m, a, b in zip(months, agreement.stl_a.seasonal, agreement.stl_b.seasonal):
            w.writerow((m, repr(float(a)), repr(float(b))))


def emit_plot_data(out_dir: str | Path, scatter: Sequence[ScatterPoint] | None = None,
                   agreement: SeasonalAgreement | None = None, months: Sequence[str] = (),
                   dose: DoseResponse | None = None, svg: bool = True) -> list[Path]:
    """Write whichever plot tables are given, each with an optional SVG."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, writer, render) -> None:
        csv_path = out / f"{name}.csv"
        writer(csv_path)
        written.append(csv_path)
        if svg:
            svg_path = out / f"{name}.svg"
            svg_path.write_text(render(csv_path), "utf-8")
            written.append(svg_path)

    if scatter is not None:
        if scatter:
            emit("scatter", lambda p: write_scatter(p, scatter), scatter_svg)
        else:
            log.warning("no significant ingredients; scatter plot not written")
    if agreement is not None:
        emit("seasonal", lambda p: write_seasonal(p, agreement, months), seasonal_svg)
    if dose is not None:
        emit("dose_response", lambda p: write_dose_response(p, dose), dose_svg)
    return written
