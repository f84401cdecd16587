"""Bench CSV -> self-contained SVG line charts (one panel per (d, T)).

Written by hand instead of going through matplotlib so the output is
byte-stable and needs nothing beyond the standard library.
"""

from __future__ import annotations

import csv
import math
from xml.sax.saxutils import escape

REQUIRED = ("policy", "d", "T", "mu", "ratio")
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
           "#7f7f7f", "#bcbd22", "#17becf", "#000000", "#aec7e8", "#98df8a", "#ff9896")

PW, PH = 360, 240          # panel size
ML, MR, MT, MB = 48, 12, 28, 36


class MalformedCSV(ValueError):
    pass


def read_rows(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise MalformedCSV("empty file (no header)")
        missing = [c for c in REQUIRED if c not in reader.fieldnames]
        if missing:
            raise MalformedCSV(f"missing column(s): {', '.join(missing)}")
        out = []
        for lineno, row in enumerate(reader, start=2):
            if not (row.get("ratio") or "").strip():
                continue  # error rows carry no ratio
            try:
                out.append({"policy": row["policy"], "d": int(row["d"]), "T": int(row["T"]),
                            "mu": int(row["mu"]), "ratio": float(row["ratio"])})
            except (TypeError, ValueError) as exc:
                raise MalformedCSV(f"line {lineno}: {exc}") from exc
    return out


def _f(x: float) -> str:
    return f"{x:.2f}"


def render_svg(rows: list[dict]) -> str:
    panels = sorted({(r["d"], r["T"]) for r in rows})
    policies = list(dict.fromkeys(r["policy"] for r in rows))
    ncol = max(1, min(3, len(panels)))
    nrow = max(1, math.ceil(len(panels) / ncol))
    legend_h = 16 * len(policies) + 8
    width, height = ncol * PW, nrow * PH + legend_h
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">',
           f'<rect width="{width}" height="{height}" fill="white"/>']

    if rows:
        mus = sorted({r["mu"] for r in rows})
        lo = min(r["ratio"] for r in rows)
        hi = max(r["ratio"] for r in rows)
    else:
        mus, lo, hi = [1, 100], 1.0, 2.0
    lo, hi = math.floor(lo * 10) / 10, math.ceil(hi * 10) / 10
    if hi <= lo:
        hi = lo + 0.1
    lmin, lmax = math.log10(mus[0]), math.log10(mus[-1])
    if lmax <= lmin:
        lmax = lmin + 1

    def xy(ox, oy, mu, ratio):
        x = ox + ML + (math.log10(mu) - lmin) / (lmax - lmin) * (PW - ML - MR)
        y = oy + PH - MB - (ratio - lo) / (hi - lo) * (PH - MT - MB)
        return x, y

    for idx, panel in enumerate(panels or [None]):
        ox, oy = (idx % ncol) * PW, (idx // ncol) * PH
        x0, y0, x1, y1 = ox + ML, oy + PH - MB, ox + PW - MR, oy + MT
        title = "no data" if panel is None else f"d={panel[0]}, T={panel[1]}"
        out.append(f'<text x="{_f((x0 + x1) / 2)}" y="{oy + 16}" text-anchor="middle">'
                   f'{escape(title)}</text>')
        out.append(f'<path d="M{_f(x0)} {_f(y1)}V{_f(y0)}H{_f(x1)}" stroke="black" fill="none"/>')
        for mu in mus:
            x, _ = xy(ox, oy, mu, lo)
            out.append(f'<text x="{_f(x)}" y="{_f(y0 + 14)}" text-anchor="middle">{mu}</text>')
        steps = 4
        for s in range(steps + 1):
            v = lo + (hi - lo) * s / steps
            _, y = xy(ox, oy, mus[0], v)
            out.append(f'<text x="{_f(x0 - 4)}" y="{_f(y + 3)}" text-anchor="end">{v:.2f}</text>')
        out.append(f'<text x="{_f((x0 + x1) / 2)}" y="{_f(y0 + 28)}" text-anchor="middle">mu</text>')
        if panel is None:
            continue
        for p_idx, pol in enumerate(policies):
            pts = sorted((r["mu"], r["ratio"]) for r in rows
                         if r["policy"] == pol and (r["d"], r["T"]) == panel)
            if not pts:
                continue
            color = PALETTE[p_idx % len(PALETTE)]
            coords = [xy(ox, oy, m, v) for m, v in pts]
            path = " ".join(f"{'M' if i == 0 else 'L'}{_f(x)} {_f(y)}" for i, (x, y) in enumerate(coords))
            out.append(f'<path d="{path}" stroke="{color}" fill="none" stroke-width="1.5"/>')
            for x, y in coords:
                out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="2.5" fill="{color}"/>')

    ly = nrow * PH + 4
    for p_idx, pol in enumerate(policies):
        color = PALETTE[p_idx % len(PALETTE)]
        y = ly + 16 * p_idx
        out.append(f'<rect x="10" y="{y}" width="10" height="10" fill="{color}"/>')
        out.append(f'<text x="26" y="{y + 9}">{escape(pol)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_csv(csv_path, svg_path) -> int:
    """Returns the number of data points drawn."""
    rows = read_rows(csv_path)
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(rows))
    return len(rows)
