"""Deterministic CSV / JSON / SVG writers.

Data files carry no timestamps; run metadata goes to a ``<file>.meta.json``
sidecar.  Floats are written with 17 significant digits so CSVs round-trip.
"""
from __future__ import annotations

import json
import platform
from pathlib import Path

import numpy as np

# 10-step sequential palette, dark (small sigma_min, large resolvent) to light
PALETTE = ["#440154", "#482878", "#3e4989", "#31688e", "#26828e",
           "#1f9e89", "#35b779", "#6ece58", "#b5de2b", "#fde725"]


def _fmt(x) -> str:
    return "%.17g" % x


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (float, np.floating, int, np.integer)) else str(v)
                              for v in r))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _jsonable(o):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, np.ndarray):
        return _jsonable(o.tolist())
    if isinstance(o, (complex, np.complexfloating)):
        return {"re": float(o.real), "im": float(o.imag)}
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    return o


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_sidecar(path, config: dict, extra: dict | None = None) -> Path:
    import scipy
    meta = {"config": config, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}
    meta.update(extra or {})
    return write_json(str(path) + ".meta.json", meta)


def spectrum_rows(result):
    return [(float(l.real), float(l.imag), float(r)) for l, r in zip(result.eigenvalues, result.residuals)]


def field_rows(fld):
    """Row-major over the lambda grid: Im outer, Re inner."""
    return [(float(x), float(y), float(fld.sigma_min[i, j]))
            for i, y in enumerate(fld.im_grid) for j, x in enumerate(fld.re_grid)]


def field_svg(fld, path, guides=(), title: str = "", width: int = 480, height: int = 600) -> Path:
    """Pseudospectral portrait: log10 sigma_min on a fixed 10-step palette.

    ``guides`` are Re lambda positions drawn as dashed vertical lines.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    re, im, S = fld.re_grid, fld.im_grid, np.log10(np.maximum(fld.sigma_min, 1e-300))
    lo, hi = float(S.min()), float(S.max())
    span = hi - lo if hi > lo else 1.0
    idx = np.clip(((S - lo) / span * len(PALETTE)).astype(int), 0, len(PALETTE) - 1)
    ml, mr, mt, mb = 60, 90, 30, 40
    pw, ph = width - ml - mr, height - mt - mb
    dx = (re[-1] - re[0]) / max(len(re) - 1, 1)
    dy = (im[-1] - im[0]) / max(len(im) - 1, 1)
    x0, x1 = re[0] - dx / 2, re[-1] + dx / 2
    y0, y1 = im[0] - dy / 2, im[-1] + dy / 2

    def X(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def Y(y):
        return mt + (y1 - y) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{ml}" y="18" font-family="sans-serif" font-size="13">{title}</text>')
    cw, ch = pw / len(re), ph / len(im)
    for i, y in enumerate(im):
        for j, x in enumerate(re):
            out.append(f'<rect x="{X(x - dx / 2):.3f}" y="{Y(y + dy / 2):.3f}" width="{cw + 0.05:.3f}" '
                       f'height="{ch + 0.05:.3f}" fill="{PALETTE[idx[i, j]]}"/>')
    for g in guides:
        if x0 <= g <= x1:
            out.append(f'<line class="guide" x1="{X(g):.3f}" y1="{mt}" x2="{X(g):.3f}" y2="{mt + ph}" '
                       f'stroke="white" stroke-width="1.5" stroke-dasharray="6,4" data-re="{g:.17g}"/>')
    out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for x in np.linspace(re[0], re[-1], 5):
        out.append(f'<text x="{X(x):.3f}" y="{mt + ph + 16}" font-family="sans-serif" font-size="11" '
                   f'text-anchor="middle">{x:.2f}</text>')
    for y in np.linspace(im[0], im[-1], 5):
        out.append(f'<text x="{ml - 6}" y="{Y(y) + 4:.3f}" font-family="sans-serif" font-size="11" '
                   f'text-anchor="end">{y:.2f}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 6}" font-family="sans-serif" font-size="12" '
               f'text-anchor="middle">Re λ</text>')
    out.append(f'<text x="14" y="{mt + ph / 2}" font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 14 {mt + ph / 2})" text-anchor="middle">Im λ</text>')
    # colour bar
    bx, bh = ml + pw + 20, ph / len(PALETTE)
    for k, col in enumerate(PALETTE):
        out.append(f'<rect x="{bx}" y="{mt + ph - (k + 1) * bh:.3f}" width="16" height="{bh + 0.05:.3f}" fill="{col}"/>')
    for k in (0, len(PALETTE)):
        v = lo + span * k / len(PALETTE)
        out.append(f'<text x="{bx + 20}" y="{mt + ph - k * bh + 4:.3f}" font-family="sans-serif" '
                   f'font-size="10">{v:.2f}</text>')
    out.append(f'<text x="{bx}" y="{mt - 6}" font-family="sans-serif" font-size="10">log10 σmin</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
    return path
