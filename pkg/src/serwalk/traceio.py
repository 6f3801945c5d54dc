"""Trace serialization: walks to/from CSV and JSON lines, plus reports.

Dense walk traces are CSV with header ``index,phase,coord_0,...``; the
start point (index 0) is implicit and never written.  Dyadic values render
as exact terminating decimal strings -- never scientific notation -- so
golden files stay stable.  Sequence-space walks serialize as JSON lines
``{"index": n, "phase": p, "entries": {"i": v, ...}}``.
"""

from __future__ import annotations

import csv
import json
import math
from decimal import Decimal
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from .core import EUCLIDEAN, SUP, PointSample, is_dyadic
from .walks import Walk


def render_scalar(x) -> str:
    """Exact terminating decimal for dyadic values; plain decimal (no
    exponent) for floats."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if not is_dyadic(x):
            x = float(x)
        else:
            # 1/2^k = 5^k/10^k: scale the numerator to a decimal string
            k = x.denominator.bit_length() - 1
            return str(Decimal(x.numerator * 5 ** k).scaleb(-k))
    s = repr(float(x))
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
    return s


def parse_scalar(s: str):
    """Inverse of render_scalar: exact Fraction when the string is a plain
    terminating decimal."""
    return Fraction(s)


def _phase_of(blocks, row_index: int) -> int:
    for p, (lo, hi) in enumerate(blocks, start=1):
        if lo <= row_index < hi:
            return p
    return len(blocks)


def write_walk_csv(w: Walk, fp: TextIO) -> None:
    if not w.sums or hasattr(w.sums[0], "entries"):
        raise ValueError("CSV traces are for dense walks")
    dim = len(w.sums[0])
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["index", "phase"] + [f"coord_{i}" for i in range(dim)])
    blocks = w.phase_blocks()
    for n, p in enumerate(w.sums[1:], start=1):
        writer.writerow([n, _phase_of(blocks, n)] + [render_scalar(c) for c in p])


def read_walk_csv(fp: TextIO, kind: str = EUCLIDEAN) -> Walk:
    reader = csv.reader(fp)
    header = next(reader, None)
    if not header or header[:2] != ["index", "phase"] or len(header) < 3:
        raise ValueError("bad trace header")
    dim = len(header) - 2
    sums = []
    phases = []
    for row in reader:
        if not row:
            continue
        if len(row) != dim + 2:
            raise ValueError(f"row width mismatch at index {row[0]}")
        sums.append(tuple(parse_scalar(c) for c in row[2:]))
        phases.append(int(row[1]))
    if not sums:
        raise ValueError("empty trace")
    phase_lengths = []
    for p in phases:
        if len(phase_lengths) < p:
            phase_lengths.extend([0] * (p - len(phase_lengths)))
        phase_lengths[p - 1] += 1
    mode = "exact" if all(is_dyadic(c) for p in sums for c in p) else "float"
    if mode == "float":
        sums = [tuple(float(c) for c in p) for p in sums]
    start = tuple([Fraction(0) if mode == "exact" else 0.0] * dim)
    return Walk([start] + sums, phase_lengths, mode=mode, kind=kind)


def write_walk_jsonl(w: Walk, fp: TextIO) -> None:
    if not w.sums or not hasattr(w.sums[0], "entries"):
        raise ValueError("JSON-line traces are for sequence-space walks")
    blocks = w.phase_blocks()
    for n, p in enumerate(w.sums[1:], start=1):
        entries = {str(i): (int(v) if Fraction(v).denominator == 1 else float(v))
                   for i, v in p.entries.items()}
        fp.write(json.dumps({"index": n, "phase": _phase_of(blocks, n),
                             "entries": entries}) + "\n")


def read_walk_jsonl(fp: TextIO) -> Walk:
    from .seqspace import SparseVec
    sums = []
    phases = []
    for line in fp:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        sums.append(SparseVec({int(i): Fraction(v) for i, v in rec["entries"].items()}))
        phases.append(int(rec.get("phase", 1)))
    if not sums:
        raise ValueError("empty trace")
    phase_lengths = []
    for p in phases:
        if len(phase_lengths) < p:
            phase_lengths.extend([0] * (p - len(phase_lengths)))
        phase_lengths[p - 1] += 1
    return Walk([SparseVec()] + sums, phase_lengths, mode="exact", kind=SUP)


def write_sample_csv(sample: PointSample, fp: TextIO) -> None:
    if not sample.points:
        raise ValueError("empty sample")
    dim = len(sample.points[0])
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow([f"coord_{i}" for i in range(dim)])
    for p in sample.points:
        writer.writerow([render_scalar(c) for c in p])


def read_sample_csv(fp: TextIO) -> PointSample:
    reader = csv.reader(fp)
    header = next(reader, None)
    if not header or not header[0].startswith("coord_"):
        raise ValueError("bad sample header")
    pts = []
    for row in reader:
        if row:
            pts.append(tuple(float(Fraction(c)) for c in row))
    if not pts:
        raise ValueError("empty sample")
    return PointSample(tuple(pts))


def read_terms_json(fp: TextIO):
    """Series terms from JSON {"terms": [...]}; each term is a dense list
    or a sparse {index: value} object."""
    from .seqspace import SparseVec
    doc = json.load(fp)
    terms = doc["terms"] if isinstance(doc, dict) else doc
    out = []
    for t in terms:
        if isinstance(t, dict):
            out.append(SparseVec({int(i): Fraction(v) for i, v in t.items()}))
        else:
            out.append(tuple(float(c) for c in t))
    if not out:
        raise ValueError("no terms")
    return out


def write_terms_json(terms: Sequence, fp: TextIO) -> None:
    enc = []
    for t in terms:
        if hasattr(t, "entries"):
            enc.append({str(i): (int(v) if Fraction(v).denominator == 1 else float(v))
                        for i, v in t.entries.items()})
        else:
            enc.append([float(c) for c in t])
    json.dump({"terms": enc}, fp)
    fp.write("\n")


def estimate_report(est, verdicts: Optional[dict] = None) -> dict:
    """JSON-ready estimate report {resolution, window, points, hit_counts,
    verdicts}."""
    pts = []
    for p in est.points.points:
        if hasattr(p, "entries"):
            pts.append({str(i): float(v) for i, v in p.entries.items()})
        else:
            pts.append([float(c) for c in p])
    return {"resolution": est.resolution,
            "window": [est.window_start, None],
            "points": pts,
            "hit_counts": list(est.hit_counts),
            "verdicts": verdicts or {}}


# ---------------------------------------------------------------------------
# SVG plotting (write-only; no viewer)

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#17becf", "#e377c2"]


def write_walk_svg(w: Walk, fp: TextIO, size: int = 480,
                   marks: Optional[Sequence] = None) -> None:
    """SVG polyline of a 2-D walk, one color per phase, optional marked
    sample points, with axis tick labels at the integer and half-integer
    levels the trace reaches."""
    if not w.sums or hasattr(w.sums[0], "entries") or len(w.sums[0]) != 2:
        raise ValueError("plotting needs a 2-D dense trace")
    xs = [float(p[0]) for p in w.sums]
    ys = [float(p[1]) for p in w.sums]
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    pad = 0.08 * span

    def sx(x):
        return (x - lo_x + pad) / (span + 2 * pad) * size

    def sy(y):
        return size - (y - lo_y + pad) / (span + 2 * pad) * size

    fp.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
             f'height="{size}" viewBox="0 0 {size} {size}">\n')
    fp.write(f'<rect width="{size}" height="{size}" fill="white"/>\n')
    # tick labels on half-integer levels inside the data range
    tick = Fraction(1, 2)
    level = Fraction(math.ceil(lo_x / 0.5)) * tick
    while float(level) <= hi_x + 1e-9:
        fp.write(f'<text x="{sx(float(level)):.1f}" y="{size - 4}" '
                 f'font-size="10" text-anchor="middle">{render_scalar(level)}'
                 '</text>\n')
        level += tick
    for (lo, hi), color in zip(w.phase_blocks(),
                               _PALETTE * (len(w.phase_blocks()) // len(_PALETTE) + 1)):
        pts = w.sums[lo - 1:hi]
        coords = " ".join(f"{sx(float(p[0])):.2f},{sy(float(p[1])):.2f}" for p in pts)
        fp.write(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" '
                 f'points="{coords}"/>\n')
    for p in marks or ():
        fp.write(f'<circle cx="{sx(float(p[0])):.2f}" cy="{sy(float(p[1])):.2f}" '
                 'r="2.5" fill="black"/>\n')
    fp.write("</svg>\n")
