"""Figure data tables and deterministic CSV output."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .gamma import region_scan
from .kato_core import kappa, kappa_scalar
from .regularity import kappa_p3_table


def fmt(value) -> str:
    """17 significant digits round-trips binary64; bools as 0/1, ints verbatim."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_csv(header, rows))
    return path


def kappa_curve(n: int, p_min: float = 1.01, p_max: float | None = None, steps: int = 1001):
    """Vector and scalar Kato constants against p."""
    if p_max is None:
        p_max = math.sqrt(2.0 * n) + 1.0
    header = ["p", "kappa_vector", "kappa_scalar"]
    rows = [(p, kappa(p, n).value, kappa_scalar(p, n)) for p in np.linspace(p_min, p_max, steps)]
    return header, rows


def corollary44(p_min: float = 2.0, p_max: float = 3.0, steps: int = 1001):
    """kappa(p, 3) and the first-gate right side at n = d = 4."""
    return ["p", "kappa_p3", "rhs"], kappa_p3_table(np.linspace(p_min, p_max, steps))


def gamma_region(p_range=(2.0, 3.0), gamma_range=(-1.0, 0.0), steps=(201, 201)):
    """Grid table plus boundary polylines (curve, p, gamma)."""
    scan = region_scan(p_range, gamma_range, steps)
    grid = (["p", "gamma", "A", "B", "admissible"], list(scan.rows()))
    boundary_rows = [(name, p, g) for name, pts in scan.curves.items() for p, g in pts]
    return grid, (["curve", "p", "gamma"], boundary_rows), scan


FIGURES = ("kappa_curve", "corollary44", "gamma_region")


def emit_figure(name: str, out, **params) -> list[Path]:
    """Write the CSV(s) for ``name``; gamma_region also writes ``<stem>_boundaries.csv``."""
    out = Path(out)
    if name == "kappa_curve":
        header, rows = kappa_curve(**params)
        return [write_csv(out, header, rows)]
    if name == "corollary44":
        header, rows = corollary44(**params)
        return [write_csv(out, header, rows)]
    if name == "gamma_region":
        (gh, grows), (bh, brows), _ = gamma_region(**params)
        side = out.with_name(out.stem + "_boundaries" + (out.suffix or ".csv"))
        return [write_csv(out, gh, grows), write_csv(side, bh, brows)]
    raise ValueError(f"unknown figure {name!r}; choose from {FIGURES}")


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)
