"""CSV (and optional SVG) output for traced branches and figure data."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .moduli import CurveBranch, trace_branch

TRACE_COLUMNS = ("M", "L", "A", "B", "C", "S", "lambda", "vol", "invariant")
FIGURE_FILES = (
    "fig1_L.csv",
    "fig2_S.csv",
    "fig3_ricci_plus.csv",
    "fig4_ricci_minus.csv",
    "fig5_inv_plus.csv",
    "fig6_inv_minus.csv",
)
DEFAULT_GRID = (0.02, 20.0, 500)


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def write_rows(fh, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def branch_rows(branch: CurveBranch):
    flagged = any(s.error for s in branch.samples)
    header = list(TRACE_COLUMNS) + (["error"] if flagged else [])
    rows = []
    for s in branch.samples:
        row = [s.M, s.L, s.A, s.B, s.C, s.S, s.lam, s.vol, s.invariant]
        if flagged:
            row.append(s.error or "")
        rows.append(row)
    return header, rows


def branch_to_csv(branch: CurveBranch) -> str:
    buf = io.StringIO()
    header, rows = branch_rows(branch)
    write_rows(buf, header, rows)
    return buf.getvalue()


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and float matrix of a numeric CSV; a trailing ``error`` column is dropped."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    keep = [i for i, h in enumerate(header) if h != "error"]
    data = np.array([[float(r[i]) for i in keep] for r in rows[1:]], dtype=float)
    return [header[i] for i in keep], data


def write_figures(out_dir, m_min: float = DEFAULT_GRID[0], m_max: float = DEFAULT_GRID[1],
                  n: int = DEFAULT_GRID[2], svg: bool = False) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    plus = trace_branch(m_min, m_max, n, "plus")
    minus = trace_branch(m_min, m_max, n, "minus")
    P, N = plus.samples, minus.samples
    tables = {
        "fig1_L.csv": (("M", "L_plus", "L_minus"),
                       [(p.M, p.L, q.L) for p, q in zip(P, N)]),
        "fig2_S.csv": (("M", "S_plus", "S_minus"),
                       [(p.M, p.S, q.S) for p, q in zip(P, N)]),
        "fig3_ricci_plus.csv": (("M", "L", "A", "B", "C"),
                                [(s.M, s.L, s.A, s.B, s.C) for s in P]),
        "fig4_ricci_minus.csv": (("M", "L", "A", "B", "C"),
                                 [(s.M, s.L, s.A, s.B, s.C) for s in N]),
        "fig5_inv_plus.csv": (("M", "L", "invariant"),
                              [(s.M, s.L, s.invariant) for s in P]),
        "fig6_inv_minus.csv": (("M", "L", "invariant"),
                               [(s.M, s.L, s.invariant) for s in N]),
    }
    written = []
    for name in FIGURE_FILES:
        header, rows = tables[name]
        path = out / name
        with open(path, "w", newline="") as fh:
            write_rows(fh, header, rows)
        written.append(path)
    if svg:
        written += _write_svgs(out, tables)
    return written


def _write_svgs(out: Path, tables) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    titles = {
        "fig1_L.csv": "L(M)",
        "fig2_S.csv": "scalar curvature",
        "fig3_ricci_plus.csv": "Ricci eigenvalues, L_+",
        "fig4_ricci_minus.csv": "Ricci eigenvalues, L_-",
        "fig5_inv_plus.csv": "lambda^2 vol^(2/3), L_+",
        "fig6_inv_minus.csv": "lambda^2 vol^(2/3), L_-",
    }
    paths = []
    for name, (header, rows) in tables.items():
        data = np.array(rows, dtype=float)
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for j, col in enumerate(header[1:], start=1):
            if col == "L" and data.shape[1] > 2:
                continue
            ax.plot(data[:, 0], data[:, j], label=col)
        ax.set_xlabel("M")
        ax.set_title(titles[name])
        if len(header) > 2:
            ax.legend()
        path = out / name.replace(".csv", ".svg")
        fig.savefig(path, format="svg")
        plt.close(fig)
        paths.append(path)
    return paths


def finite(x: float) -> bool:
    return x is not None and math.isfinite(x)
