"""CSV tables and Wavefront OBJ meshes.

Floats are written with ``repr``, the shortest decimal string that reads back
to the same double, so every table round-trips exactly.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .offset import OffsetReport
from .surface import DarbouxState

INVARIANT_COLUMNS = (
    ["s"]
    + [f"{v}_{a}" for v in "etg" for a in "xyz"]
    + ["gamma", "delta", "Delta", "gamma_dual", "R_real", "R_dual", "rho_real", "rho_dual"]
)

REPORT_COLUMNS = ["relation_id", "s", "lhs", "rhs", "abs_err", "rel_err"]


def _fmt(x) -> str:
    return repr(float(x))


def invariant_rows(state: DarbouxState) -> np.ndarray:
    """``(n, len(INVARIANT_COLUMNS))`` array for a batched state."""
    s = np.atleast_1d(state.s)
    cols = [s]
    for v in (state.e, state.t, state.g):
        v = np.atleast_2d(v)
        cols += [v[:, 0], v[:, 1], v[:, 2]]
    cols += [state.gamma, state.delta, state.Delta, state.gamma_dual,
             state.R_bar.real, state.R_bar.dual, state.rho_bar.real, state.rho_bar.dual]
    return np.column_stack([np.broadcast_to(np.atleast_1d(c), s.shape) for c in cols])


def _open(target, mode):
    if hasattr(target, "write") or hasattr(target, "read"):
        return target, False
    return open(target, mode, newline="", encoding="utf-8"), True


def write_table(target, header, rows):
    """Write a CSV with ``header`` and rows of floats (strings pass through)."""
    fh, owned = _open(target, "w")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([x if isinstance(x, str) else _fmt(x) for x in row])
    finally:
        if owned:
            fh.close()


def write_invariant_csv(target, state: DarbouxState):
    write_table(target, INVARIANT_COLUMNS, invariant_rows(state))


def read_invariant_csv(source) -> dict[str, np.ndarray]:
    """Columns of an invariant table keyed by header name."""
    fh, owned = _open(source, "r")
    try:
        rows = list(csv.reader(fh))
    finally:
        if owned:
            fh.close()
    header, body = rows[0], rows[1:]
    data = np.array([[float(x) for x in r] for r in body]).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_report_csv(target, report: OffsetReport):
    rows = ([r.relation_id, r.s, r.lhs, r.rhs, r.abs_err, r.rel_err] for r in report.records)
    write_table(target, REPORT_COLUMNS, rows)


def read_report_csv(source) -> list[tuple]:
    fh, owned = _open(source, "r")
    try:
        reader = csv.reader(fh)
        next(reader)
        return [(r[0], *map(float, r[1:])) for r in reader]
    finally:
        if owned:
            fh.close()


def table_text(header, rows) -> str:
    buf = io.StringIO()
    write_table(buf, header, rows)
    return buf.getvalue()


# -- OBJ ---------------------------------------------------------------------


def grid_faces(rows: int, cols: int) -> np.ndarray:
    """1-based quad indices of a ``rows x cols`` vertex grid stored row-major."""
    i, j = np.meshgrid(np.arange(rows - 1), np.arange(cols - 1), indexing="ij")
    a = (i * cols + j).ravel() + 1
    return np.column_stack([a, a + cols, a + cols + 1, a + 1])


def write_obj(target, points: np.ndarray):
    """Write a ``(rows, cols, 3)`` grid as quads; only ``v`` and ``f`` records."""
    rows, cols, _ = points.shape
    fh, owned = _open(target, "w")
    try:
        for p in points.reshape(-1, 3):
            fh.write(f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}\n")
        for f in grid_faces(rows, cols):
            fh.write("f " + " ".join(str(int(k)) for k in f) + "\n")
    finally:
        if owned:
            fh.close()


def read_obj(source) -> tuple[np.ndarray, list[list[int]]]:
    """``(vertices, faces)``; face indices are returned 1-based as written."""
    fh, owned = _open(source, "r")
    verts, faces = [], []
    try:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x.split("/")[0]) for x in parts[1:]])
    finally:
        if owned:
            fh.close()
    return np.array(verts).reshape(-1, 3), faces


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
