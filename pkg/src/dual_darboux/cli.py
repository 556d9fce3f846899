"""Command-line front end.

    dual-darboux analyze <config> [--out FILE]
    dual-darboux offset <config> [--out DIR]
    dual-darboux verify <config> [--threshold R] [--out DIR]
    dual-darboux mesh <config> --out DIR
    dual-darboux line-angle "px py pz / dx dy dz" "px py pz / dx dy dz"

Exit codes: 0 success, 1 verification failed, 2 usage, 3 config or input
error, 4 numerical failure, 5 file I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import export
from .config import JobConfig, load_config
from .errors import (
    ConfigParseError,
    ConfigValidationError,
    DualDarbouxError,
    ExprSyntaxError,
    NotAUnitLine,
    ZeroDirection,
)
from .lines import parse_line
from .offset import full_report, make_offset

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NUMERIC = 4
EXIT_IO = 5

THREADS_ENV = "DUAL_DARBOUX_THREADS"


def worker_count() -> int:
    """Pool size from ``DUAL_DARBOUX_THREADS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigValidationError(THREADS_ENV, f"expected a non-negative integer, got {raw!r}")
    if n < 0:
        raise ConfigValidationError(THREADS_ENV, "must be non-negative")
    return n or (os.cpu_count() or 1)


def _map(fn, items):
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _invariant_table(surface, samples: int) -> np.ndarray:
    chunks = np.array_split(surface.sample_s(samples), max(1, min(worker_count(), samples)))
    parts = _map(lambda s: export.invariant_rows(surface.frame_at(s)), [c for c in chunks if c.size])
    return np.vstack(parts)


def _offsets(cfg: JobConfig, base):
    return [make_offset(base, o.spec, cfg.tolerances.tol_mono) for o in cfg.offsets]


def _spec_label(i: int, cfg: JobConfig) -> str:
    o = cfg.offsets[i]
    return f"offsets[{i}] theta = {o.theta_deg:.10g} deg, theta* = {o.theta_star:.10g}"


# -- commands -----------------------------------------------------------------


def cmd_analyze(cfg: JobConfig, out=None, log=sys.stderr) -> int:
    """Write the base surface's invariant table (stdout when ``out`` is None)."""
    base = cfg.surface()
    rows = _invariant_table(base, cfg.samples)
    export.write_table(sys.stdout if out is None else out, export.INVARIANT_COLUMNS, rows)
    flag, worst = base.is_developable(cfg.tolerances.dev_tol)
    print(f"indicatrix length {base.length:.12g}; max |Delta| {worst:.3e}"
          f" ({'developable' if flag else 'skew'})", file=log)
    return EXIT_OK


def cmd_offset(cfg: JobConfig, out_dir=".", log=sys.stdout) -> int:
    """Write ``offset_<i>.csv``, the invariant table of each configured offset."""
    base = cfg.surface()
    out = export.ensure_dir(out_dir)
    for i, off in enumerate(_offsets(cfg, base)):
        path = out / f"offset_{i}.csv"
        export.write_table(path, export.INVARIANT_COLUMNS, _invariant_table(off, cfg.samples))
        print(f"{_spec_label(i, cfg)} ({off.spec.kind.value}): {path}", file=log)
    return EXIT_OK


def cmd_verify(cfg: JobConfig, threshold: float | None = None, out_dir=".", log=sys.stdout) -> int:
    """Write ``report_<i>.csv`` per offset and print summaries.

    Returns 0 iff every non-advisory relation of every offset stays below
    the threshold.
    """
    if not cfg.offsets:
        raise ConfigValidationError("offsets", "verify needs at least one [[offsets]] entry")
    thr = cfg.tolerances.threshold if threshold is None else threshold
    base = cfg.surface()
    out = export.ensure_dir(out_dir)
    offsets = _offsets(cfg, base)
    reports = _map(lambda off: full_report(base, off.spec, cfg.samples, off, thr,
                                           cfg.tolerances.dev_tol), offsets)
    ok = True
    for i, rep in enumerate(reports):
        export.write_report_csv(out / f"report_{i}.csv", rep)
        print(rep.summary(thr), file=log)
        ok &= rep.passed(thr)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_mesh(cfg: JobConfig, out_dir, log=sys.stdout) -> int:
    """Write ``base.obj`` and ``offset_<i>.obj`` quad meshes."""
    base = cfg.surface()
    out = export.ensure_dir(out_dir)
    surfaces = [("base", base)] + [(f"offset_{i}", o) for i, o in enumerate(_offsets(cfg, base))]
    for name, surf in surfaces:
        path = out / f"{name}.obj"
        export.write_obj(path, surf.sample_mesh(cfg.samples, cfg.v_range, cfg.v_count))
        print(f"{name}: {path}", file=log)
    return EXIT_OK


def cmd_line_angle(a: str, b: str, log=sys.stdout) -> int:
    """Print the dual angle between two lines given as ``"px py pz / dx dy dz"``."""
    ang = parse_line(a).angle_to(parse_line(b))
    print(f"theta = {math.degrees(ang.theta):.12g} deg", file=log)
    print(f"theta* = {ang.theta_star:.12g}", file=log)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dual-darboux",
                                 description="Ruled surfaces and their Bertrand offsets.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="invariant table of the base surface")
    p.add_argument("config")
    p.add_argument("--out", help="CSV file (default: stdout)")

    p = sub.add_parser("offset", help="invariant table of each offset surface")
    p.add_argument("config")
    p.add_argument("--out", default=".", help="output directory (default: .)")

    p = sub.add_parser("verify", help="check every offset relation")
    p.add_argument("config")
    p.add_argument("--threshold", type=float, help="relative residual threshold")
    p.add_argument("--out", default=".", help="directory for report CSVs (default: .)")

    p = sub.add_parser("mesh", help="OBJ meshes of the base and offsets")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("line-angle", help="dual angle between two lines")
    p.add_argument("line_a")
    p.add_argument("line_b")
    return ap


def run(args) -> int:
    if args.command == "line-angle":
        return cmd_line_angle(args.line_a, args.line_b)
    cfg = load_config(args.config)
    if args.command == "analyze":
        return cmd_analyze(cfg, args.out)
    if args.command == "offset":
        return cmd_offset(cfg, args.out)
    if args.command == "verify":
        return cmd_verify(cfg, args.threshold, args.out)
    return cmd_mesh(cfg, args.out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (ConfigParseError, ConfigValidationError, ExprSyntaxError,
            ZeroDirection, NotAUnitLine) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DualDarbouxError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:  # malformed line specs and similar input problems
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
