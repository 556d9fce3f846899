"""Job configuration files.

A config is a TOML document::

    samples = 50

    [base]
    c_expr = "[0, 0, 0.5*u]"
    e_expr = "[cos(u), sin(u), 0]"
    u_range = [0.0, 6.283185307179586]

    [[offsets]]
    theta_deg = 30.0
    theta_star = 0.3

    [mesh]
    v_range = [-1.0, 1.0]
    v_count = 5

    [tolerances]
    threshold = 1e-6

``offsets``, ``mesh`` and ``tolerances`` are optional.  Unknown keys are
rejected so that typos do not silently fall back to defaults.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .curves import TOL_CYL, ParametricCurve
from .errors import ConfigParseError, ConfigValidationError, ExprSyntaxError
from .offset import REPORT_THRESHOLD, TOL_MONO, OffsetSpec
from .quadrature import DEFAULT_MAX_DEPTH, DEFAULT_TOL
from .surface import RuledSurface


@dataclass(frozen=True)
class Tolerances:
    tol_s: float = DEFAULT_TOL
    tol_cyl: float = TOL_CYL
    tol_mono: float = TOL_MONO
    threshold: float = REPORT_THRESHOLD
    max_depth: int = DEFAULT_MAX_DEPTH
    dev_tol: float | None = None  # None: scale-aware default


@dataclass(frozen=True)
class OffsetEntry:
    theta_deg: float
    theta_star: float = 0.0

    @property
    def spec(self) -> OffsetSpec:
        return OffsetSpec.from_degrees(self.theta_deg, self.theta_star)


@dataclass(frozen=True)
class JobConfig:
    c_expr: str
    e_expr: str
    u_range: tuple[float, float]
    samples: int = 50
    offsets: tuple[OffsetEntry, ...] = ()
    v_range: tuple[float, float] = (-1.0, 1.0)
    v_count: int = 5
    tolerances: Tolerances = field(default_factory=Tolerances)

    def curves(self) -> tuple[ParametricCurve, ParametricCurve]:
        return (_parse_curve(self.c_expr, self.u_range, "base.c_expr"),
                _parse_curve(self.e_expr, self.u_range, "base.e_expr"))

    def surface(self) -> RuledSurface:
        c, e = self.curves()
        tol = self.tolerances
        return RuledSurface.from_curves(c, e, tol_s=tol.tol_s, tol_cyl=tol.tol_cyl,
                                        max_depth=tol.max_depth)


def _parse_curve(text: str, domain, name: str) -> ParametricCurve:
    try:
        return ParametricCurve.parse(text, domain)
    except ExprSyntaxError as exc:
        err = type(exc)(f"{name} {text!r}: {exc.message}", exc.offset, text)
        err.field = name
        raise err from exc


# -- validation helpers -----------------------------------------------------


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValidationError(name, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigValidationError(name, "must be finite")
    return float(value)


def _integer(value, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigValidationError(name, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigValidationError(name, f"must be at least {minimum}")
    return value


def _string(value, name: str) -> str:
    if not isinstance(value, str):
        raise ConfigValidationError(name, f"expected a quoted string, got {value!r}")
    return value


def _interval(value, name: str) -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigValidationError(name, "expected a two-element array [lo, hi]")
    lo, hi = (_number(x, f"{name}[{i}]") for i, x in enumerate(value))
    if not hi > lo:
        raise ConfigValidationError(name, f"degenerate range [{lo}, {hi}]")
    return lo, hi


def _positive(value, name: str) -> float:
    x = _number(value, name)
    if not x > 0:
        raise ConfigValidationError(name, "must be positive")
    return x


def _table(value, name: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigValidationError(name, "expected a table")
    return value


def _reject_unknown(table: dict, allowed, prefix: str):
    for key in table:
        if key not in allowed:
            raise ConfigValidationError(prefix + key, "unknown key")


def _require(table: dict, key: str, prefix: str):
    if key not in table:
        raise ConfigValidationError(prefix + key, "missing required key")
    return table[key]


# -- loading ------------------------------------------------------------------


_POSITION = re.compile(r"\(at line (\d+), column (\d+)\)")


def parse_toml(text: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        msg = str(exc)
        m = _POSITION.search(msg)
        if m:
            msg = msg[:m.start()].rstrip()
            if line is None:
                line, col = int(m.group(1)), int(m.group(2))
        raise ConfigParseError(msg, line, col) from None


def config_from_dict(doc: dict) -> JobConfig:
    """Validate a parsed document and apply defaults."""
    _reject_unknown(doc, {"samples", "base", "offsets", "mesh", "tolerances"}, "")
    base = _table(_require(doc, "base", ""), "base")
    _reject_unknown(base, {"c_expr", "e_expr", "u_range"}, "base.")
    c_expr = _string(_require(base, "c_expr", "base."), "base.c_expr")
    e_expr = _string(_require(base, "e_expr", "base."), "base.e_expr")
    u_range = _interval(_require(base, "u_range", "base."), "base.u_range")
    samples = _integer(doc.get("samples", 50), "samples", 2)

    raw_offsets = doc.get("offsets", [])
    if not isinstance(raw_offsets, list):
        raise ConfigValidationError("offsets", "expected an array of tables ([[offsets]])")
    offsets = []
    for i, item in enumerate(raw_offsets):
        prefix = f"offsets[{i}]."
        item = _table(item, f"offsets[{i}]")
        _reject_unknown(item, {"theta_deg", "theta_star"}, prefix)
        theta = _number(_require(item, "theta_deg", prefix), prefix + "theta_deg")
        if not 0.0 <= theta <= 180.0:
            raise ConfigValidationError(prefix + "theta_deg", f"{theta} is outside [0, 180]")
        theta_star = _number(item.get("theta_star", 0.0), prefix + "theta_star")
        offsets.append(OffsetEntry(theta, theta_star))

    mesh = _table(doc.get("mesh", {}), "mesh")
    _reject_unknown(mesh, {"v_range", "v_count"}, "mesh.")
    v_range = _interval(mesh.get("v_range", [-1.0, 1.0]), "mesh.v_range")
    v_count = _integer(mesh.get("v_count", 5), "mesh.v_count", 2)

    tol = _table(doc.get("tolerances", {}), "tolerances")
    _reject_unknown(tol, {f for f in Tolerances.__dataclass_fields__}, "tolerances.")
    kw = {}
    for key in ("tol_s", "tol_cyl", "tol_mono", "threshold", "dev_tol"):
        if key in tol:
            kw[key] = _positive(tol[key], "tolerances." + key)
    if "max_depth" in tol:
        kw["max_depth"] = _integer(tol["max_depth"], "tolerances.max_depth", 1)

    cfg = JobConfig(c_expr, e_expr, u_range, samples, tuple(offsets), v_range, v_count,
                    Tolerances(**kw))
    cfg.curves()  # surface expression errors now, with field context
    return cfg


def loads_config(text: str) -> JobConfig:
    return config_from_dict(parse_toml(text))


def load_config(path) -> JobConfig:
    """Read, parse and validate the config file at ``path``."""
    text = Path(path).read_text(encoding="utf-8")
    return loads_config(text)


def _toml_value(v) -> str:
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("inf" if v > 0 else "-inf")
    return str(v)


def dumps_config(cfg: JobConfig) -> str:
    """Serialize ``cfg`` so that ``loads_config(dumps_config(cfg)) == cfg``."""
    out = [f"samples = {cfg.samples}", "", "[base]",
           f"c_expr = {_toml_value(cfg.c_expr)}",
           f"e_expr = {_toml_value(cfg.e_expr)}",
           f"u_range = {_toml_value(cfg.u_range)}", ""]
    for o in cfg.offsets:
        out += ["[[offsets]]", f"theta_deg = {o.theta_deg!r}", f"theta_star = {o.theta_star!r}", ""]
    out += ["[mesh]", f"v_range = {_toml_value(cfg.v_range)}", f"v_count = {cfg.v_count}", ""]
    out.append("[tolerances]")
    for name, value in vars(cfg.tolerances).items():
        if value is not None:
            out.append(f"{name} = {_toml_value(value)}")
    return "\n".join(out) + "\n"
