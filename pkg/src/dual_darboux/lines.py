"""Oriented lines in normalized Pluecker coordinates and the E. Study map."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAUnitLine, ZeroDirection
from .vector import DualAngle, DualVector3, dual_angle_between

#: Allowed violation of |a| = 1 and <a, a*> = 0 when importing a dual vector.
LINE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PlueckerLine:
    """Oriented line with unit ``direction`` and ``moment = p x direction``."""

    direction: np.ndarray
    moment: np.ndarray

    def point(self, lam: float = 0.0) -> np.ndarray:
        """Point of the line at signed distance ``lam`` from the origin's foot."""
        return closest_point_to_origin(self) + lam * self.direction

    def to_dual(self) -> DualVector3:
        return to_dual(self)

    def angle_to(self, other: "PlueckerLine") -> DualAngle:
        return dual_angle_between(self.to_dual(), other.to_dual())


def line_from_point_direction(p, a) -> PlueckerLine:
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    n = np.linalg.norm(a)
    if not n > 0:
        raise ZeroDirection("line direction must be nonzero")
    d = a / n
    return PlueckerLine(d, np.cross(p, d))


def closest_point_to_origin(line: PlueckerLine) -> np.ndarray:
    return np.cross(line.direction, line.moment)


def to_dual(line: PlueckerLine) -> DualVector3:
    return DualVector3(line.direction, line.moment)


def from_dual(a: DualVector3, tol: float = LINE_TOL) -> PlueckerLine:
    """Inverse E. Study map.  Rejects vectors off the dual unit sphere."""
    r = np.asarray(a.real, dtype=float)
    m = np.asarray(a.dual, dtype=float)
    if abs(np.dot(r, r) - 1.0) > tol or abs(np.dot(r, m)) > tol:
        raise NotAUnitLine(
            f"|a|^2 - 1 = {np.dot(r, r) - 1.0:.3g}, <a, a*> = {np.dot(r, m):.3g}"
        )
    return PlueckerLine(r.copy(), m.copy())


def parse_line(text: str) -> PlueckerLine:
    """Parse ``"px py pz / dx dy dz"`` into a line."""
    if text.count("/") != 1:
        raise ValueError(f"expected 'px py pz / dx dy dz', got {text!r}")
    left, right = text.split("/")
    try:
        p = [float(x) for x in left.split()]
        d = [float(x) for x in right.split()]
    except ValueError as exc:
        raise ValueError(f"bad number in line spec {text!r}") from exc
    if len(p) != 3 or len(d) != 3:
        raise ValueError(f"expected three coordinates on each side of '/', got {text!r}")
    return line_from_point_direction(p, d)
