"""Dual vectors ``a + eps*a*`` in D^3 and the dual angle between lines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DualScalar, div
from .errors import ParallelLines, PureDualVector

#: ||real part|| below which a dual vector cannot be normalized.
VECTOR_TOL = 1e-12
#: sin(theta) below which two lines are treated as parallel.
PARALLEL_TOL = 1e-9


def _vec(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.shape[-1:] != (3,):
        raise ValueError(f"expected trailing dimension 3, got shape {a.shape}")
    return a


def _dot(a, b):
    return np.sum(a * b, axis=-1)


@dataclass(frozen=True, eq=False)
class DualVector3:
    """Vector over the dual numbers.  ``real`` and ``dual`` have shape ``(..., 3)``."""

    real: np.ndarray
    dual: np.ndarray

    __array_ufunc__ = None

    def __post_init__(self):
        r = _vec(self.real)
        d = _vec(self.dual) if self.dual is not None else np.zeros_like(r)
        r, d = np.broadcast_arrays(r, d)
        object.__setattr__(self, "real", r)
        object.__setattr__(self, "dual", d)

    @classmethod
    def from_real(cls, v) -> "DualVector3":
        v = _vec(v)
        return cls(v, np.zeros_like(v))

    def __add__(self, other: "DualVector3") -> "DualVector3":
        return DualVector3(self.real + other.real, self.dual + other.dual)

    def __sub__(self, other: "DualVector3") -> "DualVector3":
        return DualVector3(self.real - other.real, self.dual - other.dual)

    def __neg__(self) -> "DualVector3":
        return DualVector3(-self.real, -self.dual)

    def __mul__(self, k) -> "DualVector3":
        """Scale by a dual number (or a real)."""
        k = DualScalar.coerce(k)
        kr = np.asarray(k.real)[..., None]
        kd = np.asarray(k.dual)[..., None]
        return DualVector3(kr * self.real, kr * self.dual + kd * self.real)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "DualVector3":
        inv = div(DualScalar(1.0, 0.0), k)
        return self * inv

    def component(self, i: int) -> DualScalar:
        return DualScalar(self.real[..., i], self.dual[..., i])

    def dot(self, other: "DualVector3") -> DualScalar:
        return dual_dot(self, other)

    def cross(self, other: "DualVector3") -> "DualVector3":
        return dual_cross(self, other)

    def __repr__(self) -> str:
        return f"DualVector3(real={self.real.tolist()}, dual={self.dual.tolist()})"


@dataclass(frozen=True)
class DualAngle:
    """``theta + eps*theta_star``: angle between two lines and their signed distance."""

    theta: float
    theta_star: float

    def as_dual(self) -> DualScalar:
        return DualScalar(self.theta, self.theta_star)


def dual_dot(a: DualVector3, b: DualVector3) -> DualScalar:
    return DualScalar(_dot(a.real, b.real), _dot(a.real, b.dual) + _dot(a.dual, b.real))


def dual_cross(a: DualVector3, b: DualVector3) -> DualVector3:
    return DualVector3(
        np.cross(a.real, b.real),
        np.cross(a.real, b.dual) + np.cross(a.dual, b.real),
    )


def dual_norm(a: DualVector3, tol: float = VECTOR_TOL) -> DualScalar:
    """``||a|| + eps <a, a*>/||a||``; undefined for a pure dual vector."""
    n = np.sqrt(_dot(a.real, a.real))
    if np.any(n < tol):
        raise PureDualVector("dual vector has vanishing real part")
    return DualScalar(n, _dot(a.real, a.dual) / n)


def normalize(a: DualVector3, tol: float = VECTOR_TOL) -> DualVector3:
    """Project onto the dual unit sphere by dividing by the dual norm.

    This removes the moment component parallel to the direction, so the
    result always satisfies ``<r, r> = 1 + eps 0``.
    """
    return a / dual_norm(a, tol)


def dual_angle_between(a: DualVector3, b: DualVector3, strict: bool = False) -> DualAngle:
    """Dual angle between two unit dual vectors (oriented lines).

    ``theta`` is in ``[0, pi]``.  ``theta_star`` is the signed distance from
    line ``a`` to line ``b`` measured along ``a x b / |a x b|``, which is the
    sign that makes ``<a, b> = cos(theta) - eps theta_star sin(theta)`` hold.

    For (anti)parallel lines that direction does not exist: the unsigned
    distance is returned, or :class:`ParallelLines` is raised when ``strict``.
    """
    d = dual_dot(a, b)
    c = d.real
    sin_t = np.linalg.norm(np.cross(a.real, b.real), axis=-1)
    theta = np.arctan2(sin_t, c)  # arccos loses half the digits near 0 and pi
    parallel = sin_t < PARALLEL_TOL
    if np.any(parallel) and strict:
        raise ParallelLines("lines are parallel; common perpendicular undefined")
    safe = np.where(parallel, 1.0, sin_t)
    theta_star = -d.dual / safe
    if np.any(parallel):
        sign = np.where(c >= 0, 1.0, -1.0)[..., None]
        w = b.dual - sign * a.dual
        dist = np.linalg.norm(np.cross(a.real, w), axis=-1)
        theta_star = np.where(parallel, dist, theta_star)
    if np.ndim(theta) == 0:
        return DualAngle(float(theta), float(theta_star))
    return DualAngle(theta, theta_star)
