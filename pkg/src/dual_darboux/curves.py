"""Parametric curves, striction curves and arc-length maps.

Curves are triples of expressions in ``u`` evaluated over jets, so every
derivative is exact up to rounding.  The director of a ruled surface is
normalized on the fly; callers may supply any nonvanishing direction field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_ORDER, Jet, jet_dot, jet_normalize, jet_scale
from .errors import CylindricalDirector, QuadratureFailure
from .expr import Expr, evaluate, parse_vector
from .quadrature import DEFAULT_MAX_DEPTH, DEFAULT_TOL, adaptive_simpson, fixed_gauss

#: ||e'|| at or below which the director is considered stationary.
TOL_CYL = 1e-8
#: Sample count used to screen a domain for cylindrical points.
SCREEN_SAMPLES = 257

_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class ParametricCurve:
    """Three component expressions over the interval ``domain``."""

    components: tuple[Expr, Expr, Expr]
    domain: tuple[float, float]

    def __post_init__(self):
        lo, hi = (float(x) for x in self.domain)
        if not hi > lo:
            raise ValueError(f"degenerate domain {self.domain}")
        object.__setattr__(self, "domain", (lo, hi))
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def parse(cls, text: str, domain) -> "ParametricCurve":
        return cls(parse_vector(text), domain)

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        vals = np.broadcast_arrays(*(np.asarray(evaluate(c, u), dtype=float) + 0.0 * u
                                     for c in self.components))
        return np.stack(vals, axis=-1)

    def jet(self, u, order: int = DEFAULT_ORDER) -> Jet:
        """Vector jet (components on the last axis) at ``u``; no domain check."""
        var = Jet.variable(u, order)
        return Jet.stack([evaluate(c, var) for c in self.components])

    def contains(self, u) -> bool:
        lo, hi = self.domain
        u = np.asarray(u)
        return bool(np.all((u >= lo - _DOMAIN_SLACK) & (u <= hi + _DOMAIN_SLACK)))

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.components) + "]"


def eval_jet(curve: ParametricCurve, u, order: int = DEFAULT_ORDER) -> Jet:
    """Exact derivatives of ``curve`` at ``u`` up to ``order``."""
    if not curve.contains(u):
        raise ValueError(f"u={u} outside domain {curve.domain}")
    return curve.jet(u, order)


# ---------------------------------------------------------------------------
# Sources: anything that yields (base point, director) jets in some parameter
# ---------------------------------------------------------------------------


class CurvePair:
    """A ruled-surface source given by a base curve ``p`` and a director ``e``."""

    def __init__(self, p: ParametricCurve, e: ParametricCurve):
        self.p = p
        self.e = e
        lo = max(p.domain[0], e.domain[0])
        hi = min(p.domain[1], e.domain[1])
        if not hi > lo:
            raise ValueError("base curve and director have disjoint domains")
        self.domain = (lo, hi)

    def jets(self, u, order: int):
        return self.p.jet(u, order), self.e.jet(u, order)


def striction_jets(p: Jet, e: Jet):
    """Striction curve and unit director from order-(k+1) jets of ``p`` and ``e``.

    Returns ``(c, e_unit)`` as order-k jets with
    ``c = p + lam * e_unit``, ``lam = -<p', e'> / <e', e'>``, so that
    ``<c', e'> = 0``.
    """
    e = jet_normalize(e)
    de = e.deriv()
    lam = -jet_dot(p.deriv(), de) / jet_dot(de, de)
    k = lam.order
    return p.truncate(k) + jet_scale(lam, e.truncate(k)), e.truncate(k)


def director_speed(source, u) -> np.ndarray:
    """``||d e_unit / du||`` at ``u``."""
    _, e = source.jets(np.asarray(u, dtype=float), 1)
    de = jet_normalize(e).deriv()
    return np.sqrt(np.sum(de.value ** 2, axis=-1))


def screen_cylindrical(source, domain, tol: float = TOL_CYL, samples: int = SCREEN_SAMPLES):
    u = np.linspace(domain[0], domain[1], samples)
    speed = director_speed(source, u)
    bad = ~(speed > tol)
    if np.any(bad):
        raise CylindricalDirector(
            f"director is stationary (|e'| <= {tol}) near u = {u[np.argmax(bad)]:.6g}"
        )
    return speed


class StrictionCurve:
    """Evaluator for the striction curve of a (base curve, director) source."""

    def __init__(self, source, tol_cyl: float = TOL_CYL):
        self.source = source
        self.domain = source.domain
        screen_cylindrical(source, self.domain, tol_cyl)

    def jets(self, u, order: int = DEFAULT_ORDER):
        p, e = self.source.jets(np.asarray(u, dtype=float), order + 1)
        return striction_jets(p, e)

    def __call__(self, u) -> np.ndarray:
        return self.jets(u, 0)[0].value


def striction_curve(p: ParametricCurve, e: ParametricCurve, tol_cyl: float = TOL_CYL) -> StrictionCurve:
    return StrictionCurve(CurvePair(p, e), tol_cyl)


# ---------------------------------------------------------------------------
# Arc length of the director indicatrix
# ---------------------------------------------------------------------------


class ArcLengthMap:
    """Monotone map between a curve parameter ``u`` and arc length ``s``.

    The table of panel nodes comes from adaptive Simpson.  Inside a panel,
    ``s(u)`` is a 10-point Gauss-Legendre integral rescaled so the panel end
    matches the table exactly, which keeps ``s(u)`` continuous.  ``u(s)`` is
    found by safeguarded Newton iteration seeded by linear interpolation.
    """

    def __init__(self, speed, u_min: float, u_max: float, tol: float = DEFAULT_TOL,
                 max_depth: int = DEFAULT_MAX_DEPTH):
        self.speed = speed
        self.tol = tol
        self.u_min = float(u_min)
        self.u_max = float(u_max)
        _, (lo, hi, val) = adaptive_simpson(speed, u_min, u_max, tol=tol, max_depth=max_depth,
                                            return_panels=True)
        if np.any(val <= 0):
            raise QuadratureFailure("speed integral is not positive on every panel")
        self.u_nodes = np.concatenate([lo, hi[-1:]])
        self.s_nodes = np.concatenate([[0.0], np.cumsum(val)])
        gl = fixed_gauss(speed, lo, hi)
        self._scale = val / gl
        self.u_nodes.setflags(write=False)
        self.s_nodes.setflags(write=False)

    @property
    def length(self) -> float:
        return float(self.s_nodes[-1])

    def _panel(self, nodes, x):
        k = np.searchsorted(nodes, x, side="right") - 1
        return np.clip(k, 0, len(nodes) - 2)

    def s_of_u(self, u):
        u = np.asarray(u, dtype=float)
        k = self._panel(self.u_nodes, u)
        a = self.u_nodes[k]
        return self.s_nodes[k] + self._scale[k] * fixed_gauss(self.speed, a, u)

    def u_of_s(self, s, max_iter: int = 50):
        s = np.asarray(s, dtype=float)
        k = self._panel(self.s_nodes, s)
        a, b = self.u_nodes[k], self.u_nodes[k + 1]
        sa, sb = self.s_nodes[k], self.s_nodes[k + 1]
        lo, hi = a.copy(), b.copy()
        u = a + (b - a) * (s - sa) / (sb - sa)
        scale = self._scale[k]
        for _ in range(max_iter):
            f = sa + scale * fixed_gauss(self.speed, a, u) - s
            lo = np.where(f < 0, u, lo)
            hi = np.where(f > 0, u, hi)
            step = f / (scale * self.speed(u))
            nxt = u - step
            outside = (nxt < lo) | (nxt > hi) | ~np.isfinite(nxt)
            nxt = np.where(outside, 0.5 * (lo + hi), nxt)
            nxt = np.where(f == 0, u, nxt)
            done = np.abs(nxt - u) <= 4e-16 * np.maximum(1.0, np.abs(u))
            u = nxt
            if np.all(done):
                break
        return u

    # spec-facing aliases
    forward = s_of_u
    inverse = u_of_s


def arc_length_reparam(e: ParametricCurve, tol: float = DEFAULT_TOL,
                       max_depth: int = DEFAULT_MAX_DEPTH, tol_cyl: float = TOL_CYL) -> ArcLengthMap:
    """Arc-length map of the unit director ``e / |e|``."""

    class _Dir:
        domain = e.domain

        @staticmethod
        def jets(u, order):
            return None, e.jet(u, order)

    screen_cylindrical(_Dir, e.domain, tol_cyl)
    return ArcLengthMap(lambda u: director_speed(_Dir, u), e.domain[0], e.domain[1], tol, max_depth)
