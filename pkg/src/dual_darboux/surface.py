"""Ruled surfaces as curves on the dual unit sphere.

A :class:`RuledSurface` wraps a *source*: any object with a ``domain``
attribute and a ``jets(u, order) -> (p, e)`` method returning vector jets of a
base curve and a (not necessarily unit) director in some parameter ``u``.  On
construction the striction curve is taken as base curve and the director's
spherical indicatrix is reparameterized by arc length ``s``.  All invariants
come from jets in ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    DEFAULT_ORDER,
    DualScalar,
    Jet,
    dual_sqrt,
    jet_cross,
    jet_dot,
    jet_sqrt,
)
from .curves import (
    TOL_CYL,
    ArcLengthMap,
    CurvePair,
    ParametricCurve,
    StrictionCurve,
    director_speed,
)
from .quadrature import DEFAULT_MAX_DEPTH, DEFAULT_TOL, adaptive_simpson, cumulative_integral
from .vector import DualVector3, dual_norm

#: Order of the s-jets used for a Darboux state (c needs 1, e needs 2).
STATE_ORDER = 2


def _dot(a, b):
    return np.sum(a * b, axis=-1)


@dataclass(frozen=True, eq=False)
class DarbouxState:
    """Geodesic-trihedron snapshot of a ruled surface at arc length ``s``.

    Vector fields have a trailing axis of length 3; scalar fields are floats
    or arrays matching the batch shape of ``s``.
    """

    s: np.ndarray
    c: np.ndarray
    dc: np.ndarray  # c' = dc/ds
    e: np.ndarray
    t: np.ndarray
    g: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    Delta: np.ndarray
    gamma_dual: np.ndarray
    R_bar: DualScalar
    rho_bar: DualScalar

    @property
    def gamma_bar(self) -> DualScalar:
        return DualScalar(self.gamma, self.gamma_dual)

    def _lift(self, v) -> DualVector3:
        return DualVector3(v, np.cross(self.c, v))

    @property
    def e_tilde(self) -> DualVector3:
        return self._lift(self.e)

    @property
    def t_tilde(self) -> DualVector3:
        return self._lift(self.t)

    @property
    def g_tilde(self) -> DualVector3:
        return self._lift(self.g)

    def __getitem__(self, idx) -> "DarbouxState":
        """Select one sample (or a slice) of a batched state."""
        pick = lambda x: np.asarray(x)[idx]
        return DarbouxState(
            pick(self.s), pick(self.c), pick(self.dc), pick(self.e), pick(self.t), pick(self.g),
            pick(self.gamma), pick(self.delta), pick(self.Delta), pick(self.gamma_dual),
            DualScalar(pick(self.R_bar.real), pick(self.R_bar.dual)),
            DualScalar(pick(self.rho_bar.real), pick(self.rho_bar.dual)),
        )


def dual_curvature(gamma_bar: DualScalar) -> DualScalar:
    """``1 / sqrt(1 + gamma_bar^2)``."""
    return 1.0 / dual_sqrt(1.0 + gamma_bar * gamma_bar)


def spherical_radius(gamma_bar: DualScalar) -> DualScalar:
    """Dual angle ``rho_bar`` with ``sin rho_bar = R_bar`` and ``cos rho_bar = gamma_bar R_bar``."""
    R = dual_curvature(gamma_bar)
    C = gamma_bar * R
    rho = np.arctan2(R.real, C.real)
    # sin: R.dual = rho* cos(rho); cos: C.dual = -rho* sin(rho)
    rho_star = R.dual * np.cos(rho) - C.dual * np.sin(rho)
    return DualScalar(rho, rho_star)


def darboux_vector(state: DarbouxState, unit: bool = False) -> DualVector3:
    """``d = gamma_bar e~ + g~``; with ``unit`` scaled by ``R_bar`` onto the dual unit sphere."""
    d = state.e_tilde * state.gamma_bar + state.g_tilde
    return d * state.R_bar if unit else d


def state_from_jets(s, c: Jet, e: Jet) -> DarbouxState:
    """Build a :class:`DarbouxState` from arc-length jets of ``c`` and unit ``e``."""
    e0 = e.value
    t = e.derivative(1)
    e2 = e.derivative(2)
    g = np.cross(e0, t)
    gamma = _dot(g, e2)  # det(e, e', e'')
    c0 = c.value
    dc = c.derivative(1)
    delta = _dot(dc, e0)
    Delta = _dot(dc, g)  # det(c', e, t)
    gamma_dual = delta - gamma * Delta
    gb = DualScalar(gamma, gamma_dual)
    return DarbouxState(
        s=np.asarray(s, dtype=float), c=c0, dc=dc, e=e0, t=t, g=g,
        gamma=gamma, delta=delta, Delta=Delta, gamma_dual=gamma_dual,
        R_bar=dual_curvature(gb), rho_bar=spherical_radius(gb),
    )


class RuledSurface:
    """Ruled surface ``c(s) + v e(s)`` in striction / indicatrix-arc-length form."""

    def __init__(self, source, *, tol_s: float = DEFAULT_TOL, tol_cyl: float = TOL_CYL,
                 max_depth: int = DEFAULT_MAX_DEPTH):
        self.source = source
        self.tol_s = tol_s
        self.max_depth = max_depth
        self.striction = StrictionCurve(source, tol_cyl)
        lo, hi = source.domain
        self.arc_map = ArcLengthMap(self.param_speed, lo, hi, tol_s, max_depth)
        self.s_domain = (0.0, self.arc_map.length)

    @classmethod
    def from_curves(cls, p: ParametricCurve, e: ParametricCurve, **kw) -> "RuledSurface":
        return cls(CurvePair(p, e), **kw)

    @classmethod
    def from_expressions(cls, c_expr: str, e_expr: str, u_range, **kw) -> "RuledSurface":
        return cls.from_curves(ParametricCurve.parse(c_expr, u_range),
                               ParametricCurve.parse(e_expr, u_range), **kw)

    # -- parameters --------------------------------------------------------
    @property
    def length(self) -> float:
        return self.s_domain[1]

    def param_speed(self, u):
        """``ds/du``: speed of the unit director in the source parameter."""
        return director_speed(self.source, u)

    def param_of(self, s):
        return self.arc_map.u_of_s(s)

    def s_of_param(self, u):
        return self.arc_map.s_of_u(u)

    # -- jets --------------------------------------------------------------
    def jets_at_param(self, u, order: int = DEFAULT_ORDER):
        """Arc-length jets ``(c, e)`` at source parameter ``u``."""
        c, e = self.striction.jets(u, order)
        if order == 0:  # values only; nothing to reparameterize
            return c, e
        sigma = jet_sqrt(jet_dot(e.deriv(), e.deriv()))
        h = sigma.integrate(0.0).revert()
        return c.compose(h), e.compose(h)

    def jets_at(self, s, order: int = DEFAULT_ORDER):
        return self.jets_at_param(self.param_of(s), order)

    # -- invariants --------------------------------------------------------
    def state_at_param(self, u, s=None) -> DarbouxState:
        u = np.asarray(u, dtype=float)
        c, e = self.jets_at_param(u, STATE_ORDER)
        return state_from_jets(self.s_of_param(u) if s is None else s, c, e)

    def frame_at(self, s) -> DarbouxState:
        s = np.asarray(s, dtype=float)
        return self.state_at_param(self.param_of(s), s)

    def dual_curve_at(self, s) -> DualVector3:
        """The ruling as a unit dual vector ``e + eps c x e``."""
        c, e = self.jets_at(s, 0)
        return DualVector3(e.value, np.cross(c.value, e.value))

    def dual_curve_speed(self, s) -> DualScalar:
        """``||d e~/ds||`` computed by differentiating both parts of ``e~`` with jets."""
        c, e = self.jets_at(s, 1)
        moment = jet_cross(c, e)
        return dual_norm(DualVector3(e.derivative(1), moment.derivative(1)))

    def integrate_param(self, fn, u_end, tol: float | None = None):
        """``int fn(state) ds`` from the start of the domain to source parameter ``u_end``.

        ``fn`` may return several integrands stacked on a trailing axis.
        """
        lo = self.source.domain[0]

        def integrand(u):
            val = np.asarray(fn(self.state_at_param(u, s=np.zeros_like(u))))
            speed = self.param_speed(u)
            return val * speed.reshape(speed.shape + (1,) * (val.ndim - speed.ndim))

        u_end = np.asarray(u_end, dtype=float)
        tol = self.tol_s if tol is None else tol
        if u_end.ndim == 0:
            return adaptive_simpson(integrand, lo, u_end, tol=tol, max_depth=self.max_depth)
        # accumulate over sorted end points instead of integrating each from lo
        flat = u_end.ravel()
        order = np.argsort(flat)
        nodes = np.concatenate([[lo], flat[order]])
        acc = cumulative_integral(integrand, nodes, tol=tol, max_depth=self.max_depth)[1:]
        out = np.empty_like(acc)
        out[order] = acc
        return out.reshape(u_end.shape + acc.shape[1:])

    def integrate(self, fn, s, tol: float | None = None):
        """``int_0^s fn(state) ds``."""
        return self.integrate_param(fn, self.param_of(s), tol)

    def dual_arc_length(self, s) -> DualScalar:
        """``s + eps int_0^s Delta``."""
        s = np.asarray(s, dtype=float)
        return DualScalar(s, self.integrate(lambda st: st.Delta, s))

    def sample_s(self, count: int) -> np.ndarray:
        return np.linspace(self.s_domain[0], self.s_domain[1], count)

    def is_developable(self, tol: float | None = None, samples: int = 201):
        """``(flag, max|Delta|)`` over a uniform grid in ``s``.

        The default tolerance is ``1e-8 * (1 + max|c|)`` since Delta carries
        length units.
        """
        st = self.frame_at(self.sample_s(samples))
        worst = float(np.max(np.abs(st.Delta)))
        if tol is None:
            tol = 1e-8 * (1.0 + float(np.max(np.linalg.norm(st.c, axis=-1))))
        return worst < tol, worst

    def sample_mesh(self, s_count: int, v_range, v_count: int) -> np.ndarray:
        """Grid ``points[i, j] = c(s_i) + v_j e(s_i)`` of shape ``(s_count, v_count, 3)``."""
        if s_count < 2 or v_count < 2:
            raise ValueError("mesh needs at least 2 samples in each direction")
        s = self.sample_s(s_count)
        c, e = self.jets_at(s, 0)
        v = np.linspace(float(v_range[0]), float(v_range[1]), v_count)
        return c.value[:, None, :] + v[None, :, None] * e.value[:, None, :]


# functional aliases -------------------------------------------------------


def frame_at(surface: RuledSurface, s) -> DarbouxState:
    return surface.frame_at(s)


def dual_curve_at(surface: RuledSurface, s) -> DualVector3:
    return surface.dual_curve_at(s)


def dual_arc_length(surface: RuledSurface, s) -> DualScalar:
    return surface.dual_arc_length(s)


def is_developable(surface: RuledSurface, tol: float | None = None, samples: int = 201):
    return surface.is_developable(tol, samples)


def sample_mesh(surface: RuledSurface, s_count: int, v_range, v_count: int) -> np.ndarray:
    return surface.sample_mesh(s_count, v_range, v_count)
