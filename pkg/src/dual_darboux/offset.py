"""Bertrand offsets of ruled surfaces and their verification.

An offset rotates the ruling by a constant dual angle ``theta + eps theta*``
about the central tangent ``t~``: the new director is
``cos(theta) e - sin(theta) g`` and the new base curve is ``c + theta* t``.
The offset is rebuilt as an ordinary :class:`RuledSurface` (own striction
curve, own indicatrix arc length), so every closed-form prediction below can
be compared with a first-principles measurement on that surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .algebra import DualScalar, dual_cos, dual_sin, jet_cross, jet_dot, jet_scale, jet_sqrt
from .errors import DegenerateOffset, NoSolution, NotDevelopableBase
from .surface import DarbouxState, RuledSurface, dual_curvature
from .vector import dual_angle_between

#: cos(theta) + gamma sin(theta) must exceed this everywhere.
TOL_MONO = 1e-6
#: Tolerance for classifying theta as 0 or pi/2.
KIND_TOL = 1e-12
#: Default pass threshold on relative residuals in reports.
REPORT_THRESHOLD = 1e-6


class OffsetKind(str, Enum):
    ORIENTED = "oriented"
    RIGHT = "right"
    GENERAL = "general"


@dataclass(frozen=True)
class OffsetSpec:
    """Dual offset angle: offset angle ``theta`` in [0, pi] and offset distance ``theta_star``."""

    theta: float
    theta_star: float = 0.0

    def __post_init__(self):
        if not (-KIND_TOL <= self.theta <= math.pi + KIND_TOL):
            raise ValueError(f"offset angle {self.theta} outside [0, pi]")

    @classmethod
    def from_degrees(cls, theta_deg: float, theta_star: float = 0.0) -> "OffsetSpec":
        return cls(math.radians(theta_deg), theta_star)

    @property
    def kind(self) -> OffsetKind:
        if abs(self.theta) <= KIND_TOL:
            return OffsetKind.ORIENTED
        if abs(self.theta - math.pi / 2) <= KIND_TOL:
            return OffsetKind.RIGHT
        return OffsetKind.GENERAL

    @property
    def dual_angle(self) -> DualScalar:
        return DualScalar(self.theta, self.theta_star)

    def inverse(self) -> "OffsetSpec":
        """Not a valid spec (negative angle); used only for construction-level round trips."""
        spec = object.__new__(OffsetSpec)
        object.__setattr__(spec, "theta", -self.theta)
        object.__setattr__(spec, "theta_star", -self.theta_star)
        return spec


class OffsetSource:
    """Jets of ``(c + theta* t, cos(theta) e - sin(theta) g)`` in the base's source parameter.

    ``t = (de/du) / |de/du|`` is built with jets, so no arc-length inversion
    is needed per evaluation.
    """

    def __init__(self, base: RuledSurface, spec: OffsetSpec):
        self.base = base
        self.spec = spec
        self.domain = base.source.domain
        self._cos = math.cos(spec.theta)
        self._sin = math.sin(spec.theta)

    def jets(self, u, order: int):
        c, e = self.base.striction.jets(u, order + 1)
        de = e.deriv()
        t = jet_scale(1.0 / jet_sqrt(jet_dot(de, de)), de)
        e = e.truncate(order)
        g = jet_cross(e, t)
        e1 = e * self._cos - g * self._sin
        c1 = c.truncate(order) + t * self.spec.theta_star
        return c1, e1


class OffsetSurface(RuledSurface):
    """A Bertrand offset; it shares its source parameter with the base surface."""

    def __init__(self, base: RuledSurface, spec: OffsetSpec, **kw):
        self.base = base
        self.spec = spec
        kw.setdefault("tol_s", base.tol_s)
        kw.setdefault("max_depth", base.max_depth)
        super().__init__(OffsetSource(base, spec), **kw)

    def s1_of_base(self, s):
        """Offset arc length at the ruling matching base arc length ``s``."""
        return self.s_of_param(self.base.param_of(s))

    def matched_state(self, s) -> DarbouxState:
        """Offset Darboux state at the ruling matching base arc length ``s``."""
        return self.state_at_param(self.base.param_of(np.asarray(s, dtype=float)))

    def speed_ratio(self, s) -> np.ndarray:
        """Measured ``ds1/ds`` at base arc length ``s``."""
        u = self.base.param_of(np.asarray(s, dtype=float))
        return self.param_speed(u) / self.base.param_speed(u)

    def striction_deviation(self, s) -> np.ndarray:
        """``|c_1 - (c + theta* t)|``: distance of the recomputed striction curve from the shifted base curve."""
        u = self.base.param_of(np.asarray(s, dtype=float))
        p, _ = self.source.jets(u, 1)
        c, _ = self.striction.jets(u, 0)
        return np.linalg.norm(c.value - p.truncate(0).value, axis=-1)


def monotonicity(base: RuledSurface, spec: OffsetSpec, samples: int = 257) -> np.ndarray:
    """``cos(theta) + gamma sin(theta)`` on a uniform grid of base arc length."""
    st = base.frame_at(base.sample_s(samples))
    return math.cos(spec.theta) + st.gamma * math.sin(spec.theta)


def make_offset(base: RuledSurface, spec: OffsetSpec, tol_mono: float = TOL_MONO,
                samples: int = 257) -> OffsetSurface:
    """Build the Bertrand offset of ``base`` with dual angle ``spec``.

    Raises :class:`DegenerateOffset` when the offset indicatrix would stall
    or reverse somewhere on the sample grid.
    """
    ratio = monotonicity(base, spec, samples)
    if np.any(~(ratio > tol_mono)):
        raise DegenerateOffset(
            f"cos(theta) + gamma sin(theta) reaches {ratio.min():.3g} <= {tol_mono}"
        )
    return OffsetSurface(base, spec)


# ---------------------------------------------------------------------------
# Closed-form relations
# ---------------------------------------------------------------------------


def arc_length_ratio(state: DarbouxState, spec: OffsetSpec) -> DualScalar:
    """Predicted ``d s1_bar / d s_bar = cos(theta_bar) + gamma_bar sin(theta_bar)``."""
    th = spec.dual_angle
    return dual_cos(th) + state.gamma_bar * dual_sin(th)


def measured_arc_length_ratio(offset: OffsetSurface, s) -> DualScalar:
    """``(ds1 (1 + eps Delta1)) / (ds (1 + eps Delta))`` measured on the two surfaces."""
    s = np.asarray(s, dtype=float)
    sigma1 = offset.speed_ratio(s)
    d1 = offset.matched_state(s).Delta
    d0 = offset.base.frame_at(s).Delta
    return DualScalar(sigma1, sigma1 * d1) / DualScalar(1.0, d0)


@dataclass(frozen=True, eq=False)
class PredictedInvariants:
    """Closed-form offset invariants at one base state."""

    ratio: np.ndarray  # ds1/ds
    gamma1: np.ndarray
    delta1: np.ndarray
    Delta1: np.ndarray
    gamma_bar1: DualScalar  # gamma1 + eps (delta1 - gamma1 Delta1)
    gamma_bar1_expanded: DualScalar  # printed expansion in theta, gamma, delta, Delta
    A: np.ndarray
    B: np.ndarray
    R_bar1: DualScalar
    cos_rho_bar1: DualScalar
    cot_rho1: np.ndarray


def invariant_relations(state: DarbouxState, spec: OffsetSpec,
                        tol_mono: float = TOL_MONO) -> PredictedInvariants:
    """Predict the offset's invariants from the base state and the dual offset angle."""
    ct, st = math.cos(spec.theta), math.sin(spec.theta)
    ts = spec.theta_star
    g, d, D = state.gamma, state.delta, state.Delta
    sigma = ct + g * st
    if np.any(~(sigma > tol_mono)):
        raise DegenerateOffset("cos(theta) + gamma sin(theta) is not positive")
    k = 1.0 / sigma  # ds/ds1
    gamma1 = (g * ct - st) * k
    Delta1 = (D * ct + d * st + ts * (g * ct - st)) * k
    delta1 = (d * ct - D * st) * k - ts
    gamma_bar1 = DualScalar(gamma1, delta1 - gamma1 * Delta1)
    expanded_dual = k * (
        (k * ct * (st - g * ct) - st) * D
        + (ct - k * st * (g * ct - st)) * d
        - (k * (g * ct - st) ** 2 + ct + g * st) * ts
    )
    gamma_bar1_expanded = DualScalar(k * (ct * g - st), expanded_dual)
    A = k * (g * ct - st)
    # The theta* term carries (gamma cos - sin); see the decisions ledger.
    B = A * k * (
        -(st + A * ct) * D
        + (ct - A * st) * d
        - (A * (g * ct - st) + ct + g * st) * ts
    )
    q = 1.0 + A * A
    R_bar1 = DualScalar(q ** -0.5, -B * q ** -1.5)
    safe_A = np.where(np.abs(A) > 1e-12, A, 1.0)
    B_over_A = np.where(np.abs(A) > 1e-12, B / safe_A, gamma_bar1.dual)
    cos_rho_bar1 = DualScalar(A * q ** -0.5, B_over_A * q ** -1.5)
    return PredictedInvariants(
        ratio=sigma, gamma1=gamma1, delta1=delta1, Delta1=Delta1,
        gamma_bar1=gamma_bar1, gamma_bar1_expanded=gamma_bar1_expanded,
        A=A, B=B, R_bar1=R_bar1, cos_rho_bar1=cos_rho_bar1, cot_rho1=(g * ct - st) / sigma,
    )


def offset_angle_from_curvatures(gamma, gamma1, snap: float = 1e-12):
    """Offset angle in ``[0, pi)`` from the two conical curvatures.

    ``pi/2`` is returned where ``1 + gamma gamma1 = 0``.  Negative angles of
    magnitude below ``snap`` (rounding noise around an oriented offset) map
    to 0 rather than to just under pi.
    """
    num = np.asarray(gamma - gamma1, dtype=float)
    den = np.asarray(1.0 + gamma * gamma1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        th = np.where(den == 0.0, math.pi / 2, np.arctan(num / np.where(den == 0.0, 1.0, den)))
    th = np.where((th < 0) & (th > -snap), 0.0, th)
    th = np.where(th < 0, th + math.pi, th)
    return float(th) if th.ndim == 0 else th


def developable_offset_distance(state: DarbouxState, theta: float, tol: float = 1e-8):
    """Offset distance making the offset of a developable surface developable at ``state``.

    ``theta* = delta sin(theta) / (sin(theta) - gamma cos(theta))``.
    """
    if np.any(np.abs(state.Delta) > tol):
        raise NotDevelopableBase(f"|Delta| = {np.max(np.abs(state.Delta)):.3g} exceeds {tol}")
    st, ct = math.sin(theta), math.cos(theta)
    den = st - state.gamma * ct
    if np.any(np.abs(den) < 1e-12):
        raise NoSolution("sin(theta) = gamma cos(theta): no developable offset")
    out = state.delta * st / den
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def _is_offset_of(other, base) -> bool:
    return isinstance(other, OffsetSurface) and other.base is base


def verify_common_perpendicular(base: RuledSurface, other: RuledSurface, samples: int = 50,
                                shift: float = 0.0):
    """``(max |t - t1|, max |c x t - c1 x t1|)`` over matched rulings.

    Rulings of an :class:`OffsetSurface` built on ``base`` are matched
    through the shared parameter; any other surface is matched by equal arc
    length.  ``shift`` deliberately misaligns the match (negative control).
    """
    s = base.sample_s(samples)
    lo, hi = base.s_domain if _is_offset_of(other, base) else other.s_domain
    s = s[(s + shift >= lo) & (s + shift <= hi)]
    a = base.frame_at(s)
    b = other.matched_state(s + shift) if _is_offset_of(other, base) else other.frame_at(s + shift)
    real = np.linalg.norm(a.t - b.t, axis=-1)
    dual = np.linalg.norm(np.cross(a.c, a.t) - np.cross(b.c, b.t), axis=-1)
    return float(real.max()), float(dual.max())


def ruling_dual_angles(offset: OffsetSurface, samples: int = 50):
    """Dual angle between ``e~(s)`` and ``e1~(s1(s))`` on a uniform grid."""
    s = offset.base.sample_s(samples)
    a = offset.base.frame_at(s)
    b = offset.matched_state(s)
    return dual_angle_between(a.e_tilde, b.e_tilde)


@dataclass(frozen=True)
class ArcLengthCheck:
    s: np.ndarray
    s1_measured: np.ndarray
    s1_predicted: np.ndarray
    dual_measured: np.ndarray  # int_0^{s1} Delta1
    dual_predicted: np.ndarray
    developable_criterion: np.ndarray | None  # only for developable bases

    @property
    def residuals(self) -> tuple[float, float]:
        return (float(np.max(np.abs(self.s1_measured - self.s1_predicted))),
                float(np.max(np.abs(self.dual_measured - self.dual_predicted))))


def verify_arc_length_relation(offset: OffsetSurface, s, dev_tol: float | None = None) -> ArcLengthCheck:
    """Compare measured ``s1`` and ``int Delta1`` with their integral predictions on ``[0, s]``.

    All integrals are adaptive quadratures; ``s`` may be an array of upper
    limits.
    """
    base, spec = offset.base, offset.spec
    s = np.atleast_1d(np.asarray(s, dtype=float))
    ct, st = math.cos(spec.theta), math.sin(spec.theta)
    ts = spec.theta_star
    u = base.param_of(s)
    # one quadrature pass for all base integrands
    I_gamma, I_Delta, I_gDg, I_gstar = np.moveaxis(base.integrate_param(
        lambda x: np.stack([x.gamma, x.Delta, x.gamma * x.Delta + x.gamma_dual, x.gamma_dual], -1),
        u), -1, 0)
    s1 = offset.s_of_param(u)
    I_Delta1 = np.atleast_1d(offset.integrate_param(lambda x: x.Delta, u))
    s1_pred = s * ct + I_gamma * st
    dual_pred = I_gDg * st + I_Delta * ct + ts * (I_gamma * ct - st * s)
    crit = None
    developable, _ = base.is_developable(dev_tol)
    if developable:
        crit = I_gstar * st + ts * (I_gamma * ct - st * s)
    return ArcLengthCheck(s, s1, s1_pred, I_Delta1, dual_pred, crit)


@dataclass(frozen=True)
class RelationRecord:
    relation_id: str
    s: float
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float


#: Relation ids in report order, with a one-line description.
RELATIONS = {
    "common_tangent": "central tangents coincide: t~ = t1~",
    "dual_arc_ratio": "ds1_bar/ds_bar = cos(theta_bar) + gamma_bar sin(theta_bar)",
    "arc_ratio": "ds1/ds = cos(theta) + gamma sin(theta)",
    "arc_length_integrals": "s1 and int Delta1 from integrals of gamma, Delta, gamma*",
    "developable_integral": "int Delta1 criterion for a developable base",
    "offset_distance": "theta* = (delta cos - Delta sin)/(cos + gamma sin) - delta1",
    "distribution_parameter": "Delta1 from Delta, delta, gamma, theta, theta*",
    "developable_offset_distance": "(sin - gamma cos) theta* + (cos + gamma sin) Delta1 = delta sin",
    "conical_curvature": "gamma1 = (gamma cos - sin)/(cos + gamma sin)",
    "offset_angle": "theta = arctan((gamma - gamma1)/(1 + gamma gamma1))",
    "dual_conical_curvature": "gamma_bar1 expanded in base invariants (cross-check)",
    "dual_curvature": "R_bar1 from A, B",
    "dual_radius": "cos(rho_bar1) from A, B",
    "radius_cot": "cot(rho1) = (gamma cos - sin)/(cos + gamma sin)",
}

#: Relations whose failures are reported but do not fail a report.
ADVISORY = frozenset({"dual_conical_curvature"})


@dataclass
class OffsetReport:
    spec: OffsetSpec
    records: list[RelationRecord] = field(default_factory=list)
    skipped: dict[str, str] = field(default_factory=dict)
    striction_deviation: float = 0.0
    threshold: float = REPORT_THRESHOLD

    def add(self, relation_id: str, s, lhs, rhs):
        s, lhs, rhs = np.broadcast_arrays(np.asarray(s, float), np.asarray(lhs, float),
                                          np.asarray(rhs, float))
        for si, l, r in zip(s.ravel(), lhs.ravel(), rhs.ravel()):
            err = abs(l - r)
            self.records.append(RelationRecord(relation_id, float(si), float(l), float(r),
                                               float(err), float(err / max(abs(l), abs(r), 1.0))))

    @staticmethod
    def base_id(relation_id: str) -> str:
        return relation_id.split(":")[0]

    def worst(self) -> dict[str, RelationRecord]:
        out: dict[str, RelationRecord] = {}
        for r in self.records:
            key = self.base_id(r.relation_id)
            if key not in out or r.rel_err > out[key].rel_err:
                out[key] = r
        return out

    def failures(self, threshold: float | None = None, include_advisory: bool = False) -> list[str]:
        thr = self.threshold if threshold is None else threshold
        return [k for k, r in self.worst().items()
                if not (r.rel_err < thr) and (include_advisory or k not in ADVISORY)]

    def passed(self, threshold: float | None = None) -> bool:
        return not self.failures(threshold)

    @property
    def worst_rel_err(self) -> float:
        return max((r.rel_err for r in self.records), default=0.0)

    def summary(self, threshold: float | None = None) -> str:
        thr = self.threshold if threshold is None else threshold
        worst = self.worst()
        lines = [f"offset theta = {math.degrees(self.spec.theta):.10g} deg, "
                 f"theta* = {self.spec.theta_star:.10g} ({self.spec.kind.value})"]
        for key in RELATIONS:
            if key in worst:
                r = worst[key]
                status = "pass" if r.rel_err < thr else ("WARN" if key in ADVISORY else "FAIL")
                lines.append(f"  {key:<28} {status}  max rel {r.rel_err:.3e}  max abs {r.abs_err:.3e}")
            elif key in self.skipped:
                lines.append(f"  {key:<28} skip  ({self.skipped[key]})")
        lines.append(f"  striction deviation |c1 - (c + theta* t)| max {self.striction_deviation:.3e}")
        hard = self.failures(thr)
        n = len(worst)
        if not hard:
            lines.append(f"all {n} relations pass")
        else:
            lines.append(f"{len(hard)} of {n} relations fail: {', '.join(hard)}")
        return "\n".join(lines)


def full_report(base: RuledSurface, spec: OffsetSpec, sample_count: int = 50,
                offset: OffsetSurface | None = None, threshold: float = REPORT_THRESHOLD,
                dev_tol: float | None = None) -> OffsetReport:
    """Evaluate every offset relation at ``sample_count`` base arc lengths."""
    if offset is None:
        offset = make_offset(base, spec)
    rep = OffsetReport(spec, threshold=threshold)
    s = base.sample_s(sample_count)
    st0 = base.frame_at(s)
    st1 = offset.matched_state(s)
    pred = invariant_relations(st0, spec)
    ct, sn = math.cos(spec.theta), math.sin(spec.theta)
    zero = np.zeros_like(s)

    rep.add("common_tangent:real", s, np.linalg.norm(st0.t - st1.t, axis=-1), zero)
    rep.add("common_tangent:dual", s,
            np.linalg.norm(np.cross(st0.c, st0.t) - np.cross(st1.c, st1.t), axis=-1), zero)

    ratio = arc_length_ratio(st0, spec)
    sigma1 = offset.speed_ratio(s)
    measured = DualScalar(sigma1, sigma1 * st1.Delta) / DualScalar(1.0, st0.Delta)
    rep.add("dual_arc_ratio:real", s, measured.real, ratio.real)
    rep.add("dual_arc_ratio:dual", s, measured.dual, ratio.dual)
    rep.add("arc_ratio", s, sigma1, ct + st0.gamma * sn)

    arc = verify_arc_length_relation(offset, s, dev_tol)
    rep.add("arc_length_integrals:s1", s, arc.s1_measured, arc.s1_predicted)
    rep.add("arc_length_integrals:dual", s, arc.dual_measured, arc.dual_predicted)
    developable = arc.developable_criterion is not None
    if developable:
        rep.add("developable_integral", s, arc.dual_measured, arc.developable_criterion)
    else:
        rep.skipped["developable_integral"] = "base is not developable"

    rep.add("offset_distance", s, np.full_like(s, spec.theta_star),
            (st0.delta * ct - st0.Delta * sn) / pred.ratio - st1.delta)
    rep.add("distribution_parameter", s, st1.Delta, pred.Delta1)
    if developable:
        rep.add("developable_offset_distance", s,
                (sn - st0.gamma * ct) * spec.theta_star + pred.ratio * st1.Delta, st0.delta * sn)
    else:
        rep.skipped["developable_offset_distance"] = "base is not developable"
    rep.add("conical_curvature", s, st1.gamma, pred.gamma1)
    rep.add("offset_angle", s, np.full_like(s, spec.theta),
            offset_angle_from_curvatures(st0.gamma, st1.gamma))
    rep.add("dual_conical_curvature:real", s, st1.gamma, pred.gamma_bar1_expanded.real)
    rep.add("dual_conical_curvature:dual", s, st1.gamma_dual, pred.gamma_bar1_expanded.dual)
    R1 = dual_curvature(st1.gamma_bar)
    rep.add("dual_curvature:real", s, R1.real, pred.R_bar1.real)
    rep.add("dual_curvature:dual", s, R1.dual, pred.R_bar1.dual)
    cos_rho1 = dual_cos(st1.rho_bar)
    rep.add("dual_radius:real", s, cos_rho1.real, pred.cos_rho_bar1.real)
    rep.add("dual_radius:dual", s, cos_rho1.dual, pred.cos_rho_bar1.dual)
    rep.add("radius_cot", s, np.cos(st1.rho_bar.real) / np.sin(st1.rho_bar.real), pred.cot_rho1)
    rep.striction_deviation = float(np.max(offset.striction_deviation(s)))
    return rep
