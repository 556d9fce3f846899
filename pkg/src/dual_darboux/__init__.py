"""Dual-number kernel for ruled surfaces and their Bertrand offsets.

Lines are unit dual vectors, a ruled surface is a curve on the dual unit
sphere described by its geodesic (Darboux) frame, and a Bertrand offset
rotates that frame's ruling by a constant dual angle about the shared
central tangent.
"""

from .algebra import (
    EPS,
    DualScalar,
    Jet,
    dual_cos,
    dual_exp,
    dual_sin,
    dual_sqrt,
    jet_cross,
    jet_dot,
)
from .config import JobConfig, OffsetEntry, Tolerances, load_config, loads_config
from .curves import ArcLengthMap, ParametricCurve, StrictionCurve, arc_length_reparam, striction_curve
from .errors import *  # noqa: F401,F403
from .expr import evaluate, parse, parse_vector
from .lines import PlueckerLine, from_dual, line_from_point_direction, parse_line, to_dual
from .offset import (
    OffsetKind,
    OffsetReport,
    OffsetSpec,
    OffsetSurface,
    developable_offset_distance,
    full_report,
    invariant_relations,
    make_offset,
    offset_angle_from_curvatures,
    verify_common_perpendicular,
)
from .surface import DarbouxState, RuledSurface, darboux_vector, dual_curvature, spherical_radius
from .vector import DualAngle, DualVector3, dual_angle_between, dual_cross, dual_dot, dual_norm, normalize

__version__ = "0.1.0"
