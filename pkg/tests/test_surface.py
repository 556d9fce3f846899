import math

import numpy as np
import pytest

from dual_darboux import (
    DualScalar,
    DualVector3,
    RuledSurface,
    darboux_vector,
    dual_angle_between,
    dual_cos,
    dual_curvature,
    dual_dot,
    dual_norm,
    dual_sin,
    spherical_radius,
)
from dual_darboux.errors import CylindricalDirector
from dual_darboux.surface import dual_arc_length, frame_at, is_developable, sample_mesh

import oracle
import surfaces

H = 1e-5


def grid(name, n=200, margin=1e-4):
    surf = surfaces.surface(name)
    return surf, np.linspace(margin, surf.length - margin, n)


def fd(surf, s, attr):
    return (getattr(surf.frame_at(s + H), attr) - getattr(surf.frame_at(s - H), attr)) / (2 * H)


class TestExactFixtures:
    def test_helicoid(self):
        surf, s = grid("helicoid")
        st = surf.frame_at(s)
        # det((0,0,.5), (cos,sin,0), (-sin,cos,0)) = 0.5 with c' = (0,0,0.5)
        assert np.max(np.abs(st.gamma)) < 1e-10
        assert np.max(np.abs(st.delta)) < 1e-10
        assert np.max(np.abs(st.Delta - 0.5)) < 1e-10
        assert np.allclose(st.g, [0, 0, 1], atol=1e-12)

    def test_cone(self):
        surf, s = grid("cone")
        st = surf.frame_at(s)
        # geodesic curvature cot(alpha) = 1 of the small circle; c' = 0
        assert np.max(np.abs(st.gamma - 1)) < 1e-10
        assert np.max(np.abs(st.delta)) < 1e-12
        assert np.max(np.abs(st.Delta)) < 1e-12
        assert surf.length == pytest.approx(2 * math.pi * math.sin(math.pi / 4), abs=1e-12)

    def test_tangent_developable(self):
        surf, s = grid("tangent")
        st = surf.frame_at(s)
        # e = unit tangent of a helix of curvature 0.8 and torsion 0.4
        assert np.max(np.abs(st.gamma - 0.5)) < 1e-10
        assert np.max(np.abs(st.delta - 1.25)) < 1e-10
        assert np.max(np.abs(st.Delta)) < 1e-10

    @pytest.mark.parametrize("u", [0.35, 1.4, 2.75])
    def test_random_against_oracle(self, u):
        f = surfaces.FIXTURES["random"]
        surf = surfaces.surface("random")
        ref = oracle.invariants(f.p, f.e, u)
        s = oracle.arc_length(f.e, 0.0, u)
        st = surf.frame_at(s)
        for key in ("gamma", "delta", "Delta"):
            assert getattr(st, key) == pytest.approx(ref[key], abs=1e-7 * max(1, abs(ref[key])))
        for key in ("c", "e", "t", "g"):
            assert np.max(np.abs(getattr(st, key) - ref[key])) < 1e-8


@pytest.mark.parametrize("name", surfaces.NAMES)
class TestFrame:
    def test_orthonormal(self, name):
        surf, s = grid(name)
        st = surf.frame_at(s)
        dot = lambda a, b: np.sum(a * b, axis=-1)
        res = max(np.max(np.abs(x)) for x in (
            dot(st.e, st.t), dot(st.e, st.g), dot(st.t, st.g),
            dot(st.e, st.e) - 1, dot(st.t, st.t) - 1, dot(st.g, st.g) - 1))
        assert res < 1e-9

    def test_base_curve_derivative(self, name):
        surf, s = grid(name)
        st = surf.frame_at(s)
        r = st.dc - st.delta[:, None] * st.e - st.Delta[:, None] * st.g
        assert np.max(np.linalg.norm(r, axis=-1)) < 1e-8
        assert np.max(np.abs(np.sum(st.dc * st.t, axis=-1))) < 1e-9  # striction

    def test_frame_ode(self, name):
        surf, s = grid(name)
        st = surf.frame_at(s)
        k = st.gamma[:, None]
        res = [fd(surf, s, "e") - st.t,
               fd(surf, s, "t") - (k * st.g - st.e),
               fd(surf, s, "g") + k * st.t]
        assert max(np.max(np.linalg.norm(r, axis=-1)) for r in res) < 1e-7

    def test_dual_frame_ode(self, name):
        """d/ds_bar of the lifted frame, with ds_bar/ds = 1 + eps Delta."""
        surf, s = grid(name, 60)
        st = surf.frame_at(s)
        speed = DualScalar(np.ones_like(s), st.Delta)

        def d_ds_bar(attr):
            lift = lambda x: getattr(surf.frame_at(x), attr)
            a, b = lift(s + H), lift(s - H)
            v = DualVector3((a.real - b.real) / (2 * H), (a.dual - b.dual) / (2 * H))
            return v / speed

        gb = st.gamma_bar
        res = [d_ds_bar("e_tilde") - st.t_tilde,
               d_ds_bar("t_tilde") - (st.g_tilde * gb - st.e_tilde),
               d_ds_bar("g_tilde") + st.t_tilde * gb]
        worst = max(max(np.max(np.abs(r.real)), np.max(np.abs(r.dual))) for r in res)
        assert worst < 1e-7

    def test_dual_speed(self, name):
        surf, s = grid(name, 50)
        st = surf.frame_at(s)
        sp = surf.dual_curve_speed(s)
        assert np.max(np.abs(sp.real - 1)) < 1e-8
        assert np.max(np.abs(sp.dual - st.Delta)) < 1e-8

    def test_dual_curve_is_unit(self, name):
        surf, s = grid(name, 30)
        n = dual_norm(surf.dual_curve_at(s))
        assert np.max(np.abs(n.real - 1)) < 1e-14 and np.max(np.abs(n.dual)) < 1e-12

    def test_spherical_radius(self, name):
        surf, s = grid(name, 50)
        st = surf.frame_at(s)
        R, rho = st.R_bar, st.rho_bar
        sin_r, cos_r = dual_sin(rho), dual_cos(rho)
        gR = st.gamma_bar * R
        for a, b in ((sin_r, R), (cos_r, gR)):
            assert np.max(np.abs(a.real - b.real)) < 1e-10
            assert np.max(np.abs(a.dual - b.dual)) < 1e-10

    def test_darboux_vector(self, name):
        surf, s = grid(name, 50)
        st = surf.frame_at(s)
        d0 = darboux_vector(st, unit=True)
        n = dual_dot(d0, d0)
        assert np.max(np.abs(n.real - 1)) < 1e-12 and np.max(np.abs(n.dual)) < 1e-12
        ang = dual_angle_between(d0, st.e_tilde)
        assert np.max(np.abs(ang.theta - st.rho_bar.real)) < 1e-8
        assert np.max(np.abs(ang.theta_star - st.rho_bar.dual)) < 1e-8


class TestDualQuantities:
    def test_great_circle(self):
        R = dual_curvature(DualScalar(0.0, 0.0))
        rho = spherical_radius(DualScalar(0.0, 0.0))
        assert (R.real, R.dual) == (1.0, 0.0)
        assert rho.real == pytest.approx(math.pi / 2, abs=0) and rho.dual == 0.0

    def test_cone_curvature(self):
        R = dual_curvature(DualScalar(1.0, 0.0))
        assert R.real == pytest.approx(1 / math.sqrt(2), abs=1e-16) and R.dual == 0.0

    def test_helicoid_darboux_vector_is_binormal(self):
        st = surfaces.surface("helicoid").frame_at(np.array([0.4, 2.0]))
        d = darboux_vector(st)
        assert np.allclose(d.real, st.g_tilde.real, atol=1e-15)
        assert np.allclose(d.dual, st.g_tilde.dual, atol=1e-15)

    def test_helicoid_ruling_at_zero(self):
        r = surfaces.surface("helicoid").dual_curve_at(0.0)
        assert np.allclose(r.real, [1, 0, 0], atol=1e-15)
        assert np.allclose(r.dual, [0, 0, 0], atol=1e-15)

    def test_dual_arc_length(self):
        hel = surfaces.surface("helicoid")
        r = dual_arc_length(hel, 2.0)
        assert r.real == 2.0 and r.dual == pytest.approx(1.0, abs=1e-10)
        z = hel.dual_arc_length(0.0)
        assert (z.real, z.dual) == (0.0, 0.0)
        for name in ("cone", "tangent"):
            surf = surfaces.surface(name)
            r = surf.dual_arc_length(np.array([0.5, 1.0, surf.length]))
            assert np.max(np.abs(r.dual)) < 1e-10

    def test_developability(self):
        flag, worst = is_developable(surfaces.surface("cone"))
        assert flag and worst < 1e-10
        flag, worst = is_developable(surfaces.surface("helicoid"))
        assert not flag and worst == pytest.approx(0.5, abs=1e-10)
        assert is_developable(surfaces.surface("tangent"))[0]
        assert not is_developable(surfaces.surface("random"))[0]

    def test_frame_alias(self):
        surf = surfaces.surface("cone")
        assert frame_at(surf, 1.0).gamma == surf.frame_at(1.0).gamma

    def test_scalar_state_indexing(self):
        st = surfaces.surface("random").frame_at(np.array([0.1, 0.5, 0.9]))
        one = st[1]
        assert one.gamma == st.gamma[1]
        assert one.R_bar.dual == st.R_bar.dual[1]

    def test_cylinder_rejected(self):
        with pytest.raises(CylindricalDirector):
            RuledSurface.from_expressions("[cos(u), sin(u), 0]", "[0, 0, 1]", (0, 1))


class TestMesh:
    def test_shape_and_rows(self):
        surf = surfaces.surface("random")
        pts = sample_mesh(surf, 20, (-1.0, 2.0), 7)
        assert pts.shape == (20, 7, 3)
        st = surf.frame_at(surf.sample_s(20))
        pts0 = surf.sample_mesh(20, (-1.0, 1.0), 3)  # middle column is v = 0
        assert np.allclose(pts0[:, 1], st.c, atol=1e-15)

    def test_helicoid_corner(self):
        pts = surfaces.surface("helicoid").sample_mesh(5, (0.0, 1.0), 2)
        assert np.allclose(pts[0, 1], [1, 0, 0], atol=1e-15)

    def test_spacing_along_ruling(self):
        pts = surfaces.surface("tangent").sample_mesh(9, (-2.0, 2.0), 5)
        gaps = np.linalg.norm(np.diff(pts, axis=1), axis=-1)
        assert np.allclose(gaps, 1.0, atol=1e-14)

    def test_too_small(self):
        with pytest.raises(ValueError):
            surfaces.surface("cone").sample_mesh(1, (0, 1), 3)
