import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dual_darboux import EPS, DualScalar, Jet, dual_cos, dual_exp, dual_sin, dual_sqrt
from dual_darboux.algebra import FUNCTIONS, call, div, jet_sin
from dual_darboux.errors import DomainError, OrderMismatch, PureDualDivision
from dual_darboux.expr import evaluate, parse

finite = st.floats(-1e3, 1e3, allow_nan=False)


def d(a, b=0.0):
    return DualScalar(a, b)


class TestDualScalar:
    def test_eps_squares_to_zero(self):
        r = EPS * EPS
        assert (r.real, r.dual) == (0.0, 0.0)

    @given(finite, finite)
    def test_multiplicative_identity(self, a, b):
        r = d(a, b) * d(1.0, 0.0)
        assert (r.real, r.dual) == (a, b)

    def test_product(self):
        r = d(2, 3) * d(5, 7)
        assert (r.real, r.dual) == (10, 29)  # 2*5 + eps(2*7 + 3*5)

    def test_quotient_inverts_product(self):
        r = d(10, 29) / d(5, 7)
        assert r.isclose(d(2, 3), atol=1e-15)

    @given(finite.filter(lambda x: abs(x) > 1e-6), finite)
    def test_self_division(self, a, b):
        r = d(a, b) / d(a, b)
        assert r.real == 1.0
        assert abs(r.dual) <= 1e-12 * (1 + abs(b / a))

    def test_pure_dual_divisor(self):
        with pytest.raises(PureDualDivision):
            d(1, 0) / d(0, 1)
        with pytest.raises(PureDualDivision):
            div(d(1), d(1e-13), tol=1e-12)

    def test_mixed_with_floats(self):
        assert (2 * d(1, 1)).dual == 2
        assert (1 - d(1, 1)).dual == -1
        assert (1 / d(2, 1)).isclose(d(0.5, -0.25))

    def test_integer_power(self):
        assert (d(2, 1) ** 3).isclose(d(8, 12))
        with pytest.raises(TypeError):
            d(2, 1) ** 0.5


def _ulps_ok(x, y, scale, n=4):
    return np.all(np.abs(x - y) <= n * np.spacing(scale))


_rng = np.random.default_rng(20240601)
_TRIPLES = [DualScalar(*_rng.uniform(-10, 10, (2, 1000))) for _ in range(3)]


class TestRingAxioms:
    """Associativity and distributivity on 1000 random triples, to 4 ulps.

    The ulp is taken at the magnitude of the largest term entering the
    expression (the same expression evaluated on absolute values), which is
    the scale at which rounding happens.
    """

    a, b, c = _TRIPLES
    absd = staticmethod(lambda x: DualScalar(np.abs(x.real), np.abs(x.dual)))

    def test_mul_associative(self):
        a, b, c = self.a, self.b, self.c
        lhs, rhs = (a * b) * c, a * (b * c)
        scale = self.absd(a) * self.absd(b) * self.absd(c)
        assert _ulps_ok(lhs.real, rhs.real, scale.real)
        assert _ulps_ok(lhs.dual, rhs.dual, scale.dual)

    def test_add_associative(self):
        a, b, c = self.a, self.b, self.c
        lhs, rhs = (a + b) + c, a + (b + c)
        scale = self.absd(a) + self.absd(b) + self.absd(c)
        assert _ulps_ok(lhs.real, rhs.real, scale.real)
        assert _ulps_ok(lhs.dual, rhs.dual, scale.dual)

    def test_distributive(self):
        a, b, c = self.a, self.b, self.c
        lhs, rhs = a * (b + c), a * b + a * c
        scale = self.absd(a) * (self.absd(b) + self.absd(c))
        assert _ulps_ok(lhs.real, rhs.real, scale.real)
        assert _ulps_ok(lhs.dual, rhs.dual, scale.dual)

    def test_commutative(self):
        for x, y in ((self.a * self.b, self.b * self.a), (self.a + self.b, self.b + self.a)):
            assert np.array_equal(x.real, y.real) and np.array_equal(x.dual, y.dual)


class TestAnalytic:
    def test_sin_at_half_pi(self):
        r = dual_sin(d(math.pi / 2, 3))
        assert r.real == 1.0 and abs(r.dual) < 1e-15

    @given(finite)
    def test_cos_at_zero(self, a):
        r = dual_cos(d(0.0, a))
        assert (r.real, r.dual) == (1.0, 0.0)

    def test_sqrt(self):
        r = dual_sqrt(d(9, 6))
        assert (r.real, r.dual) == (3.0, 1.0)
        h = 1e-7
        assert abs((math.sqrt(9 + h * 6) - 3) / h - r.dual) < 1e-6

    def test_sqrt_domain(self):
        with pytest.raises(DomainError):
            dual_sqrt(d(0.0, 1.0))
        with pytest.raises(DomainError):
            dual_sqrt(d(-1.0, 0.0))

    @pytest.mark.parametrize("name", sorted(FUNCTIONS))
    def test_dual_part_is_derivative(self, name):
        """Dual part of f(x + eps) against a centred difference, h = 1e-5."""
        rng = np.random.default_rng(7)
        xs = rng.uniform(0.2, 3.0, 50)  # inside every domain
        f = FUNCTIONS[name][0]
        h = 1e-5
        for x in xs:
            got = call(name, d(x, 1.0)).dual
            fd = (f(x + h) - f(x - h)) / (2 * h)
            assert abs(got - fd) < 1e-8 * max(1.0, abs(fd))

    def test_exp(self):
        assert dual_exp(d(0, 2)).isclose(d(1, 2))


class TestJet:
    def test_sin_at_zero(self):
        j = jet_sin(Jet.variable(0.0, 2))
        assert np.allclose(j.coeffs, [0, 1, 0], atol=0)

    def test_square_at_three(self):
        u = Jet.variable(3.0, 2)
        assert np.array_equal((u * u).coeffs, [9, 6, 1])
        assert np.array_equal((u ** 2).coeffs, [9, 6, 1])

    def test_derivative_denormalizes(self):
        u = Jet.variable(2.0, 3)
        cube = u ** 3
        assert [cube.derivative(i) for i in range(4)] == [8, 12, 12, 6]

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatch):
            Jet.variable(1.0, 2) + Jet.variable(1.0, 3)
        with pytest.raises(OrderMismatch):
            Jet.constant(1.0, 0).deriv()

    def test_division_and_sqrt(self):
        u = Jet.variable(0.7, 4)
        r = (u * u + 1.0) / (u * u + 1.0)
        assert np.allclose(r.coeffs, [1, 0, 0, 0, 0], atol=1e-15)
        q = call("sqrt", u * u)
        assert np.allclose(q.coeffs, u.coeffs, atol=1e-15)

    def test_compose_and_revert(self):
        u = Jet.variable(0.3, 5)
        f = call("sin", u) + 2.0 * u  # monotone
        h = f.revert()
        # f(x0 + h(t)) - f(x0) == t
        g = Jet(np.concatenate([[0.0], f.coeffs[1:]])).compose(h)
        assert np.allclose(g.coeffs, [0, 1, 0, 0, 0, 0], atol=1e-13)

    def test_compose_matches_chain_rule(self):
        # sin(u^2) at u = 0.8: compose the sin jet at 0.64 with the u^2 jet
        u = Jet.variable(0.8, 3)
        direct = call("sin", u * u)
        outer = call("sin", Jet.variable(0.64, 3))
        via = outer.compose(u * u)
        assert np.allclose(direct.coeffs, via.coeffs, atol=1e-15)

    @pytest.mark.parametrize("text", [
        "sin(u)*cos(2*u) + u^3",
        "exp(0.3*u)/(1 + u^2)",
        "sqrt(2 + sin(u))*-u",
        "(u - pi)^4 / 7",
    ])
    def test_order_one_jets_match_dual_numbers_bitwise(self, text):
        tree = parse(text)
        for x in (0.1, 0.9, 2.3):
            j = evaluate(tree, Jet.variable(x, 1))
            q = evaluate(tree, d(x, 1.0))
            assert float(j.coeffs[0]) == float(q.real)
            assert float(j.coeffs[1]) == float(q.dual)

    def test_finite_difference_convergence(self):
        """Jet derivatives vs centred differences shrink as O(h^2)."""
        tree = parse("sin(3*u)*exp(0.2*u) + sqrt(1 + u^2)")
        x = 0.77
        exact = evaluate(tree, Jet.variable(x, 1)).coeffs[1]
        errs = []
        for h in (1e-2, 5e-3):
            fd = (evaluate(tree, x + h) - evaluate(tree, x - h)) / (2 * h)
            errs.append(abs(fd - exact))
        ratio = errs[0] / errs[1]
        assert 3.5 < ratio < 4.5  # halving h quarters the error

    def test_batched(self):
        u = Jet.variable(np.linspace(0, 1, 7), 2)
        s = call("sin", u)
        assert s.shape == (7,)
        assert np.allclose(s.derivative(1), np.cos(np.linspace(0, 1, 7)))
        assert np.allclose(s.derivative(2), -np.sin(np.linspace(0, 1, 7)))
