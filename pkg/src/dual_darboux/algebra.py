"""Dual numbers and truncated Taylor jets.

``DualScalar`` is the pair ``a + eps*a'`` with ``eps**2 == 0``.  ``Jet`` carries
normalized Taylor coefficients ``f^(i)(u) / i!`` up to a fixed order and is the
derivative engine for everything downstream.  Both accept numpy arrays in
place of floats, so a whole batch of evaluation points is processed at once.

An order-1 ``Jet`` performs exactly the same floating-point operations as a
``DualScalar`` for every supported operation; the test-suite checks this
bitwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, OrderMismatch, PureDualDivision

#: |real| below which division by a dual number is refused.
DIVISION_TOL = 1e-12

#: Default truncation order for jets.
DEFAULT_ORDER = 3


def _any(mask) -> bool:
    return bool(np.any(mask))


def ipow(x, n: int, one):
    """Integer power by binary exponentiation over any ring-like type."""
    if n < 0:
        raise ValueError("negative exponents are not supported")
    result = one
    base = x
    first = True
    while n:
        if n & 1:
            result = base if first else result * base
            first = False
        n >>= 1
        if n:
            base = base * base
    return result


# ---------------------------------------------------------------------------
# Dual numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualScalar:
    """Dual number ``real + eps * dual``."""

    real: float
    dual: float = 0.0

    __array_ufunc__ = None

    @staticmethod
    def coerce(x) -> "DualScalar":
        if isinstance(x, DualScalar):
            return x
        if isinstance(x, Jet):
            raise TypeError("cannot mix Jet and DualScalar")
        return DualScalar(x, 0.0 * np.asarray(x) if np.ndim(x) else 0.0)

    def __add__(self, other):
        o = DualScalar.coerce(other)
        return DualScalar(self.real + o.real, self.dual + o.dual)

    __radd__ = __add__

    def __sub__(self, other):
        o = DualScalar.coerce(other)
        return DualScalar(self.real - o.real, self.dual - o.dual)

    def __rsub__(self, other):
        return DualScalar.coerce(other) - self

    def __neg__(self):
        return DualScalar(-self.real, -self.dual)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = DualScalar.coerce(other)
        return DualScalar(self.real * o.real, self.real * o.dual + self.dual * o.real)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(DualScalar.coerce(other), self)

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("only integer powers of dual numbers are supported")
        return ipow(self, int(n), DualScalar(1.0, 0.0))

    def conjugate(self) -> "DualScalar":
        return DualScalar(self.real, -self.dual)

    def isclose(self, other, atol: float = 1e-12) -> bool:
        o = DualScalar.coerce(other)
        return bool(np.all(np.abs(self.real - o.real) <= atol) and np.all(np.abs(self.dual - o.dual) <= atol))

    def __iter__(self):
        yield self.real
        yield self.dual

    def __repr__(self) -> str:
        return f"DualScalar({self.real!r}, {self.dual!r})"

    def __str__(self) -> str:
        return f"{self.real} + ε{self.dual}"


EPS = DualScalar(0.0, 1.0)


def div(x, y, tol: float | None = None) -> DualScalar:
    """Divide dual numbers; refuses divisors whose real part is below ``tol``."""
    x = DualScalar.coerce(x)
    y = DualScalar.coerce(y)
    tol = DIVISION_TOL if tol is None else tol
    if _any(np.abs(y.real) < tol):
        raise PureDualDivision(f"divisor {y} has |real part| < {tol}")
    real = x.real / y.real
    return DualScalar(real, (x.dual - y.dual * real) / y.real)


def apply_analytic(f: Callable, fprime: Callable, x) -> DualScalar:
    """Lift a real function with known derivative: ``f(x) + eps * x' * f'(x)``."""
    x = DualScalar.coerce(x)
    return DualScalar(f(x.real), x.dual * fprime(x.real))


def dual_sin(x) -> DualScalar:
    x = DualScalar.coerce(x)
    return DualScalar(np.sin(x.real), x.dual * np.cos(x.real))


def dual_cos(x) -> DualScalar:
    x = DualScalar.coerce(x)
    return DualScalar(np.cos(x.real), -(x.dual * np.sin(x.real)))


def dual_sqrt(x) -> DualScalar:
    """Dual square root; defined only for strictly positive real part."""
    x = DualScalar.coerce(x)
    if _any(np.asarray(x.real) <= 0):
        raise DomainError(f"sqrt needs a positive real part, got {x.real}")
    r = np.sqrt(x.real)
    return DualScalar(r, x.dual / (2.0 * r))


def dual_exp(x) -> DualScalar:
    x = DualScalar.coerce(x)
    e = np.exp(x.real)
    return DualScalar(e, x.dual * e)


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------


class Jet:
    """Truncated Taylor expansion ``sum_i coeffs[i] * h**i``.

    ``coeffs`` has shape ``(order + 1, *shape)``; the trailing shape is an
    arbitrary batch (and, for vector jets, a final axis of length 3).
    Instances are treated as immutable.
    """

    __slots__ = ("coeffs",)
    __array_ufunc__ = None

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.ndim == 0 or c.shape[0] < 1:
            raise ValueError("a jet needs at least one coefficient")
        c.setflags(write=False)
        self.coeffs = c

    # -- construction ------------------------------------------------------
    @classmethod
    def variable(cls, u, order: int = DEFAULT_ORDER) -> "Jet":
        """The jet of the identity map at ``u``."""
        u = np.asarray(u, dtype=float)
        c = np.zeros((order + 1,) + u.shape)
        c[0] = u
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER) -> "Jet":
        value = np.asarray(value, dtype=float)
        c = np.zeros((order + 1,) + value.shape)
        c[0] = value
        return cls(c)

    @classmethod
    def stack(cls, jets, axis: int = -1) -> "Jet":
        """Stack jets of equal order into one vector jet (components last)."""
        orders = {j.order for j in jets}
        if len(orders) != 1:
            raise OrderMismatch(f"cannot stack jets of orders {sorted(orders)}")
        arrays = np.broadcast_arrays(*[j.coeffs for j in jets])
        ax = axis if axis < 0 else axis + 1
        return cls(np.stack(arrays, axis=ax))

    # -- accessors ---------------------------------------------------------
    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def shape(self) -> tuple:
        return self.coeffs.shape[1:]

    @property
    def value(self):
        return self.coeffs[0]

    def derivative(self, i: int = 1):
        """The ``i``-th derivative at the expansion point (not normalized)."""
        if i > self.order:
            raise OrderMismatch(f"order-{self.order} jet has no derivative {i}")
        return self.coeffs[i] * math.factorial(i)

    def __getitem__(self, idx) -> "Jet":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.coeffs[(slice(None),) + (Ellipsis,) + idx])

    def component(self, i: int) -> "Jet":
        return Jet(self.coeffs[..., i])

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise OrderMismatch(f"cannot raise order {self.order} to {order}")
        return Jet(self.coeffs[: order + 1])

    def expand(self) -> "Jet":
        """Append a length-1 axis so a scalar jet broadcasts against vectors."""
        return Jet(self.coeffs[..., None])

    # -- calculus on the series --------------------------------------------
    def deriv(self) -> "Jet":
        """Jet of ``d/du`` (order drops by one)."""
        if self.order < 1:
            raise OrderMismatch("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1).reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        return Jet(self.coeffs[1:] * k)

    def integrate(self, c0=0.0) -> "Jet":
        """Antiderivative jet with constant term ``c0`` (order rises by one)."""
        k = np.arange(1, self.order + 2).reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        c = np.zeros((self.order + 2,) + self.shape)
        c[0] = c0
        c[1:] = self.coeffs / k
        return Jet(c)

    def compose(self, inner: "Jet") -> "Jet":
        """``self(x0 + inner(t))``; the constant term of ``inner`` is ignored.

        The result has the order of ``inner``.  Extra trailing axes of ``self``
        (e.g. the component axis of a vector jet) broadcast against ``inner``.
        """
        m = inner.order
        if self.order < m:
            raise OrderMismatch(f"outer order {self.order} < inner order {m}")
        h = Jet(np.concatenate([np.zeros((1,) + inner.shape), inner.coeffs[1:]]))
        while h.coeffs.ndim < self.coeffs.ndim:
            h = h.expand()
        r = Jet.constant(self.coeffs[m], m)
        for i in range(m - 1, -1, -1):
            r = r * h + Jet.constant(self.coeffs[i], m)
        return r

    def revert(self) -> "Jet":
        """Series inverse: ``h(t)`` with ``self(x0 + h(t)) - self(x0) == t``."""
        m = self.order
        s1 = self.coeffs[1] if m >= 1 else None
        if s1 is None or _any(s1 == 0):
            raise PureDualDivision("cannot revert a series with zero linear term")
        shifted = Jet(np.concatenate([np.zeros((1,) + self.shape), self.coeffs[1:]]))
        t = Jet.variable(np.zeros(self.shape), m)
        h = t / Jet.constant(s1, m)
        for _ in range(m):
            h = h - (shifted.compose(h) - t) / Jet.constant(s1, m)
        return h

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise OrderMismatch(f"jet orders differ: {self.order} vs {other.order}")
            return other
        if isinstance(other, DualScalar):
            raise TypeError("cannot mix Jet and DualScalar")
        other = np.asarray(other, dtype=float)
        shape = np.broadcast_shapes(other.shape, self.shape)
        return Jet.constant(np.broadcast_to(other, shape), self.order)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet(self.coeffs + o.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Jet(self.coeffs - o.coeffs)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Jet(-self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Jet) and not isinstance(other, DualScalar):
            o = np.asarray(other, dtype=float)
            if o.ndim == 0:
                return Jet(self.coeffs * o)
        o = self._coerce(other)
        f, g = self.coeffs, o.coeffs
        out = []
        for i in range(self.order + 1):
            acc = f[0] * g[i]
            for j in range(1, i + 1):
                acc = acc + f[j] * g[i - j]
            out.append(acc)
        return Jet(np.stack(np.broadcast_arrays(*out)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return _jet_div(self, o)

    def __rtruediv__(self, other):
        return _jet_div(self._coerce(other), self)

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("only integer powers of jets are supported")
        return ipow(self, int(n), Jet.constant(np.ones(self.shape), self.order))

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, coeffs={self.coeffs.tolist()!r})"


def _jet_div(f: Jet, g: Jet, tol: float | None = None) -> Jet:
    tol = DIVISION_TOL if tol is None else tol
    g0 = g.coeffs[0]
    if _any(np.abs(g0) < tol):
        raise PureDualDivision("jet divisor has |value| below tolerance")
    fc, gc = np.broadcast_arrays(f.coeffs, g.coeffs)
    h = [fc[0] / g0]
    for i in range(1, f.order + 1):
        acc = gc[1] * h[i - 1]
        for j in range(2, i + 1):
            acc = acc + gc[j] * h[i - j]
        h.append((fc[i] - acc) / g0)
    return Jet(np.stack(h))


def _sincos(f: Jet):
    c = f.coeffs
    s = [np.sin(c[0])]
    co = [np.cos(c[0])]
    for i in range(1, f.order + 1):
        a = 1 * c[1] * co[i - 1]
        b = 1 * c[1] * s[i - 1]
        for j in range(2, i + 1):
            a = a + j * c[j] * co[i - j]
            b = b + j * c[j] * s[i - j]
        s.append(a / i)
        co.append(-(b / i))
    return Jet(np.stack(s)), Jet(np.stack(co))


def jet_sin(f: Jet) -> Jet:
    return _sincos(f)[0]


def jet_cos(f: Jet) -> Jet:
    return _sincos(f)[1]


def jet_exp(f: Jet) -> Jet:
    c = f.coeffs
    e = [np.exp(c[0])]
    for i in range(1, f.order + 1):
        acc = 1 * c[1] * e[i - 1]
        for j in range(2, i + 1):
            acc = acc + j * c[j] * e[i - j]
        e.append(acc / i)
    return Jet(np.stack(e))


def jet_sqrt(f: Jet) -> Jet:
    c = f.coeffs
    if _any(c[0] <= 0):
        raise DomainError("sqrt needs a positive value")
    r = [np.sqrt(c[0])]
    for i in range(1, f.order + 1):
        num = c[i]
        if i > 1:
            acc = r[1] * r[i - 1]
            for j in range(2, i):
                acc = acc + r[j] * r[i - j]
            num = num - acc
        r.append(num / (2.0 * r[0]))
    return Jet(np.stack(np.broadcast_arrays(*r)))


# ---------------------------------------------------------------------------
# Function table shared by the expression evaluator
# ---------------------------------------------------------------------------


def _sqrt_float(x):
    if _any(np.asarray(x) < 0):
        raise DomainError(f"sqrt of negative value {x}")
    return np.sqrt(x)


#: name -> (float impl, DualScalar impl, Jet impl)
FUNCTIONS = {
    "sin": (np.sin, dual_sin, jet_sin),
    "cos": (np.cos, dual_cos, jet_cos),
    "sqrt": (_sqrt_float, dual_sqrt, jet_sqrt),
    "exp": (np.exp, dual_exp, jet_exp),
}


def call(name: str, x):
    """Dispatch a named analytic function on float, DualScalar or Jet."""
    f_float, f_dual, f_jet = FUNCTIONS[name]
    if isinstance(x, Jet):
        return f_jet(x)
    if isinstance(x, DualScalar):
        return f_dual(x)
    return f_float(x)


# ---------------------------------------------------------------------------
# Vector jets (component axis last)
# ---------------------------------------------------------------------------


def jet_dot(a: Jet, b: Jet) -> Jet:
    return Jet(np.sum((a * b).coeffs, axis=-1))


def jet_cross(a: Jet, b: Jet) -> Jet:
    ax, ay, az = (a.component(i) for i in range(3))
    bx, by, bz = (b.component(i) for i in range(3))
    return Jet.stack([ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx])


def jet_det(a: Jet, b: Jet, c: Jet) -> Jet:
    return jet_dot(a, jet_cross(b, c))


def jet_scale(s: Jet, v: Jet) -> Jet:
    """Scalar jet times vector jet."""
    return s.expand() * v


def jet_normalize(v: Jet) -> Jet:
    n = jet_sqrt(jet_dot(v, v))
    return v / n.expand()
