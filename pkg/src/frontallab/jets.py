"""Truncated bivariate Taylor jets: the exact derivative engine.

A ``Jet2`` holds every Taylor coefficient ``c[i][j] = d^{i+j}g/du^i dv^j / (i! j!)``
of a scalar quantity at a base point, for ``i + j <= order``.  Sums, products,
quotients and the analytic functions propagate the coefficients exactly (to
rounding), so any quantity assembled from jets carries machine-accurate
partial derivatives of itself -- no symbolic differentiation, no step-size
tuning.

Coefficient arrays may carry leading batch dimensions (shape ``(*B, K+1, K+1)``)
and all operations broadcast over them, which is what makes grid sweeps cheap.

Division and square root use direct series recurrences rather than exp/log
routing so that accuracy survives small constant terms.
"""
from __future__ import annotations

import math

import numpy as np

from .config import DEFAULT_TOL
from .errors import EvalDomainError, JetOrderError, DeflationError

_MAX_ORDER = 24

_BINOM = np.zeros((_MAX_ORDER + 2, _MAX_ORDER + 2))
for _n in range(_MAX_ORDER + 2):
    for _k in range(_n + 1):
        _BINOM[_n, _k] = math.comb(_n, _k)

_FACT = np.array([math.factorial(n) for n in range(_MAX_ORDER + 2)], dtype=float)


def _as_base(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


class Jet2:
    """Truncated Taylor expansion of a scalar function of (u, v)."""

    __slots__ = ("u0", "v0", "order", "c")

    # keep numpy from broadcasting over jets; defer to the reflected operators
    __array_ufunc__ = None

    def __init__(self, u0, v0, order: int, c):
        if order < 0 or order > _MAX_ORDER:
            raise ValueError(f"jet order must be in [0, {_MAX_ORDER}], got {order}")
        c = np.asarray(c, dtype=float)
        if c.shape[-2:] != (order + 1, order + 1):
            raise ValueError(f"coefficient array shape {c.shape} does not match order {order}")
        self.u0 = _as_base(u0)
        self.v0 = _as_base(v0)
        self.order = order
        self.c = c

    # -- construction -------------------------------------------------------

    @staticmethod
    def constant(value, base, order: int) -> "Jet2":
        u0, v0 = _as_base(base[0]), _as_base(base[1])
        value = np.asarray(value, dtype=float)
        batch = np.broadcast_shapes(value.shape, u0.shape, v0.shape)
        c = np.zeros(batch + (order + 1, order + 1))
        c[..., 0, 0] = value
        return Jet2(u0, v0, order, c)

    def constant_like(self, value) -> "Jet2":
        return Jet2.constant(value, (self.u0, self.v0), self.order)

    @property
    def value(self) -> np.ndarray:
        return self.c[..., 0, 0]

    @property
    def batch_shape(self):
        return self.c.shape[:-2]

    def copy(self) -> "Jet2":
        return Jet2(self.u0, self.v0, self.order, self.c.copy())

    def truncated(self, order: int) -> "Jet2":
        if order > self.order:
            raise JetOrderError(f"cannot raise jet order {self.order} to {order}")
        if order == self.order:
            return self
        return Jet2(self.u0, self.v0, order, self.c[..., : order + 1, : order + 1])

    # -- extraction ---------------------------------------------------------

    def partial(self, i: int, j: int) -> np.ndarray:
        """d^{i+j}/du^i dv^j at the base point (coefficient times i! j!)."""
        if i < 0 or j < 0 or i + j > self.order:
            raise JetOrderError(
                f"partial ({i},{j}) exceeds jet order {self.order}"
            )
        return self.c[..., i, j] * (_FACT[i] * _FACT[j])

    def d_du(self) -> "Jet2":
        """Jet of the u-derivative (order drops by one)."""
        if self.order == 0:
            raise JetOrderError("cannot differentiate an order-0 jet")
        k = self.order
        mult = np.arange(1, k + 1, dtype=float)[:, None]
        c = self.c[..., 1:, :k] * mult
        return Jet2(self.u0, self.v0, k - 1, c)

    def d_dv(self) -> "Jet2":
        if self.order == 0:
            raise JetOrderError("cannot differentiate an order-0 jet")
        k = self.order
        mult = np.arange(1, k + 1, dtype=float)[None, :]
        c = self.c[..., :k, 1:] * mult
        return Jet2(self.u0, self.v0, k - 1, c)

    # -- scale / guards -----------------------------------------------------

    def scale(self) -> np.ndarray:
        """max(1, largest |coefficient|) per batch element."""
        return np.maximum(1.0, np.abs(self.c).max(axis=(-2, -1)))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return other
        return self.constant_like(other)

    def _aligned(self, other: "Jet2"):
        k = min(self.order, other.order)
        return self.truncated(k), other.truncated(k)

    def __add__(self, other):
        a, b = self._aligned(self._coerce(other))
        return Jet2(a.u0, a.v0, a.order, a.c + b.c)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._aligned(self._coerce(other))
        return Jet2(a.u0, a.v0, a.order, a.c - b.c)

    def __rsub__(self, other):
        a, b = self._aligned(self._coerce(other))
        return Jet2(a.u0, a.v0, a.order, b.c - a.c)

    def __neg__(self):
        return Jet2(self.u0, self.v0, self.order, -self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            # scalar (or array) factor: scales every coefficient
            f = np.asarray(other, dtype=float)
            return Jet2(self.u0, self.v0, self.order, self.c * f[..., None, None])
        a, b = self._aligned(other)
        k = a.order
        batch = np.broadcast_shapes(a.batch_shape, b.batch_shape)
        out = np.zeros(batch + (k + 1, k + 1))
        for i in range(k + 1):
            for j in range(k + 1 - i):
                # truncated Cauchy product: sum_{p<=i, q<=j} a[p,q] b[i-p,j-q]
                out[..., i, j] = np.einsum(
                    "...pq,...pq->...",
                    np.broadcast_to(a.c[..., : i + 1, : j + 1], batch + (i + 1, j + 1)),
                    np.broadcast_to(b.c[..., i::-1, j::-1], batch + (i + 1, j + 1)),
                )
        return Jet2(a.u0, a.v0, k, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            return self * (1.0 / np.asarray(other, dtype=float))
        a, b = self._aligned(other)
        _check_nonzero_const(b, "division by (numerically) zero constant term")
        k = a.order
        batch = np.broadcast_shapes(a.batch_shape, b.batch_shape)
        q = np.zeros(batch + (k + 1, k + 1))
        b00 = b.c[..., 0, 0]
        bc = np.broadcast_to(b.c, batch + (k + 1, k + 1))
        for d in range(k + 1):
            for i in range(d + 1):
                j = d - i
                conv = np.einsum(
                    "...pq,...pq->...",
                    q[..., : i + 1, : j + 1],
                    bc[..., i::-1, j::-1],
                )
                # conv includes q[i,j]*b00 with q[i,j] still 0, so no correction
                q[..., i, j] = (np.broadcast_to(a.c[..., i, j], batch) - conv) / b00
        return Jet2(a.u0, a.v0, k, q)

    def __rtruediv__(self, other):
        return self.constant_like(other) / self

    def __pow__(self, n: int):
        return int_pow(self, n)

    # -- analytic functions -------------------------------------------------

    def sqrt(self) -> "Jet2":
        _check_positive_const(self, "sqrt")
        k = self.order
        batch = self.batch_shape
        s = np.zeros(batch + (k + 1, k + 1))
        s00 = np.sqrt(self.c[..., 0, 0])
        s[..., 0, 0] = s00
        for d in range(1, k + 1):
            for i in range(d + 1):
                j = d - i
                conv = np.einsum(
                    "...pq,...pq->...",
                    s[..., : i + 1, : j + 1],
                    s[..., i::-1, j::-1],
                )
                # conv counts s[i,j]*s00 twice but s[i,j] is still 0
                s[..., i, j] = (self.c[..., i, j] - conv) / (2.0 * s00)
        return Jet2(self.u0, self.v0, k, s)

    def exp(self) -> "Jet2":
        return _compose_univariate(self, _series_exp)

    def log(self) -> "Jet2":
        _check_positive_const(self, "log")
        return _compose_univariate(self, _series_log)

    def sin(self) -> "Jet2":
        return _compose_univariate(self, lambda x0, k: _series_trig(x0, k)[0])

    def cos(self) -> "Jet2":
        return _compose_univariate(self, lambda x0, k: _series_trig(x0, k)[1])

    def tan(self) -> "Jet2":
        return _compose_univariate(self, _series_tan)

    def sinh(self) -> "Jet2":
        return _compose_univariate(self, lambda x0, k: _series_hyp(x0, k)[0])

    def cosh(self) -> "Jet2":
        return _compose_univariate(self, lambda x0, k: _series_hyp(x0, k)[1])

    def tanh(self) -> "Jet2":
        return _compose_univariate(self, _series_tanh)

    def atan(self) -> "Jet2":
        return _compose_univariate(self, _series_atan)

    # -- base manipulation --------------------------------------------------

    def recenter_v(self, dv) -> "Jet2":
        """Re-expand the truncated polynomial about (u0, v0 + dv).

        Exact on polynomials of degree <= order; for general functions the
        discarded tail contributes O(dv^(order+1-d)) to a degree-d
        coefficient, so keep |dv| small (deflation-window scale).
        """
        dv = _as_base(dv)
        k = self.order
        batch = np.broadcast_shapes(self.batch_shape, dv.shape)
        out = np.zeros(batch + (k + 1, k + 1))
        powers = [np.ones(dv.shape)]
        for _ in range(k):
            powers.append(powers[-1] * dv)
        for j in range(k + 1):
            col = np.zeros(batch + (k + 1,))
            for m in range(j, k + 1):
                col += (_BINOM[m, j] * powers[m - j])[..., None] * np.broadcast_to(
                    self.c[..., :, m], batch + (k + 1,)
                )
            out[..., :, j] = col
        return Jet2(self.u0, self.v0 + dv, k, out)


# ---------------------------------------------------------------------------
# module-level operations


def lift(var: str, base, order: int) -> Jet2:
    """Jet of a coordinate function: value at base, unit linear term."""
    u0, v0 = _as_base(base[0]), _as_base(base[1])
    batch = np.broadcast_shapes(u0.shape, v0.shape)
    c = np.zeros(batch + (order + 1, order + 1))
    if var == "u":
        c[..., 0, 0] = u0
        if order >= 1:
            c[..., 1, 0] = 1.0
    elif var == "v":
        c[..., 0, 0] = v0
        if order >= 1:
            c[..., 0, 1] = 1.0
    else:
        raise ValueError(f"lift variable must be 'u' or 'v', got {var!r}")
    return Jet2(u0, v0, order, c)


def int_pow(a: Jet2, n: int):
    """a**n by repeated multiplication (valid for negative constant terms)."""
    if not isinstance(n, int):
        raise TypeError("int_pow exponent must be an int")
    if n == 0:
        return a.constant_like(1.0)
    invert = n < 0
    n = abs(n)
    result = None
    square = a
    while n:
        if n & 1:
            result = square if result is None else result * square
        n >>= 1
        if n:
            square = square * square
    if invert:
        return a.constant_like(1.0) / result
    return result


_ANALYTIC = {
    "sin": Jet2.sin,
    "cos": Jet2.cos,
    "tan": Jet2.tan,
    "sinh": Jet2.sinh,
    "cosh": Jet2.cosh,
    "tanh": Jet2.tanh,
    "exp": Jet2.exp,
    "log": Jet2.log,
    "sqrt": Jet2.sqrt,
    "atan": Jet2.atan,
}


def apply_analytic(fn: str, a: Jet2) -> Jet2:
    try:
        method = _ANALYTIC[fn]
    except KeyError:
        raise ValueError(f"unknown analytic function {fn!r}") from None
    return method(a)


def deflate_v(a: Jet2, k: int = 1, tol: float | None = None) -> Jet2:
    """Jet of a / v**k at a base on the axis (v0 = 0).

    Requires every coefficient with v-degree < k to vanish (to tol*scale);
    otherwise the function is not divisible by v**k and a DeflationError
    reports the worst offender.  The result has order reduced by k.
    """
    if k < 1:
        raise ValueError("deflation exponent must be >= 1")
    if a.order < k:
        raise JetOrderError(f"cannot deflate order-{a.order} jet by v**{k}")
    if np.any(a.v0 != 0.0):
        raise ValueError("deflate_v requires a base point on the axis (v0 = 0)")
    tol = DEFAULT_TOL.zero_rel if tol is None else tol
    low = np.abs(a.c[..., :, :k])
    worst = low.max() if low.size else 0.0
    bound = tol * a.scale()
    if np.any(low.max(axis=(-2, -1)) > bound):
        raise DeflationError(
            f"not divisible by v**{k}: largest low-order coefficient "
            f"{worst:.3e} exceeds {float(np.max(bound)):.3e}"
        )
    new_order = a.order - k
    c = a.c[..., : new_order + 1, k : k + new_order + 1]
    return Jet2(a.u0, a.v0, new_order, c)


def compose(a: Jet2, subs_u: Jet2, subs_v: Jet2) -> Jet2:
    """Jet of a(subs_u, subs_v) at the substitutions' base point.

    The substitutions must share a base/order and their constant terms must
    equal a's base point (so that the composition is expanded where a's
    coefficients are valid).
    """
    su, sv = subs_u._aligned(subs_v)
    scale = np.maximum(1.0, np.maximum(np.abs(a.u0), np.abs(a.v0)))
    if np.any(np.abs(su.value - a.u0) > 1e-9 * scale) or np.any(
        np.abs(sv.value - a.v0) > 1e-9 * scale
    ):
        raise ValueError("compose: substitution constant terms must equal the jet's base point")
    k = min(a.order, su.order)
    du = su.truncated(k) - su.value
    dv = sv.truncated(k) - sv.value
    # Horner in du of (polynomials in dv)
    dv_pows = [du.constant_like(1.0)]
    for _ in range(k):
        dv_pows.append(dv_pows[-1] * dv)
    result = None
    for i in range(k, -1, -1):
        inner = None
        for j in range(k - i, -1, -1):
            coeff = a.c[..., i, j]
            inner = dv_pows[0] * coeff if inner is None else inner * dv + coeff
        # inner is sum_j a[i,j] dv^j evaluated by Horner
        result = inner if result is None else result * du + inner
    return result.truncated(k)


# ---------------------------------------------------------------------------
# univariate series helpers (coefficients of f(x0 + t) in t, exact recurrences)


def _compose_univariate(a: Jet2, series) -> Jet2:
    k = a.order
    coeffs = series(a.c[..., 0, 0], k)
    bar = a.copy()
    bar.c[..., 0, 0] = 0.0
    result = a.constant_like(coeffs[k])
    for n in range(k - 1, -1, -1):
        result = result * bar + coeffs[n]
    return result


def _series_exp(x0, k):
    c = [np.exp(x0)]
    for n in range(1, k + 1):
        c.append(c[-1] / n)
    return c


def _series_log(x0, k):
    c = [np.log(x0)]
    if k >= 1:
        inv = 1.0 / x0
        c.append(inv)
        for n in range(2, k + 1):
            c.append(-c[-1] * inv * (n - 1) / n)
    return c


def _series_trig(x0, k):
    s = [np.sin(x0)]
    c = [np.cos(x0)]
    for n in range(1, k + 1):
        s.append(c[-1] / n)
        c.append(-s[-2] / n)
    return s, c


def _series_hyp(x0, k):
    s = [np.sinh(x0)]
    c = [np.cosh(x0)]
    for n in range(1, k + 1):
        s.append(c[-1] / n)
        c.append(s[-2] / n)
    return s, c


def _series_tan(x0, k):
    # t' = 1 + t^2, coefficient recurrence on the Taylor coefficients
    t = [np.tan(x0)]
    for n in range(k):
        conv = sum(t[i] * t[n - i] for i in range(n + 1))
        rhs = conv + (1.0 if n == 0 else 0.0)
        t.append(rhs / (n + 1))
    return t


def _series_tanh(x0, k):
    # t' = 1 - t^2
    t = [np.tanh(x0)]
    for n in range(k):
        conv = sum(t[i] * t[n - i] for i in range(n + 1))
        rhs = (1.0 if n == 0 else 0.0) - conv
        t.append(rhs / (n + 1))
    return t


def _series_atan(x0, k):
    # a' = 1/(1 + x^2); invert the quadratic 1 + (x0+t)^2 as a series, integrate
    a = [np.arctan(x0)]
    if k >= 1:
        p0 = 1.0 + x0 * x0
        p1 = 2.0 * x0
        g = [1.0 / p0]
        for n in range(1, k):
            term = p1 * g[n - 1]
            if n >= 2:
                term = term + g[n - 2]
            g.append(-term / p0)
        for n in range(1, k + 1):
            a.append(g[n - 1] / n)
    return a


def _check_nonzero_const(b: Jet2, message: str):
    b00 = np.abs(b.c[..., 0, 0])
    if np.any(b00 <= DEFAULT_TOL.zero_rel):
        raise EvalDomainError(f"{message}: |constant term| = {float(np.min(b00)):.3e}")


def _check_positive_const(a: Jet2, what: str):
    a00 = a.c[..., 0, 0]
    if np.any(a00 <= DEFAULT_TOL.zero_rel):
        raise EvalDomainError(f"{what} of non-positive constant term {float(np.min(a00)):.3e}")


# ---------------------------------------------------------------------------
# 3-vectors of jets


class JetVec3:
    """Three jets sharing a base and order: an R^3-valued map's jet."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x: Jet2, y: Jet2, z: Jet2):
        order = min(x.order, y.order, z.order)
        self.x = x.truncated(order)
        self.y = y.truncated(order)
        self.z = z.truncated(order)

    @property
    def order(self) -> int:
        return self.x.order

    @property
    def comps(self):
        return (self.x, self.y, self.z)

    @property
    def value(self) -> np.ndarray:
        return np.stack([self.x.value, self.y.value, self.z.value], axis=-1)

    def partial(self, i: int, j: int) -> np.ndarray:
        return np.stack([c.partial(i, j) for c in self.comps], axis=-1)

    def map(self, fn) -> "JetVec3":
        return JetVec3(fn(self.x), fn(self.y), fn(self.z))

    def d_du(self) -> "JetVec3":
        return self.map(Jet2.d_du)

    def d_dv(self) -> "JetVec3":
        return self.map(Jet2.d_dv)

    def deflate_v(self, k: int = 1, tol: float | None = None) -> "JetVec3":
        return self.map(lambda c: deflate_v(c, k, tol))

    def recenter_v(self, dv) -> "JetVec3":
        return self.map(lambda c: c.recenter_v(dv))

    def truncated(self, order: int) -> "JetVec3":
        return self.map(lambda c: c.truncated(order))

    def __add__(self, other: "JetVec3") -> "JetVec3":
        return JetVec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "JetVec3") -> "JetVec3":
        return JetVec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "JetVec3":
        return self.map(Jet2.__neg__)

    def scaled(self, s) -> "JetVec3":
        """Componentwise product with a scalar jet or number."""
        return JetVec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "JetVec3") -> Jet2:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "JetVec3") -> "JetVec3":
        return JetVec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> Jet2:
        return self.dot(self).sqrt()

    def normalized(self) -> "JetVec3":
        n = self.norm()
        return JetVec3(self.x / n, self.y / n, self.z / n)


def det3(a: JetVec3, b: JetVec3, c: JetVec3) -> Jet2:
    return a.cross(b).dot(c)
