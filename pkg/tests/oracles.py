"""Independent oracles used by the tests: brute-force polynomial arithmetic
over coefficient dicts, and Richardson-extrapolated finite differences.
Nothing here touches the jet engine's own arithmetic paths.
"""
from __future__ import annotations

import numpy as np


class Poly2:
    """Sparse bivariate polynomial with exact dict arithmetic."""

    def __init__(self, coeffs: dict[tuple[int, int], float] | None = None):
        self.c = dict(coeffs or {})

    @staticmethod
    def var(name: str) -> "Poly2":
        return Poly2({(1, 0) if name == "u" else (0, 1): 1.0})

    @staticmethod
    def const(x: float) -> "Poly2":
        return Poly2({(0, 0): float(x)})

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, 0.0) + v
        return Poly2(out)

    def __mul__(self, other: "Poly2") -> "Poly2":
        out: dict[tuple[int, int], float] = {}
        for (i, j), a in self.c.items():
            for (p, q), b in other.c.items():
                key = (i + p, j + q)
                out[key] = out.get(key, 0.0) + a * b
        return Poly2(out)

    def scale(self, s: float) -> "Poly2":
        return Poly2({k: v * s for k, v in self.c.items()})

    def compose(self, su: "Poly2", sv: "Poly2") -> "Poly2":
        """Substitute u -> su, v -> sv by brute-force expansion."""
        result = Poly2()
        for (i, j), a in self.c.items():
            term = Poly2.const(a)
            for _ in range(i):
                term = term * su
            for _ in range(j):
                term = term * sv
            result = result + term
        return result

    def taylor_at(self, u0: float, v0: float, order: int) -> np.ndarray:
        """Exact Taylor coefficients about (u0, v0), shape (order+1, order+1)."""
        # shift: substitute u -> u0 + s, v -> v0 + t
        shifted = self.compose(
            Poly2({(0, 0): u0, (1, 0): 1.0}), Poly2({(0, 0): v0, (0, 1): 1.0})
        )
        out = np.zeros((order + 1, order + 1))
        for (i, j), a in shifted.c.items():
            if i <= order and j <= order and i + j <= order:
                out[i, j] = a
        return out

    def eval(self, u: float, v: float) -> float:
        return sum(a * u**i * v**j for (i, j), a in self.c.items())


def random_poly(rng, max_degree=3, int_coeffs=True) -> Poly2:
    c = {}
    for i in range(max_degree + 1):
        for j in range(max_degree + 1 - i):
            value = rng.randint(-5, 5) if int_coeffs else rng.uniform(-2.0, 2.0)
            if value:
                c[(i, j)] = float(value)
    return Poly2(c)


def fd1(g, x, h):
    return (g(x - 2 * h) - 8 * g(x - h) + 8 * g(x + h) - g(x + 2 * h)) / (12 * h)


def fd_partial(f, u0, v0, i, j, h):
    if i > 0:
        return fd1(lambda x: fd_partial(f, x, v0, i - 1, j, h), u0, h)
    if j > 0:
        return fd1(lambda y: fd_partial(f, u0, y, i, j - 1, h), v0, h)
    return f(u0, v0)


def richardson_partial(f, u0, v0, i, j, h=1e-2):
    d_h = fd_partial(f, u0, v0, i, j, h)
    d_h2 = fd_partial(f, u0, v0, i, j, h / 2)
    return (16 * d_h2 - d_h) / 15


def fit_slope(xs, ys):
    """Least-squares line slope (dense-sampling derivative oracle)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    return float(np.polyfit(xs, ys, 1)[0])
