import random

import numpy as np
import pytest

from frontallab.errors import DeflationError, EvalDomainError, JetOrderError
from frontallab.expr import eval_expression, parse_expression
from frontallab.jets import Jet2, JetVec3, compose, deflate_v, int_pow, lift

from oracles import Poly2, random_poly, richardson_partial


def poly_jet(p: Poly2, u0: float, v0: float, order: int) -> Jet2:
    """Evaluate a coefficient-dict polynomial with jet arithmetic."""
    u = lift("u", (u0, v0), order)
    v = lift("v", (u0, v0), order)
    acc = u.constant_like(0.0)
    for (i, j), a in p.c.items():
        term = u.constant_like(a)
        if i:
            term = term * int_pow(u, i)
        if j:
            term = term * int_pow(v, j)
        acc = acc + term
    return acc


def test_lift_examples():
    j = lift("u", (1.0, 2.0), 3)
    assert j.c[0, 0] == 1.0 and j.c[1, 0] == 1.0
    assert np.abs(j.c).sum() == 2.0
    j = lift("v", (0.0, 0.0), 2)
    assert j.c[0, 0] == 0.0 and j.c[0, 1] == 1.0
    j = lift("u", (0.0, 0.0), 0)
    assert j.c.shape == (1, 1) and j.c[0, 0] == 0.0


def test_mul_example_uv():
    m = lift("u", (1.0, 2.0), 2) * lift("v", (1.0, 2.0), 2)
    assert m.c[0, 0] == 2.0 and m.c[1, 0] == 2.0 and m.c[0, 1] == 1.0 and m.c[1, 1] == 1.0
    others = m.c.copy()
    others[[0, 1, 0, 1], [0, 0, 1, 1]] = 0.0
    assert np.abs(others).max() == 0.0


def test_div_exact_cancellation():
    u = lift("u", (3.0, 0.0), 3)
    q = (u * u) / u
    assert q.c[0, 0] == 3.0 and q.c[1, 0] == 1.0
    assert abs(q.c[2, 0]) == 0.0 and abs(q.c[3, 0]) == 0.0


def test_div_by_zero_constant_term():
    v = lift("v", (0.0, 0.0), 3)
    with pytest.raises(EvalDomainError, match="zero constant term"):
        (v * v) / v


def test_mul_matches_convolution_oracle():
    rng = random.Random(7)
    for _ in range(25):
        a, b = random_poly(rng), random_poly(rng)
        order = 6
        got = poly_jet(a, 0.4, -0.3, order) * poly_jet(b, 0.4, -0.3, order)
        want = (a * b).taylor_at(0.4, -0.3, order)
        assert np.allclose(got.c, want, rtol=0, atol=1e-11 * max(1, np.abs(want).max()))


def test_ring_axioms_exact_on_integer_polynomials():
    rng = random.Random(3)
    for _ in range(10):
        a = poly_jet(random_poly(rng), 1.0, -1.0, 6)
        b = poly_jet(random_poly(rng), 1.0, -1.0, 6)
        c = poly_jet(random_poly(rng), 1.0, -1.0, 6)
        assert np.array_equal(((a * b) * c).c, (a * (b * c)).c)
        assert np.array_equal((a * (b + c)).c, (a * b + a * c).c)


def test_sine_series():
    s = lift("v", (0.0, 0.0), 4).sin()
    assert s.c[0, 1] == 1.0
    assert s.c[0, 3] == pytest.approx(-1.0 / 6.0, rel=1e-15)
    assert s.c[0, 0] == 0.0 and s.c[0, 2] == 0.0 and s.c[0, 4] == 0.0


def test_sqrt_binomial_series():
    sq = (1.0 + lift("u", (0.0, 0.0), 2)).sqrt()
    assert sq.c[0, 0] == 1.0
    assert sq.c[1, 0] == pytest.approx(0.5, rel=1e-15)
    assert sq.c[2, 0] == pytest.approx(-0.125, rel=1e-15)


def test_cosh_log_identity():
    u = lift("u", (2.0, 0.0), 3)
    direct = u.log().cosh()
    reference = (u + 1.0 / u) * 0.5
    assert np.abs(direct.c - reference.c).max() < 1e-14


def test_exp_log_roundtrip():
    rng = random.Random(11)
    for _ in range(10):
        p = random_poly(rng, max_degree=2, int_coeffs=False)
        value = p.eval(0.1, 0.2)
        if value < 0.3:  # the jet's constant term must stay away from 0
            p.c[(0, 0)] = p.c.get((0, 0), 0.0) + (0.3 - value)
        a = poly_jet(p, 0.1, 0.2, 6)
        back = a.log().exp()
        scale = np.maximum(np.abs(a.c), 1.0)
        assert np.abs(back.c - a.c).max() / scale.max() < 1e-12


def test_analytic_domain_errors():
    u = lift("u", (-1.0, 0.0), 3)
    with pytest.raises(EvalDomainError):
        u.sqrt()
    with pytest.raises(EvalDomainError):
        u.log()


def test_partial_monomial():
    u = lift("u", (0.0, 0.0), 6)
    v = lift("v", (0.0, 0.0), 6)
    g = int_pow(u, 2) * int_pow(v, 3)
    assert g.partial(2, 3) == 12.0


def test_partial_sin_sum():
    u = lift("u", (0.0, 0.0), 4)
    v = lift("v", (0.0, 0.0), 4)
    assert (u + v).sin().partial(1, 1) == pytest.approx(0.0, abs=1e-15)


def test_partial_fifth_order_vs_fd_oracle():
    e = parse_expression("u*v^2 + v^5/5")
    jet = eval_expression(e, {"u": lift("u", (0.0, 0.0), 7), "v": lift("v", (0.0, 0.0), 7)})
    assert jet.partial(0, 5) == pytest.approx(24.0, abs=1e-12)

    def plain(uu, vv):
        return eval_expression(e, {"u": uu, "v": vv})

    fd = richardson_partial(plain, 0.0, 0.0, 0, 5, h=0.15)
    assert jet.partial(0, 5) == pytest.approx(fd, rel=1e-5)


def test_partial_order_exceeded():
    with pytest.raises(JetOrderError):
        lift("u", (0.0, 0.0), 2).partial(2, 1)


def test_deflate_exact_factor():
    u = lift("u", (0.5, 0.0), 4)
    v = lift("v", (0.5, 0.0), 4)
    h = deflate_v(v * (2.0 + 3.0 * u), 1)
    assert h.c[0, 0] == 3.5 and h.c[1, 0] == 3.0


def test_deflate_52_transverse_quotient():
    e = [parse_expression(t) for t in ("u", "u^2 + v^2/2", "u*v^2 + v^5/5")]
    bu = lift("u", (0.0, 0.0), 7)
    bv = lift("v", (0.0, 0.0), 7)
    f = JetVec3(*[eval_expression(c, {"u": bu, "v": bv}) for c in e])
    h = f.d_dv().deflate_v(1)
    assert np.allclose(h.value, [0.0, 1.0, 0.0], atol=1e-15)


def test_deflate_rejects_nondivisible():
    u = lift("u", (0.0, 0.0), 3)
    v = lift("v", (0.0, 0.0), 3)
    with pytest.raises(DeflationError, match="not divisible"):
        deflate_v(u + v, 1)


def test_deflate_requires_axis_base():
    with pytest.raises(ValueError):
        deflate_v(lift("v", (0.0, 0.1), 3), 1)


def test_deflate_mul_roundtrip_exact():
    rng = random.Random(5)
    for _ in range(20):
        a = poly_jet(random_poly(rng), 0.7, 0.0, 6)
        v = lift("v", (0.7, 0.0), 6)
        back = deflate_v(v * a, 1)
        assert np.array_equal(back.c, a.truncated(back.order).c)


def test_compose_scaling():
    a = int_pow(lift("u", (0.0, 0.0), 5), 2)
    s = lift("u", (0.0, 0.0), 5)
    t = lift("v", (0.0, 0.0), 5)
    got = compose(a, s * 2.0, t)
    assert got.c[2, 0] == 4.0
    assert np.abs(got.c).sum() == 4.0


def test_compose_shear():
    u = lift("u", (0.0, 0.0), 7)
    v = lift("v", (0.0, 0.0), 7)
    got = compose(u * v, u + v * v * 0.5, v)
    assert got.c[1, 1] == 1.0
    assert got.c[0, 3] == 0.5


def test_compose_matches_substitution_oracle():
    rng = random.Random(21)
    for _ in range(10):
        a = random_poly(rng, max_degree=3)
        su = random_poly(rng, max_degree=2)
        sv = random_poly(rng, max_degree=2)
        su.c[(0, 0)] = 0.0
        sv.c[(0, 0)] = 0.0
        order = 6
        got = compose(
            poly_jet(a, 0.0, 0.0, order), poly_jet(su, 0.0, 0.0, order), poly_jet(sv, 0.0, 0.0, order)
        )
        want = a.compose(su, sv).taylor_at(0.0, 0.0, order)
        assert np.allclose(got.c, want, rtol=0, atol=1e-10 * max(1.0, np.abs(want).max()))


def test_recenter_exact_on_polynomials():
    rng = random.Random(31)
    p = random_poly(rng, max_degree=4)
    a = poly_jet(p, 0.2, 0.0, 7)
    moved = a.recenter_v(0.3)
    direct = poly_jet(p, 0.2, 0.3, 7)
    assert np.allclose(moved.c, direct.c, atol=1e-12)


def test_batched_bases_broadcast():
    u0 = np.array([1.0, 2.0, 3.0])
    u = lift("u", (u0, np.zeros(3)), 4)
    r = (u * u).sqrt()
    assert np.allclose(r.value, u0)
    assert r.c.shape == (3, 5, 5)
