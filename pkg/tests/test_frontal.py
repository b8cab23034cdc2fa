import math
import random

import numpy as np
import pytest

from frontallab import example_surface
from frontallab.classify import normalform_surface
from frontallab.errors import DeflationError, PreconditionError, UmbilicError
from frontallab.expr import parse_expression
from frontallab.frontal import (
    adapt_at_point,
    classify_front,
    evaluate_point,
    frame_bundle,
    invariant_derivatives,
    invariant_profile,
    invariants_at,
    psi_profile,
    ridge_report,
)
from frontallab.surfaces import SurfaceDef

from oracles import fit_slope, richardson_partial


@pytest.fixture(scope="module")
def s52():
    return example_surface("paper-52")


def test_52_point_values(s52):
    p = evaluate_point(s52, 0.0, 0.0)
    assert p.kappa1 == pytest.approx(2.0, abs=1e-12)
    assert p.kappa2 == pytest.approx(-2.0, abs=1e-12)
    assert p.gauss == pytest.approx(-4.0, abs=1e-12)
    assert p.mean == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(p.nu, [0.0, 0.0, 1.0], atol=1e-14)
    assert np.allclose(p.h, [0.0, 1.0, 0.0], atol=1e-14)


def test_fold_point_values():
    p = evaluate_point(example_surface("fold"), 0.3, 0.0)
    assert np.allclose(p.nu, [0.0, 0.0, 1.0], atol=1e-15)
    assert p.L == p.M == p.N == 0.0
    assert p.gauss == 0.0 and p.mean == 0.0
    assert p.umbilic


def test_52_offaxis_fundamentals_match_fd_oracle(s52):
    u0, v0 = 0.1, 0.2
    p = evaluate_point(s52, u0, v0)

    def f(uu, vv):
        return np.array(
            [uu, uu**2 + vv**2 / 2.0, uu * vv**2 + vv**5 / 5.0]
        )

    def nu(uu, vv):
        fu = np.array([1.0, 2 * uu, vv**2])
        h = np.array([0.0, 1.0, 2 * uu + vv**3])
        n = np.cross(fu, h)
        return n / np.linalg.norm(n)

    # independent finite-difference assembly of K and H
    def comp(g, i, j, k):
        return richardson_partial(lambda a, b: g(a, b)[k], u0, v0, i, j, h=1e-3)

    fu = np.array([comp(f, 1, 0, k) for k in range(3)])
    fv = np.array([comp(f, 0, 1, k) for k in range(3)])
    nuu = np.array([comp(nu, 1, 0, k) for k in range(3)])
    nuv = np.array([comp(nu, 0, 1, k) for k in range(3)])
    h = fv / v0
    nu1 = nuv / v0
    E, F, G = fu @ fu, fu @ h, h @ h
    L, M = -fu @ nuu, -h @ nuu
    N1 = -h @ nu1
    W = E * G - F * F
    K_ref = (L * N1 - M * M) / W
    H_ref = (E * N1 - 2 * F * M + G * L) / (2 * W)
    assert p.gauss == pytest.approx(K_ref, rel=1e-7)
    assert p.mean == pytest.approx(H_ref, rel=1e-7)


def test_psi_cuspidal_edge_value():
    _, psi, _ = psi_profile(example_surface("cuspidal-edge"), [0.0])
    assert float(psi[0]) == pytest.approx(1.5, abs=1e-12)


def test_psi_fold_identically_zero():
    us = np.linspace(-0.4, 0.4, 17)
    _, psi, _ = psi_profile(example_surface("fold"), us)
    assert np.abs(psi).max() == 0.0


def test_psi_52_identically_zero(s52):
    us = np.linspace(-0.4, 0.4, 17)
    _, psi, _ = psi_profile(s52, us)
    assert np.abs(psi).max() < 1e-10


@pytest.mark.parametrize(
    "name,tag,k",
    [
        ("cuspidal-edge", "Front", None),
        ("ccr", "KNonFront", 1),
        ("s1-plus", "KNonFront", 2),
        ("s1-minus", "KNonFront", 2),
        ("52-germ", "PureFrontal", None),
        ("fold", "PureFrontal", None),
        ("72-ccr", "PureFrontal", None),
    ],
)
def test_classify_front(name, tag, k):
    fc = classify_front(example_surface(name), 0.0)
    assert fc.tag == tag
    if k is not None:
        assert fc.k == k


def test_adapt_52_identity_at_origin(s52):
    nb, residual, raw = adapt_at_point(s52, 0.0)
    assert float(residual) < 1e-12
    assert nb.chart.alpha == pytest.approx(1.0)
    assert nb.chart.beta == pytest.approx(1.0)
    assert nb.chart.shear == pytest.approx(0.0, abs=1e-15)


def test_adapt_helicoid_speed():
    s = example_surface("helicoid")
    nb, residual, raw = adapt_at_point(s, 0.0)
    assert float(residual) < 1e-12
    assert float(np.asarray(nb.chart.alpha)) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-14)


def test_52_invariants(s52):
    inv = invariants_at(s52, 0.0)
    assert inv.kappa_s == pytest.approx(2.0, abs=1e-12)
    assert inv.kappa_nu == pytest.approx(0.0, abs=1e-12)
    assert inv.kappa_t == pytest.approx(2.0, abs=1e-12)
    assert inv.kappa_c == pytest.approx(0.0, abs=1e-12)
    assert inv.r_b == pytest.approx(0.0, abs=1e-12)
    assert inv.r_c == pytest.approx(72.0, abs=1e-10)


def test_fold_invariants_all_zero():
    inv = invariants_at(example_surface("fold"), 0.17)
    for value in (inv.kappa_s, inv.kappa_nu, inv.kappa_t, inv.kappa_c, inv.r_b, inv.r_c):
        assert value == pytest.approx(0.0, abs=1e-12)


def test_52_germ_invariants():
    inv = invariants_at(example_surface("52-germ"), 0.0)
    assert inv.kappa_nu == pytest.approx(0.0, abs=1e-12)
    assert inv.kappa_t == pytest.approx(0.0, abs=1e-12)
    assert abs(inv.r_c) > 1.0  # nonzero: the degree-5 transverse asymmetry


def test_non_pure_frontal_rejected():
    with pytest.raises(DeflationError, match="not pure-frontal"):
        invariants_at(example_surface("cuspidal-edge"), 0.0)


def test_invariant_derivatives_52(s52):
    der = invariant_derivatives(s52, 0.0)
    assert der.kappa_t.d1 == pytest.approx(0.0, abs=1e-8)
    assert der.kappa_nu.d1 == pytest.approx(-4.0, abs=1e-8)
    assert der.kappa_nu.d1_err < 1e-6


def test_fold_derivatives_zero():
    der = invariant_derivatives(example_surface("fold"), 0.0)
    for est in (der.kappa_s, der.kappa_nu, der.kappa_t, der.r_b, der.r_c):
        assert est.d1 == pytest.approx(0.0, abs=1e-10)
        assert est.d2 == pytest.approx(0.0, abs=1e-8)


def test_rc_derivative_matches_dense_sampling(s52):
    der = invariant_derivatives(s52, 0.0)
    us = np.linspace(-0.01, 0.01, 21)
    prof = invariant_profile(s52, us)
    slope = fit_slope(us, prof.r_c)  # dense least-squares oracle
    # convert the internal-parameter slope to arc length (speed = 1 at 0)
    assert der.r_c.d1 == pytest.approx(slope, rel=5e-4, abs=1e-4)


def test_chart_invariance_under_admissible_changes(s52):
    rng = random.Random(7)
    base = invariants_at(s52, 0.0)
    for _ in range(5):
        a = rng.uniform(0.5, 2.0)
        b = rng.uniform(-1.0, 1.0)
        c = rng.uniform(0.5, 2.0)
        xs = f"({a}*u + {b}/2*v^2)"
        vs = f"({c}*v)"
        comps = []
        for comp in ("u", "u^2 + v^2/2", "u*v^2 + v^5/5"):
            rewritten = comp.replace("u", "U").replace("v", "V")
            comps.append(parse_expression(rewritten.replace("U", xs).replace("V", vs)))
        pert = SurfaceDef("52-perturbed", tuple(comps), "v", 0.0, (-0.24, 0.24), (-0.24, 0.24))
        inv = invariants_at(pert, 0.0)
        assert inv.kappa_s == pytest.approx(base.kappa_s, abs=1e-7)
        assert inv.kappa_nu == pytest.approx(base.kappa_nu, abs=1e-7)
        assert inv.kappa_t == pytest.approx(base.kappa_t, abs=1e-7)
        assert inv.r_b == pytest.approx(base.r_b, abs=1e-7)
        assert inv.r_c == pytest.approx(base.r_c, abs=1e-6)
        assert inv.residual < 1e-10


def test_deflation_division_overlap_band(s52):
    # both transverse-quotient branches agree across the switching window
    for v in (0.5e-4, 1.5e-4, 5e-4):
        near = frame_bundle(s52, 0.12, 0.0).recentered(v)
        off = frame_bundle(s52, np.array([0.12]), np.array([max(v, 1.01e-4)]))
        if v <= 1e-4:
            continue
        assert np.abs(near.h.value.reshape(3) - off.h.value.reshape(3)).max() < 1e-9
        assert abs(float(np.asarray(near.gauss.value)) - float(off.gauss.value[0])) < 1e-9


def test_transverse_kappa_derivative_identity(s52):
    # (kappa_1)_v = r_c (kappa_1 - kappa_nu) / (48 sqrt(H^2 - K)) at the point
    nb, _, _ = adapt_at_point(s52, 0.0)
    inv = invariants_at(s52, 0.0)
    k1v = float(np.asarray(nb.kappa(1).partial(0, 1)).reshape(()))
    gamma = float(np.asarray(nb.Gamma.value).reshape(()))
    assert k1v == pytest.approx(
        inv.r_c * (inv.kappa1 - inv.kappa_nu) / (48.0 * math.sqrt(gamma)), abs=1e-10
    )
    assert k1v == pytest.approx(1.5, abs=1e-10)


def test_ridge_52_order_zero(s52):
    for j in (1, 2):
        rr = ridge_report(s52, 0.0, j)
        assert rr.order == 0
        assert not rr.subparabolic_other


def test_ridge_uv2_surface_is_first_order():
    s = normalform_surface(1.0, 0.0, 1.0, 0.0, 0.0, name="uv2")
    rr = ridge_report(s, 0.0, 1)
    assert rr.order >= 1
    assert rr.subparabolic_other


def test_ridge_refuses_at_umbilic():
    with pytest.raises(UmbilicError):
        ridge_report(example_surface("fold"), 0.0, 1)


def test_ridge_rc_equivalence_random_family():
    # V_j kappa_j = 0 exactly when the secondary cuspidal curvature vanishes
    rng = random.Random(23)
    for _ in range(20):
        a2 = rng.uniform(-1.5, 1.5)
        a3 = rng.uniform(-0.5, 0.5)
        c2u = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5)
        c4 = rng.uniform(-0.2, 0.2)
        c5u = rng.choice([0.0, rng.uniform(0.1, 0.4)])
        s = normalform_surface(a2, a3, c2u, c4, c5u, name="rnd")
        inv = invariants_at(s, 0.0)
        rr = ridge_report(s, 0.0, 1)
        is_ridge = rr.order != 0
        rc_zero = abs(inv.r_c) <= 1e-6
        assert is_ridge == rc_zero, (a2, a3, c2u, c4, c5u, inv.r_c, rr.v_kappa)


def test_classify_front_boundary_point_rejected(s52):
    with pytest.raises(PreconditionError):
        classify_front(s52, 0.5)


def test_second_transverse_fundamental_derivatives_identity(s52):
    # L_vv = kappa_t' + kappa_s (kappa_nu - r_b/3) and
    # M_vv = r_b'/3 + 2 kappa_s kappa_t in the normalized chart at the point
    nb, _, _ = adapt_at_point(s52, 0.0)
    inv = invariants_at(s52, 0.0)
    der = invariant_derivatives(s52, 0.0)
    l_vv = float(np.asarray(nb.L.partial(0, 2)).reshape(()))
    m_vv = float(np.asarray(nb.M.partial(0, 2)).reshape(()))
    assert l_vv == pytest.approx(
        der.kappa_t.d1 + inv.kappa_s * (inv.kappa_nu - inv.r_b / 3.0), abs=1e-9
    )
    assert m_vv == pytest.approx(der.r_b.d1 / 3.0 + 2.0 * inv.kappa_s * inv.kappa_t, abs=1e-9)


def test_focal_normal_transverse_derivative_closed_form(s52):
    # (e_1)_v on the axis equals
    # r_c kappa_t (k1 - kappa_nu) / (48 D^3 sqrt(H^2-K)) ((k1 - kappa_nu) T - kappa_t h)
    nb, _, _ = adapt_at_point(s52, 0.0)
    inv = invariants_at(s52, 0.0)
    d1 = math.sqrt(inv.kappa_t**2 + (inv.kappa1 - inv.kappa_nu) ** 2)
    coeff = (
        inv.r_c
        * inv.kappa_t
        * (inv.kappa1 - inv.kappa_nu)
        / (48.0 * d1**3 * math.sqrt(inv.gamma))
    )
    tangent = nb.fu.value.reshape(3)
    hhat = nb.h.value.reshape(3)
    predicted = coeff * ((inv.kappa1 - inv.kappa_nu) * tangent - inv.kappa_t * hhat)
    got = nb.focal_normal(1).d_dv().value.reshape(3)
    assert np.abs(got - predicted).max() < 1e-10
