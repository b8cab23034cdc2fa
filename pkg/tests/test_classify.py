import math

import numpy as np
import pytest

from frontallab import example_surface
from frontallab.config import DEFAULT_TOL
from frontallab.classify import (
    classify_focal_point,
    classify_nr_developable,
    classify_nr_nondevelopable,
    frame_ode_synthesize,
    normalform_surface,
    phi_oracle,
    pure_propagation_check,
    synthesized_suite,
)
from frontallab.errors import PreconditionError, UmbilicError


@pytest.fixture(scope="module")
def suite_reports():
    out = []
    for case in synthesized_suite():
        fr = frame_ode_synthesize(
            case["kappa_s"], case["kappa_nu"], case["kappa_t"], name=case["name"]
        )
        if case["developable"]:
            rep = classify_nr_developable(fr, case["u0"])
            phi = None
        else:
            w0 = 1.0 / case["kappa_nu"](case["u0"])
            rep = classify_nr_nondevelopable(fr, case["u0"], w0)
            phi = phi_oracle(fr, case["u0"], w0)
        out.append((case, fr, rep, phi))
    return out


def test_suite_verdicts_match_prescription(suite_reports):
    for case, _, rep, _ in suite_reports:
        assert rep.verdict == case["expected"], (case["name"], rep.criteria)
        assert rep.margin > 1.0


def test_phi_oracle_consistency(suite_reports):
    for case, _, rep, phi in suite_reports:
        if phi is None:
            continue
        assert phi.whitney_cross_cap == (rep.verdict == "CrossCap"), case["name"]
        if rep.verdict == "S1Minus":
            assert phi.s1_sign < 0
        if rep.verdict == "S1Plus":
            assert phi.s1_sign > 0


def test_ab_positive_for_degenerate_developable_branch(suite_reports):
    fired = 0
    for case, _, rep, _ in suite_reports:
        if rep.verdict == "CuspidalS1Plus":
            fired += 1
            assert rep.criteria["ab_product"].value > 0.0
    assert fired >= 3


def test_threshold_shrink_never_flips_verdicts(suite_reports):
    tight = DEFAULT_TOL.with_overrides(band_lo=DEFAULT_TOL.band_lo / 10, band_hi=DEFAULT_TOL.band_hi / 10)
    for case, fr, rep, _ in suite_reports:
        if case["developable"]:
            rep2 = classify_nr_developable(fr, case["u0"], tol=tight)
        else:
            w0 = 1.0 / case["kappa_nu"](case["u0"])
            rep2 = classify_nr_nondevelopable(fr, case["u0"], w0, tol=tight)
        assert rep2.verdict in (rep.verdict, "Unclassified")


def test_phi_oracle_refuses_developable():
    fr = frame_ode_synthesize(lambda u: 1.0, lambda u: 1.0 + u, lambda u: 0.0)
    with pytest.raises(PreconditionError):
        phi_oracle(fr, 0.0, 1.0)


def test_classify_nondev_rejects_nonsingular_point():
    fr = frame_ode_synthesize(lambda u: 1.0, lambda u: 1.0, lambda u: u)
    with pytest.raises(PreconditionError, match="not a singular point"):
        classify_nr_nondevelopable(fr, 0.2, 1.0)


def test_cross_cap_phi_values():
    fr = frame_ode_synthesize(lambda u: 1.0, lambda u: 1.0, lambda u: u)
    phi = phi_oracle(fr, 0.0, 1.0)
    assert phi.phi == pytest.approx(0.0, abs=1e-9)
    # phi_w equals the torsion derivative at the singular ruling
    assert phi.phi_w == pytest.approx(1.0, abs=1e-9)


# -- frame integration -------------------------------------------------------------


def test_frame_ode_zero_curvatures_line():
    fr = frame_ode_synthesize(lambda u: 0.0, lambda u: 0.0, lambda u: 0.0)
    f = fr.frame(np.array([0.3, -0.2]))
    assert np.allclose(f["gamma"], [[0.3, 0, 0], [-0.2, 0, 0]], atol=1e-14)
    assert np.allclose(f["nu"], [[0, 0, 1], [0, 0, 1]], atol=1e-14)


def test_frame_ode_circle():
    fr = frame_ode_synthesize(lambda u: 0.0, lambda u: 1.0, lambda u: 0.0, u_range=(0.0, 3.2))
    f = fr.frame(np.array([math.pi / 2, math.pi]))
    assert np.allclose(f["gamma"][0], [1.0, 0.0, 1.0], atol=1e-6)
    assert np.allclose(f["gamma"][1], [0.0, 0.0, 2.0], atol=1e-6)
    # normal turns toward the curve: nu' = -kappa_nu T
    assert np.allclose(f["nu"][0], [-1.0, 0.0, 0.0], atol=1e-6)


def test_frame_roundtrip_recovers_invariants():
    fr = frame_ode_synthesize(
        lambda u: 1.0 + 0.5 * u, lambda u: 1.0 - u, lambda u: 0.3 * u * u, step=1e-3
    )
    us = np.linspace(-0.4, 0.4, 17)
    ks, kn, kt = fr.recovered_invariants(us)
    assert np.abs(ks - (1.0 + 0.5 * us)).max() < 1e-7
    assert np.abs(kn - (1.0 - us)).max() < 1e-7
    assert np.abs(kt - 0.3 * us * us).max() < 1e-7


def test_frame_stays_orthonormal():
    fr = frame_ode_synthesize(lambda u: 2.0, lambda u: -1.0, lambda u: 1.5)
    eye = np.eye(3)
    for e in fr.frames[:: len(fr.frames) // 10]:
        assert np.abs(e @ e.T - eye).max() < 1e-12


# -- focal classification ------------------------------------------------------------


def test_focal_52_regular():
    rep = classify_focal_point(example_surface("paper-52"), 1, 0.0)
    assert rep.verdict == "Regular"


def test_focal_helicoid_first_kind_not_ccr():
    rep = classify_focal_point(example_surface("helicoid"), 1, 0.0)
    assert rep.verdict == "FirstKind"
    assert not rep.criteria["r_c_d1"].passed  # r_c' = 0: no cuspidal cross cap


def test_focal_umbilic_guard():
    with pytest.raises(UmbilicError):
        classify_focal_point(example_surface("fold"), 1, 0.0)


def test_focal_ccr_family_verdict_and_rho_routes():
    s = normalform_surface(1.0, 0.0, 1.0, 0.0, 0.2, name="nf")
    rep = classify_focal_point(s, 1, 0.0)
    assert rep.verdict == "CuspidalCrossCap"
    assert rep.criteria["rho_d1_consistency"].passed
    assert rep.criteria["r_c_d1"].value == pytest.approx(72.0, abs=1e-4)


def test_pure_propagation_helicoid():
    rep = pure_propagation_check(example_surface("helicoid"), 1)
    assert rep.hypotheses_met and rep.passed
    assert rep.trace_axis_distance < 1e-8
    assert rep.max_abs_psi < 1e-8
    assert all(o == 1 for o in rep.ridge_orders)


def test_pure_propagation_52_hypotheses_not_met():
    rep = pure_propagation_check(example_surface("paper-52"), 1)
    assert not rep.hypotheses_met
    assert not rep.passed
    assert any("r_c" in note for note in rep.notes)


def test_pure_propagation_synthesized_family():
    s = normalform_surface(0.8, 0.1, 1.0, 0.1, 0.0, name="c5-zero", half_width=0.3)
    rep = pure_propagation_check(s, 1)
    assert rep.hypotheses_met and rep.passed
