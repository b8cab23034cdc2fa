"""Verification suite: every headline identity and example value, checked.

Each check row carries what was computed, what was expected, the tolerance,
and the verdict; the CLI renders them as a table and exits nonzero on any
failure.  The same rows back the acceptance test module.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_ORDER, DEFAULT_TOL, Tolerances
from .errors import InputError
from .expr import parse_expression, eval_expression
from .jets import Jet2, deflate_v, lift
from .frontal import (
    FrameBundle,
    adapt_at_point,
    classify_front,
    eval_values,
    evaluate_point,
    frame_bundle,
    invariant_derivatives,
    invariants_at,
    psi_profile,
    ridge_report,
)
from .derived import (
    congruence_check,
    focal_curvature_prediction,
    focal_eval,
    focal_psi_profile,
    focal_singular_trace,
    trace_v_of_u,
)
from .classify import (
    classify_focal_point,
    classify_nr_developable,
    classify_nr_nondevelopable,
    frame_ode_synthesize,
    normalform_surface,
    phi_oracle,
    pure_propagation_check,
    synthesized_suite,
)
from .registry import example_surface

SUITES = ("jets", "paper-52", "helicoid", "germs", "identities", "traces", "classifiers", "ccr")


@dataclass
class CheckRow:
    check_id: str
    reference: str
    computed: float
    expected: float
    tolerance: float
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "id": self.check_id,
            "reference": self.reference,
            "computed": self.computed,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "note": self.note,
        }


def _num(check_id, reference, computed, expected, tolerance, note="") -> CheckRow:
    passed = abs(computed - expected) <= tolerance
    return CheckRow(check_id, reference, float(computed), float(expected), float(tolerance), bool(passed), note)


def _bound(check_id, reference, computed, bound, note="") -> CheckRow:
    return CheckRow(check_id, reference, float(computed), 0.0, float(bound), bool(computed <= bound), note)


def _flag(check_id, reference, ok: bool, note="") -> CheckRow:
    return CheckRow(check_id, reference, 1.0 if ok else 0.0, 1.0, 0.5, bool(ok), note)


# ---------------------------------------------------------------------------
# jets


def _expression_corpus():
    return [
        ("u*v^2 + v^5/5", (0.3, 0.2)),
        ("u^2 + v^2/2", (1.0, 2.0)),
        ("sin(u)*cos(v) + u^3", (0.4, -0.3)),
        ("exp(u/2)*log(2 + v)", (0.5, 0.25)),
        ("sqrt(1 + u^2 + v^2)", (-0.3, 0.7)),
        ("tanh(u) + atan(v)*u", (0.2, 0.6)),
        ("cosh(u)*sin(v) - v^4", (-0.5, 0.8)),
        ("u/(2 + v) + tan(v/4)", (1.2, 0.3)),
        ("(u + v)^3 - u*v", (0.7, -0.2)),
        ("pi*u^2 - e*v^3", (0.9, 0.4)),
    ]


def _fd1(g, x, h):
    return (g(x - 2 * h) - 8 * g(x - h) + 8 * g(x + h) - g(x + 2 * h)) / (12 * h)


def _fd_partial(f, u0, v0, i, j, h):
    """Nested 4th-order central differences for the (i, j) mixed partial."""
    if i > 0:
        return _fd1(lambda x: _fd_partial(f, x, v0, i - 1, j, h), u0, h)
    if j > 0:
        return _fd1(lambda y: _fd_partial(f, u0, y, i, j - 1, h), v0, h)
    return f(u0, v0)


def _richardson_partial(f, u0, v0, i, j, h):
    d_h = _fd_partial(f, u0, v0, i, j, h)
    d_h2 = _fd_partial(f, u0, v0, i, j, h / 2)
    return (16 * d_h2 - d_h) / 15


def check_jets(order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> list[CheckRow]:
    rows = []
    worst = 0.0
    worst_id = ""
    for text, (u0, v0) in _expression_corpus():
        expr = parse_expression(text)
        bu = lift("u", (u0, v0), order)
        bv = lift("v", (u0, v0), order)
        jet = eval_expression(expr, {"u": bu, "v": bv})

        def plain(uu, vv):
            return eval_expression(expr, {"u": uu, "v": vv})

        for i in range(4):
            for j in range(4 - i):
                if i + j == 0:
                    continue
                exact = jet.partial(i, j)
                approx = _richardson_partial(plain, u0, v0, i, j, 1e-2)
                scale = max(1.0, abs(exact))
                rel = abs(exact - approx) / scale
                if rel > worst:
                    worst, worst_id = rel, f"{text} d({i},{j})"
    rows.append(
        _bound(
            "jets.partials-vs-fd",
            "jet partials (total order <= 3) vs Richardson finite differences over the corpus",
            worst,
            1e-5,
            note=f"worst: {worst_id}",
        )
    )

    rng = random.Random(20240817)
    exact_roundtrip = True
    for _ in range(20):
        c = np.zeros((order + 1, order + 1))
        for i in range(order):
            for j in range(order - i):
                c[i, j] = rng.randint(-6, 6)
        a = Jet2(0.0, 0.0, order, c)
        v = lift("v", (0.0, 0.0), order)
        back = deflate_v(v * a, 1)
        if not np.array_equal(back.c, a.truncated(back.order).c):
            exact_roundtrip = False
    rows.append(
        _flag(
            "jets.deflate-mul-roundtrip",
            "deflate_v(v * a, 1) reproduces a exactly on random integer polynomials",
            exact_roundtrip,
        )
    )
    return rows


# ---------------------------------------------------------------------------
# degree-5 cuspidal example


def check_paper52(order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> list[CheckRow]:
    s = example_surface("paper-52")
    rows = []
    inv = invariants_at(s, 0.0, order=order, tol=tol)
    for name, got, want in (
        ("kappa_s", inv.kappa_s, 2.0),
        ("kappa_nu", inv.kappa_nu, 0.0),
        ("kappa_t", inv.kappa_t, 2.0),
        ("kappa_c", inv.kappa_c, 0.0),
        ("r_b", inv.r_b, 0.0),
        ("r_c", inv.r_c, 72.0),
    ):
        rows.append(
            _num(
                f"52.invariants.{name}",
                f"axis invariant {name} of the degree-5 example at 0",
                got,
                want,
                1e-8,
            )
        )
    der = invariant_derivatives(s, 0.0, order=order, tol=tol)
    rows.append(
        _num("52.kappa_t-d1", "kappa_t'(0) of the degree-5 example", der.kappa_t.d1, 0.0, 1e-6)
    )
    rows.append(
        _num("52.kappa_nu-d1", "kappa_nu'(0) of the degree-5 example", der.kappa_nu.d1, -4.0, 1e-6)
    )

    p = evaluate_point(s, 0.0, 0.0, order=order, tol=tol)
    rows.append(_num("52.kappa1", "principal curvature kappa_1 at 0", p.kappa1, 2.0, 1e-8))
    rows.append(_num("52.kappa2", "principal curvature kappa_2 at 0", p.kappa2, -2.0, 1e-8))
    rows.append(_num("52.gauss", "Gaussian curvature at 0", p.gauss, -4.0, 1e-8))
    rows.append(_num("52.mean", "mean curvature at 0", p.mean, 0.0, 1e-8))

    href = 3.0 / (2.0 * math.sqrt(2.0))
    for j, want_h in ((1, -href), (2, href)):
        fp = focal_eval(s, j, (0.0, 0.0), order=order, tol=tol)
        kp, hp = focal_curvature_prediction(s, j, 0.0, order=order, tol=tol)
        rows.append(
            _num(
                f"52.focal-K.c{j}.direct",
                f"focal sheet C{j} Gaussian curvature at 0 (fundamental forms)",
                fp.gauss,
                -1.0,
                1e-8,
            )
        )
        rows.append(
            _num(
                f"52.focal-H.c{j}.direct",
                f"focal sheet C{j} mean curvature at 0 (fundamental forms)",
                fp.mean,
                want_h,
                1e-8,
            )
        )
        rows.append(
            _num(
                f"52.focal-K.c{j}.closed",
                f"focal sheet C{j} Gaussian curvature at 0 (invariant closed form)",
                kp,
                -1.0,
                1e-8,
            )
        )
        rows.append(
            _num(
                f"52.focal-H.c{j}.closed",
                f"focal sheet C{j} mean curvature at 0 (invariant closed form)",
                hp,
                want_h,
                1e-8,
            )
        )
        rows.append(
            _bound(
                f"52.focal.c{j}.two-route",
                f"agreement of the two focal-curvature routes for C{j}",
                max(abs(fp.gauss - kp), abs(fp.mean - hp)),
                1e-8,
            )
        )

    # transverse derivative of kappa_1 against the secondary-curvature form
    nb, _, _ = adapt_at_point(s, 0.0, order=order, tol=tol)
    k1v = float(np.asarray(nb.kappa(1).partial(0, 1)).reshape(()))
    gamma = float(np.asarray(nb.Gamma.value).reshape(()))
    pred = inv.r_c * (p.kappa1 - inv.kappa_nu) / (48.0 * math.sqrt(gamma))
    rows.append(
        _num(
            "52.dkappa1-dv",
            "transverse kappa_1 derivative vs r_c (kappa_1 - kappa_nu) / (48 sqrt(H^2-K))",
            k1v,
            pred,
            1e-7,
            note=f"closed-form value {pred:.6f}",
        )
    )
    rows.append(_num("52.dkappa1-dv.value", "the same derivative's literal value", k1v, 1.5, 1e-7))
    return rows


# ---------------------------------------------------------------------------
# helicoid


def check_helicoid(order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> list[CheckRow]:
    s = example_surface("helicoid")
    rows = []
    # principal curvatures: the constructed normal is opposite to the
    # reference chart normal, so the reference formula lands on kappa_2
    for uo in (0.5, 1.0, 2.0):
        w = math.log(uo)
        p = evaluate_point(s, 0.1, w, order=order, tol=tol)
        d2 = 1.0 + 6.0 * uo**2 + uo**4
        rows.append(
            _num(
                f"helicoid.kappa.u={uo}",
                "principal curvature -4u^2/(1+6u^2+u^4) (label: kappa_2 for this normal)",
                p.kappa2,
                -4.0 * uo**2 / d2,
                1e-9,
            )
        )
        rows.append(
            _num(
                f"helicoid.kappa-sum.u={uo}",
                "minimality: kappa_1 + kappa_2 = 0 on the helicoid",
                p.kappa1 + p.kappa2,
                0.0,
                1e-9,
            )
        )
    # focal sheet C1: positions, curvatures, symmetry
    def c1_ref(uo, vo):
        d = math.sqrt(1.0 + 6.0 * uo**2 + uo**4)
        return np.array(
            [
                -(d * math.cos(vo) + (1.0 + uo**2) * math.sin(vo)) / (2.0 * uo),
                -(d * math.sin(vo) - (1.0 + uo**2) * math.cos(vo)) / (2.0 * uo),
                -(d / 4.0) * (1.0 + 1.0 / uo**2) + vo,
            ]
        )

    for uo in (0.5, 2.0):
        w = math.log(uo)
        fp = focal_eval(s, 1, (0.25, w), order=order, tol=tol)
        d2 = 1.0 + 6.0 * uo**2 + uo**4
        rows.append(
            _num(
                f"helicoid.KC1.u={uo}",
                "focal Gaussian curvature 4u^4/(1+6u^2+u^4)^2 "
                "(reference text prints the denominator unsquared; see notes)",
                fp.gauss,
                4.0 * uo**4 / d2**2,
                1e-8,
                note="unsquared denominator contradicts the fold symmetry C1(1/u,v)=C1(u,v)",
            )
        )
        rows.append(
            _num(
                f"helicoid.HC1.u={uo}",
                "focal mean curvature u/(sqrt2 (1+u^2)) (sign flips with the normal; "
                "reference normal is opposite ours)",
                fp.mean,
                uo / (math.sqrt(2.0) * (1.0 + uo**2)),
                1e-8,
            )
        )
        rows.append(
            _bound(
                f"helicoid.C1-position.u={uo}",
                "focal sheet position against the closed-form parametrization",
                float(np.abs(fp.point - c1_ref(uo, 0.25)).max()),
                1e-9,
            )
        )
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        uo = float(rng.uniform(0.55, 1.9))
        vo = float(rng.uniform(-1.0, 1.0))
        a = focal_eval(s, 1, (vo, math.log(uo)), order=order, tol=tol).point
        b = focal_eval(s, 1, (vo, math.log(1.0 / uo)), order=order, tol=tol).point
        scale = max(1.0, float(np.abs(a).max()))
        worst = max(worst, float(np.abs(a - b).max()) / scale)
    rows.append(
        _bound(
            "helicoid.C1-symmetry",
            "fold symmetry C1(1/u, v) = C1(u, v) at 50 random points (relative)",
            worst,
            1e-12,
        )
    )

    rep = pure_propagation_check(s, 1, order=order, tol=tol)
    rows.append(_flag("helicoid.pure-propagation.hypotheses", "r_c vanishes along the fold curve and the ridge is first order", rep.hypotheses_met))
    rows.append(
        _bound(
            "helicoid.SC1-axis",
            "singular set of C1 coincides with the fold curve (max |v| of trace)",
            rep.trace_axis_distance if rep.trace_axis_distance is not None else math.inf,
            1e-8,
        )
    )
    rows.append(
        _bound(
            "helicoid.psiC1",
            "front-degeneracy function of C1 vanishes along the trace",
            rep.max_abs_psi if rep.max_abs_psi is not None else math.inf,
            1e-8,
        )
    )
    kmax = 1.0 / 16.0  # closed-form maximum of |K_C1| over the chart
    hmax = 1.0 / (2.0 * math.sqrt(2.0))  # closed-form maximum of |H_C1|
    worst_k = max(b[1] for b in rep.curvature_band_max)
    worst_h = max(b[2] for b in rep.curvature_band_max)
    rows.append(
        _bound(
            "helicoid.KC1-bounded",
            "sampled |K_C1| within its closed-form maximum",
            worst_k,
            kmax + 1e-6,
        )
    )
    rows.append(
        _bound(
            "helicoid.HC1-bounded",
            "sampled |H_C1| within its closed-form maximum",
            worst_h,
            hmax + 1e-6,
        )
    )
    return rows


# ---------------------------------------------------------------------------
# germ fixtures


def check_germs(order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> list[CheckRow]:
    rows = []
    ce = example_surface("cuspidal-edge")
    fc = classify_front(ce, 0.0, order=order, tol=tol)
    _, psi0, _ = psi_profile(ce, [0.0], order=order, tol=tol)
    rows.append(_flag("germs.cuspidal-edge.front", "cuspidal edge germ classified Front", fc.tag == "Front"))
    rows.append(
        _num(
            "germs.cuspidal-edge.psi0",
            "psi(0) = 3/2 for the cuspidal edge germ (hand determinant)",
            float(psi0[0]),
            1.5,
            1e-9,
        )
    )
    ccr = classify_front(example_surface("ccr"), 0.0, order=order, tol=tol)
    rows.append(
        _flag(
            "germs.ccr.k-non-front",
            "cuspidal cross cap germ is a 1-non-front point",
            ccr.tag == "KNonFront" and ccr.k == 1,
            note=f"tag={ccr.tag} k={ccr.k}",
        )
    )
    for name in ("52-germ", "fold", "72-ccr"):
        surf = example_surface(name)
        cls = classify_front(surf, 0.0, order=order, tol=tol)
        lo, hi = surf.internal_u_range
        _, psi, _ = psi_profile(surf, np.linspace(lo + 0.05, hi - 0.05, 41), order=order, tol=tol)
        rows.append(
            _flag(
                f"germs.{name}.pure-frontal",
                f"{name} germ classified PureFrontal",
                cls.tag == "PureFrontal",
                note=f"tag={cls.tag}",
            )
        )
        rows.append(
            _bound(
                f"germs.{name}.psi-profile",
                f"max |psi| along the axis of {name}",
                float(np.max(np.abs(psi))),
                1e-10,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# structural identities


def _grid_points(surface, n):
    ulo, uhi = surface.internal_u_range
    vlo, vhi = surface.internal_v_range
    upad, vpad = 0.02 * (uhi - ulo), 0.02 * (vhi - vlo)
    us = np.linspace(ulo + upad, uhi - upad, n)
    vs = np.linspace(vlo + vpad, vhi - vpad, n)
    return np.meshgrid(us, vs, indexing="ij")


def check_identities(order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> list[CheckRow]:
    rows = []
    rng = np.random.default_rng(42)

    for name in ("paper-52", "helicoid", "52-germ", "fold"):
        s = example_surface(name)
        ulo, uhi = s.internal_u_range
        vlo, vhi = s.internal_v_range
        us = rng.uniform(ulo + 0.05, uhi - 0.05, 100)
        vs = rng.uniform(vlo + 0.05, vhi - 0.05, 100)
        ws = rng.uniform(-1.0, 1.0, 100)
        pts = congruence_check(s, np.stack([us, vs, ws], axis=-1), order=order, tol=tol)
        rows.append(
            _bound(
                f"identities.congruence.{name}",
                f"normal-congruence Jacobian factorization on {name} (100 random points)",
                max(p.residual for p in pts),
                1e-8,
            )
        )

    for name in ("paper-52", "helicoid"):
        s = example_surface(name)
        uu, vv = _grid_points(s, 41)

        def extract(b: FrameBundle) -> dict:
            out = {}
            nu_val = b.nu.value
            out["frontal"] = np.max(
                np.stack(
                    [
                        np.abs(np.asarray(b.fu.dot(b.nu).value)),
                        np.abs(np.asarray(b.fv.dot(b.nu).value)),
                        np.abs(np.linalg.norm(nu_val, axis=-1) - 1.0),
                    ]
                ),
                axis=0,
            )
            x1w, x2w, y1w, y2w = b.weingarten
            res_u = b.nu_u - (b.fu.scaled(x1w) + b.h.scaled(x2w))
            res_v = b.nu_v - (b.fu.scaled(b.bind_v * y1w) + b.h.scaled(b.bind_v * y2w))
            out["weingarten"] = np.maximum(
                np.linalg.norm(res_u.value, axis=-1), np.linalg.norm(res_v.value, axis=-1)
            )
            rod = np.zeros_like(out["frontal"])
            orth = np.zeros_like(out["frontal"])
            dcv = np.zeros_like(out["frontal"])
            for j in (1, 2):
                v1, v2 = b.principal_vector(j)
                k = b.kappa(j)
                dnu = b.nu_u.scaled(v1) + b.nu_v.scaled(v2)
                df = b.fu.scaled(v1) + b.fv.scaled(v2)
                rod = np.maximum(rod, np.linalg.norm((dnu + df.scaled(k)).value, axis=-1))
                x = b.x_vec(j)
                c = b.focal(j)
                cu, cv = c.d_du(), c.d_dv()
                orth = np.maximum(
                    orth,
                    np.maximum(
                        np.abs(np.asarray(x.dot(cu).value)), np.abs(np.asarray(x.dot(cv).value))
                    ),
                )
                dc = cu.scaled(v1) + cv.scaled(v2)
                resid = dc - b.nu.scaled(b.v_rho(j))
                dcv = np.maximum(dcv, np.linalg.norm(resid.value, axis=-1))
            out["rodrigues"] = rod
            out["focal-orth"] = orth
            out["dCj-identity"] = dcv
            return out

        vals = eval_values(s, uu, vv, extract, order=order, tol=tol)
        for key, ref in (
            ("frontal", "frontal condition <df, nu> = 0, |nu| = 1"),
            ("weingarten", "normal-derivative expansion in the modified frame"),
            ("rodrigues", "d nu(V_j) = -kappa_j df(V_j)"),
            ("focal-orth", "x_j normal to the focal sheet"),
            ("dCj-identity", "dC_j(V_j) = (V_j rho_j) nu"),
        ):
            rows.append(
                _bound(
                    f"identities.{key}.{name}",
                    f"{ref} on a 41x41 grid of {name}",
                    float(np.max(vals[key])),
                    1e-8,
                )
            )

    # area density vanishes on the axis with nonzero transverse derivative
    worst_lam = 0.0
    worst_dlam = math.inf
    for name in ("paper-52", "helicoid", "cuspidal-edge", "ccr", "s1-plus", "s1-minus", "52-germ", "fold", "72-ccr"):
        s = example_surface(name)
        lo, hi = s.internal_u_range
        us = np.linspace(lo + 0.05, hi - 0.05, 21)
        b = frame_bundle(s, us, np.zeros_like(us), order=order, tol=tol)
        worst_lam = max(worst_lam, float(np.max(np.abs(b.lam.value))))
        worst_dlam = min(worst_dlam, float(np.min(np.abs(b.lam.partial(0, 1)))))
    rows.append(
        _bound(
            "identities.lambda-axis",
            "signed area density vanishes along the singular axis (all examples)",
            worst_lam,
            1e-9,
        )
    )
    rows.append(
        _flag(
            "identities.lambda-nondegenerate",
            "transverse area-density derivative nonzero on the axis (all examples)",
            worst_dlam > 1e-6,
            note=f"min |lambda_v| = {worst_dlam:.3e}",
        )
    )
    return rows


# ---------------------------------------------------------------------------
# focal singular traces


def check_traces(order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> list[CheckRow]:
    rows = []
    s52 = example_surface("paper-52")
    tr = focal_singular_trace(s52, 1, order=order, tol=tol, cells=101)
    min_dist = float(np.min(np.linalg.norm(tr.points, axis=1))) if not tr.empty else math.inf
    rows.append(
        _flag(
            "traces.52-avoids-origin",
            "singular trace of C1 avoids a 0.05-ball around the degree-5 point",
            min_dist > 0.05,
            note=f"min parameter distance {min_dist:.3f}",
        )
    )

    ridge = normalform_surface(1.0, 0.0, 1.0, 0.0, 0.0, name="uv2-ridge")
    v0 = trace_v_of_u(ridge, 1, np.array([0.0]), order=order, tol=tol)[0]
    rows.append(
        _bound(
            "traces.ridge-through-origin",
            "singular trace of C1 passes through the origin for (u, u^2+v^2/2, u v^2)",
            abs(float(v0)),
            1e-10,
        )
    )
    tr = focal_singular_trace(ridge, 1, order=order, tol=tol, cells=101)
    nearest = int(np.argmin(np.linalg.norm(tr.points, axis=1)))
    kind = tr.kinds[nearest]
    rr = ridge_report(ridge, 0.0, 1, order=order, tol=tol)
    expected_kind = "first" if rr.order == 1 else ("second" if rr.order != 0 else "none")
    rows.append(
        _flag(
            "traces.ridge-kind-consistency",
            "trace kind tag matches the ridge-order prediction",
            kind == expected_kind,
            note=f"kind={kind}, ridge order={rr.order}",
        )
    )
    return rows


# ---------------------------------------------------------------------------
# classifier suite


def check_classifiers(order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> list[CheckRow]:
    rows = []
    agree = 0
    phi_ok = True
    ab_ok = True
    cases = synthesized_suite()
    for case in cases:
        fr = frame_ode_synthesize(
            case["kappa_s"], case["kappa_nu"], case["kappa_t"], name=case["name"]
        )
        if case["developable"]:
            rep = classify_nr_developable(fr, case["u0"], tol=tol)
            if rep.verdict == "CuspidalS1Plus":
                ab = rep.criteria.get("ab_product")
                if ab is None or not (ab.value > 0.0):
                    ab_ok = False
        else:
            w0 = 1.0 / case["kappa_nu"](case["u0"])
            rep = classify_nr_nondevelopable(fr, case["u0"], w0, tol=tol)
            ph = phi_oracle(fr, case["u0"], w0, tol=tol)
            if ph.whitney_cross_cap != (rep.verdict == "CrossCap"):
                phi_ok = False
            if rep.verdict == "S1Minus" and ph.s1_sign >= 0:
                phi_ok = False
            if rep.verdict == "S1Plus" and ph.s1_sign <= 0:
                phi_ok = False
        if rep.verdict == case["expected"]:
            agree += 1
    rows.append(
        _num(
            "classifiers.agreement",
            "synthesized ruled-surface suite: verdicts match the prescribed branch",
            agree,
            len(cases),
            0.0,
            note=f"{agree}/{len(cases)}",
        )
    )
    rows.append(
        _flag(
            "classifiers.phi-consistency",
            "signed-volume recognition function agrees with every nondevelopable verdict",
            phi_ok,
        )
    )
    rows.append(
        _flag(
            "classifiers.ab-positivity",
            "recognition product positive whenever the degenerate developable branch fires",
            ab_ok,
        )
    )
    return rows


# ---------------------------------------------------------------------------
# focal cuspidal-cross-cap consistency


def _ccr_family():
    return [
        (1.0, 0.0, 1.0, 0.0, 0.2),
        (0.5, 0.3, 1.0, 0.1, -0.3),
        (-1.0, 0.2, 0.8, 0.0, 0.25),
        (1.5, -0.2, 1.2, 0.05, 0.15),
        (0.8, 0.1, -1.0, -0.05, -0.2),
    ]


def check_ccr(order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> list[CheckRow]:
    rows = []
    for idx, params in enumerate(_ccr_family()):
        s = normalform_surface(*params, name=f"nf-{idx}")
        rep = classify_focal_point(s, 1, 0.0, order=order, tol=tol)
        prof = focal_psi_profile(s, 1, order=order, tol=tol, samples=13, u_window=(-0.06, 0.06))
        coef = np.polynomial.polynomial.polyfit(prof.u, prof.psi, 3)
        slope = float(coef[1])
        verdict_ccr = rep.verdict == "CuspidalCrossCap"
        psi_nonzero = abs(slope) > 1e-6
        rows.append(
            _flag(
                f"ccr.case-{idx}",
                "cuspidal-cross-cap inequality verdict equals the slope test on psi of C1",
                verdict_ccr == psi_nonzero,
                note=f"verdict={rep.verdict}, psi'(0)={slope:+.3e}",
            )
        )
    return rows


# ---------------------------------------------------------------------------
# suite runner


_SUITE_FUNCS = {
    "jets": check_jets,
    "paper-52": check_paper52,
    "helicoid": check_helicoid,
    "germs": check_germs,
    "identities": check_identities,
    "traces": check_traces,
    "classifiers": check_classifiers,
    "ccr": check_ccr,
}


def run_suite(name: str, *, order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> list[CheckRow]:
    if name == "all":
        rows = []
        for fn in _SUITE_FUNCS.values():
            rows.extend(fn(order, tol))
        return rows
    if name not in _SUITE_FUNCS:
        raise InputError(f"unknown verification suite {name!r} (one of {', '.join(SUITES)} or 'all')")
    return _SUITE_FUNCS[name](order, tol)
