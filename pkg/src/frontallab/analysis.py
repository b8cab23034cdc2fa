"""Full per-point analysis report: the aggregation behind `analyze`.

Each section runs independently; numerical-precondition failures are caught
and reported per section with a remedy hint instead of aborting the whole
report (a cuspidal-edge germ, for instance, has a perfectly good psi
classification but no pure-frontal invariants).
"""
from __future__ import annotations

import numpy as np

from .config import DEFAULT_ORDER, DEFAULT_TOL, Tolerances
from .errors import NumericalError
from .frontal import (
    classify_front,
    evaluate_point,
    invariant_derivatives,
    invariant_profile,
    invariants_at,
    ridge_report,
)
from .derived import (
    focal_one_sided_limits,
    nr_developable_test,
    nr_noncylindrical,
    nr_singular_points,
)
from .classify import classify_focal_point, classify_nr_developable, classify_nr_nondevelopable
from .surfaces import SurfaceDef

_HINTS = {
    "DeflationError": "the point may not be pure-frontal; psi classification still applies",
    "UmbilicError": "principal machinery needs kappa_t != 0; invariants and psi still apply",
    "GammaNegativeError": "check the chart declaration or raise the jet order",
    "FrameDegeneracyError": "the declared chart degenerates here; adjust ranges",
    "PreconditionError": "outside the operation's stated domain",
}


def _guard(errors: dict, section: str, fn):
    try:
        return fn()
    except NumericalError as err:
        hint = _HINTS.get(type(err).__name__, "")
        errors[section] = {"kind": type(err).__name__, "message": str(err), "hint": hint}
        return None


def analyze_surface(
    surface: SurfaceDef,
    u0: float,
    v0: float = 0.0,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    profile_samples: int = 0,
) -> dict:
    errors: dict = {}
    report: dict = {
        "surface": surface.name,
        "chart": {
            "transverse_param": surface.transverse_param,
            "singular_value": surface.singular_value,
            "internal_u_range": list(surface.internal_u_range),
            "internal_v_range": list(surface.internal_v_range),
        },
        "at": {"u": u0, "v": v0},
    }

    point = _guard(errors, "point", lambda: evaluate_point(surface, u0, v0, order=order, tol=tol))
    if point is not None:
        report["point"] = point.as_dict()

    fc = _guard(errors, "front_class", lambda: classify_front(surface, u0, order=order, tol=tol))
    if fc is not None:
        report["front_class"] = fc.as_dict()

    inv = _guard(errors, "invariants", lambda: invariants_at(surface, u0, order=order, tol=tol))
    if inv is not None:
        report["invariants"] = inv.as_dict()
        der = _guard(
            errors,
            "invariant_derivatives",
            lambda: invariant_derivatives(surface, u0, order=order, tol=tol),
        )
        if der is not None:
            report["invariant_derivatives"] = der.as_dict()
        ridges = {}
        for j in (1, 2):
            rr = _guard(
                errors, f"ridge_j{j}", lambda j=j: ridge_report(surface, u0, j, order=order, tol=tol)
            )
            if rr is not None:
                ridges[f"j{j}"] = rr.as_dict()
        if ridges:
            report["ridge"] = ridges

    nr: dict = {}
    dev = _guard(errors, "nr", lambda: nr_developable_test(surface, order=order, tol=tol))
    if dev is not None:
        nr["developable"] = dev.developable
        nr["max_abs_kappa_t"] = dev.max_abs_kappa_t
        nr["torsion_evidence_mismatch"] = dev.evidence_max_mismatch
        nr["noncylindrical"] = _guard(
            errors, "nr_cylinder", lambda: nr_noncylindrical(surface, order=order, tol=tol)
        )
        if nr["noncylindrical"]:
            trace = _guard(
                errors, "nr_trace", lambda: nr_singular_points(surface, order=order, tol=tol)
            )
            if trace is not None:
                nr["singular_points"] = [
                    {"u": float(p[0]), "w": float(p[1]), "kind": k}
                    for p, k in zip(trace.points, trace.kinds)
                ]
                nr["notes"] = trace.notes
                if dev.developable:
                    rep = _guard(
                        errors,
                        "nr_classification",
                        lambda: classify_nr_developable(surface, u0, order=order, tol=tol),
                    )
                    if rep is not None:
                        nr["classification_at_u"] = rep.as_dict()
                else:
                    classifications = []
                    for p in trace.points:
                        rep = _guard(
                            errors,
                            f"nr_classification_u={p[0]:.6g}",
                            lambda p=p: classify_nr_nondevelopable(
                                surface, float(p[0]), float(p[1]), order=order, tol=tol
                            ),
                        )
                        if rep is not None:
                            classifications.append(rep.as_dict())
                    nr["classifications"] = classifications
    report["nr"] = nr

    focal: dict = {}
    for j in (1, 2):
        rep = _guard(
            errors,
            f"focal_j{j}",
            lambda j=j: classify_focal_point(surface, j, u0, order=order, tol=tol),
        )
        if rep is not None:
            focal[f"j{j}"] = rep.as_dict()
            limits = _guard(
                errors,
                f"focal_limits_j{j}",
                lambda j=j: focal_one_sided_limits(surface, j, u0, order=order, tol=tol),
            )
            if limits is not None:
                focal[f"j{j}"]["one_sided_curvature_limits"] = limits
    report["focal"] = focal

    if profile_samples > 0:
        def build_profile():
            lo, hi = surface.internal_u_range
            pad = 0.02 * (hi - lo)
            us = np.linspace(lo + pad, hi - pad, profile_samples)
            prof = invariant_profile(surface, us, order=order, tol=tol)
            return [prof.at(i).as_dict() for i in range(us.size)]

        prof_rows = _guard(errors, "profile", build_profile)
        if prof_rows is not None:
            report["profile"] = prof_rows

    report["errors"] = errors
    return report
